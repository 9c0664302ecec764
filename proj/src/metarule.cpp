#include "poker/metarule.hpp"

#include <algorithm>

namespace poker {

void SignatureSet::add(Sym name, int arity, Role role) {
    if (contains(name)) throw ConfigError("duplicate predicate symbol: " + name.str());
    if (role == Role::Empty)
        for (const auto& s : symbols_)
            if (s.role == Role::Empty)
                throw ConfigError("more than one empty preterminal");
    symbols_.push_back({name, arity, role});
}

bool SignatureSet::contains(Sym name) const {
    for (const auto& s : symbols_)
        if (s.name == name) return true;
    return false;
}

Role SignatureSet::role_of(Sym name) const {
    for (const auto& s : symbols_)
        if (s.name == name) return s.role;
    throw ConfigError("unknown predicate symbol: " + name.str());
}

int SignatureSet::arity_of(Sym name) const {
    for (const auto& s : symbols_)
        if (s.name == name) return s.arity;
    throw ConfigError("unknown predicate symbol: " + name.str());
}

bool SignatureSet::is_background(Sym name) const {
    Role r = role_of(name);
    return r == Role::Background || r == Role::Empty;
}

bool SignatureSet::is_target(Sym name) const { return role_of(name) == Role::Target; }
bool SignatureSet::is_invented(Sym name) const { return role_of(name) == Role::Invented; }
bool SignatureSet::is_empty(Sym name) const { return role_of(name) == Role::Empty; }

std::vector<Sym> SignatureSet::of_role(Role r) const {
    std::vector<Sym> out;
    for (const auto& s : symbols_)
        if (s.role == r) out.push_back(s.name);
    std::sort(out.begin(), out.end(), [](Sym a, Sym b) { return natural_less(a, b); });
    return out;
}

namespace {

ConstraintPtr mk(Constraint::Kind k, std::vector<int> vars = {},
                 std::vector<ConstraintPtr> kids = {}) {
    auto c = std::make_shared<Constraint>();
    c->kind = k;
    c->vars = std::move(vars);
    c->kids = std::move(kids);
    return c;
}

}  // namespace

ConstraintPtr c_true() { return mk(Constraint::Kind::True); }
ConstraintPtr c_eq(int p, int q) { return mk(Constraint::Kind::Eq, {p, q}); }
ConstraintPtr c_neq(int p, int q) { return mk(Constraint::Kind::Neq, {p, q}); }
ConstraintPtr c_target(std::vector<int> vs) { return mk(Constraint::Kind::Target, std::move(vs)); }
ConstraintPtr c_invented(std::vector<int> vs) { return mk(Constraint::Kind::Invented, std::move(vs)); }
ConstraintPtr c_background(std::vector<int> vs) { return mk(Constraint::Kind::Background, std::move(vs)); }
ConstraintPtr c_empty(std::vector<int> vs) { return mk(Constraint::Kind::Empty, std::move(vs)); }
ConstraintPtr c_cond_neq(int p, int q) { return mk(Constraint::Kind::CondNeq, {p, q}); }
ConstraintPtr c_cond_leq(int p, int q) { return mk(Constraint::Kind::CondLeq, {p, q}); }
ConstraintPtr c_cond_geq(int p, int q) { return mk(Constraint::Kind::CondGeq, {p, q}); }
ConstraintPtr c_and(std::vector<ConstraintPtr> kids) { return mk(Constraint::Kind::And, {}, std::move(kids)); }
ConstraintPtr c_or(std::vector<ConstraintPtr> kids) { return mk(Constraint::Kind::Or, {}, std::move(kids)); }
ConstraintPtr c_not(ConstraintPtr kid) { return mk(Constraint::Kind::Not, {}, {std::move(kid)}); }

bool Metasub::complete() const {
    for (const auto& b : bind)
        if (!b) return false;
    return true;
}

namespace {

Tri tri_not(Tri t) {
    if (t == Tri::Sat) return Tri::Unsat;
    if (t == Tri::Unsat) return Tri::Sat;
    return Tri::Undetermined;
}

// Kleene three-valued evaluation; sound in both directions but may leave
// residual Undetermined answers that exhaustion below resolves.
Tri kleene(const Constraint& c, const Metasub& m, const SignatureSet& sig) {
    auto bound = [&](int v) -> std::optional<Sym> {
        if (v < 0 || v >= static_cast<int>(m.bind.size()))
            throw ConfigError("constraint names unknown second-order variable");
        return m.bind[static_cast<size_t>(v)];
    };
    using K = Constraint::Kind;
    switch (c.kind) {
        case K::True: return Tri::Sat;
        case K::Eq: {
            if (c.vars[0] == c.vars[1]) return Tri::Sat;
            auto p = bound(c.vars[0]), q = bound(c.vars[1]);
            if (p && q) return *p == *q ? Tri::Sat : Tri::Unsat;
            return Tri::Undetermined;
        }
        case K::Neq: {
            if (c.vars[0] == c.vars[1]) return Tri::Unsat;
            auto p = bound(c.vars[0]), q = bound(c.vars[1]);
            if (p && q) return *p == *q ? Tri::Unsat : Tri::Sat;
            return Tri::Undetermined;
        }
        case K::Target:
        case K::Invented:
        case K::Background:
        case K::Empty: {
            bool all_bound = true;
            for (int v : c.vars) {
                auto s = bound(v);
                if (!s) {
                    all_bound = false;
                    continue;
                }
                bool ok = c.kind == K::Target       ? sig.is_target(*s)
                          : c.kind == K::Invented   ? sig.is_invented(*s)
                          : c.kind == K::Background ? sig.is_background(*s)
                                                    : sig.is_empty(*s);
                if (!ok) return Tri::Unsat;
            }
            return all_bound ? Tri::Sat : Tri::Undetermined;
        }
        case K::CondNeq:
        case K::CondLeq:
        case K::CondGeq: {
            auto p = bound(c.vars[0]), q = bound(c.vars[1]);
            if ((p && !sig.is_invented(*p)) || (q && !sig.is_invented(*q)))
                return Tri::Sat;  // antecedent falsified
            if (p && q) {
                bool ok = c.kind == K::CondNeq   ? *p != *q
                          : c.kind == K::CondLeq ? !natural_less(*q, *p)
                                                 : !natural_less(*p, *q);
                return ok ? Tri::Sat : Tri::Unsat;
            }
            return Tri::Undetermined;
        }
        case K::And: {
            bool und = false;
            for (const auto& k : c.kids) {
                Tri t = kleene(*k, m, sig);
                if (t == Tri::Unsat) return Tri::Unsat;
                if (t == Tri::Undetermined) und = true;
            }
            return und ? Tri::Undetermined : Tri::Sat;
        }
        case K::Or: {
            bool und = false;
            for (const auto& k : c.kids) {
                Tri t = kleene(*k, m, sig);
                if (t == Tri::Sat) return Tri::Sat;
                if (t == Tri::Undetermined) und = true;
            }
            return und ? Tri::Undetermined : Tri::Unsat;
        }
        case K::Not: return tri_not(kleene(*c.kids[0], m, sig));
    }
    return Tri::Undetermined;
}

}  // namespace

Tri eval_constraint_partial(const ConstraintPtr& c, const Metasub& m,
                            const SignatureSet& symbols) {
    return kleene(*c, m, symbols);
}

Tri eval_constraint(const ConstraintPtr& c, const Metasub& m,
                    const SignatureSet& symbols) {
    Tri t = kleene(*c, m, symbols);
    if (t != Tri::Undetermined) return t;

    // Exact answer over the finite universe: enumerate grounding extensions.
    std::vector<size_t> unbound;
    for (size_t i = 0; i < m.bind.size(); ++i)
        if (!m.bind[i]) unbound.push_back(i);
    const auto& universe = symbols.all();
    double combos = 1;
    for (size_t i = 0; i < unbound.size(); ++i) combos *= static_cast<double>(universe.size());
    if (universe.empty() || combos > 200000) return Tri::Undetermined;

    Metasub ext = m;
    bool any_sat = false, any_unsat = false;
    std::vector<size_t> idx(unbound.size(), 0);
    while (true) {
        for (size_t i = 0; i < unbound.size(); ++i)
            ext.bind[unbound[i]] = universe[idx[i]].name;
        Tri g = kleene(*c, ext, symbols);
        (g == Tri::Sat ? any_sat : any_unsat) = true;
        if (any_sat && any_unsat) return Tri::Undetermined;
        size_t carry = 0;
        while (carry < idx.size() && ++idx[carry] == universe.size()) idx[carry++] = 0;
        if (carry == idx.size()) break;
    }
    return any_sat ? Tri::Sat : Tri::Unsat;
}

Clause project(const Metasub& m) {
    if (!m.rule || !m.complete())
        throw std::logic_error("project: incomplete metasubstitution");
    auto lit = [&](const LiteralSchema& ls) {
        Atom a;
        a.pred = *m.bind[static_cast<size_t>(ls.so_var)];
        for (int v : ls.fo_vars) a.args.push_back(mk_var(v));
        return a;
    };
    Clause c;
    c.head = lit(m.rule->head);
    for (const auto& b : m.rule->body) c.body.push_back(lit(b));
    return normalize_clause(c);
}

namespace {

bool match_literal(const Atom& a, const LiteralSchema& ls, Metasub& m,
                   std::vector<int>& schema_to_clause,
                   std::vector<int>& clause_to_schema) {
    auto& slot = m.bind[static_cast<size_t>(ls.so_var)];
    if (slot && *slot != a.pred) return false;
    slot = a.pred;
    if (a.args.size() != ls.fo_vars.size()) return false;
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (a.args[i]->kind != TermKind::Var) return false;
        int cv = a.args[i]->var;
        int sv = ls.fo_vars[i];
        if (sv >= static_cast<int>(schema_to_clause.size()) || cv < 0) return false;
        if (cv >= static_cast<int>(clause_to_schema.size()))
            clause_to_schema.resize(static_cast<size_t>(cv) + 1, -1);
        if (schema_to_clause[static_cast<size_t>(sv)] == -1 &&
            clause_to_schema[static_cast<size_t>(cv)] == -1) {
            schema_to_clause[static_cast<size_t>(sv)] = cv;
            clause_to_schema[static_cast<size_t>(cv)] = sv;
        } else if (schema_to_clause[static_cast<size_t>(sv)] != cv ||
                   clause_to_schema[static_cast<size_t>(cv)] != sv) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool matches_sonf(const Clause& c0, const Sonf& sonf, const SignatureSet& symbols) {
    Clause c = normalize_clause(c0);
    for (const auto& rule : sonf.metarules) {
        if (c.body.size() != rule.body.size()) continue;
        Metasub m;
        m.rule = &rule;
        m.bind.assign(static_cast<size_t>(rule.so_count()), std::nullopt);
        std::vector<int> s2c(static_cast<size_t>(rule.fo_count()), -1);
        std::vector<int> c2s;
        bool ok = match_literal(c.head, rule.head, m, s2c, c2s);
        for (size_t i = 0; ok && i < c.body.size(); ++i)
            ok = match_literal(c.body[i], rule.body[i], m, s2c, c2s);
        if (!ok || !m.complete()) continue;
        if (eval_constraint(rule.constraint, m, symbols) == Tri::Sat) return true;
    }
    return false;
}

namespace {

Metarule make_rule(const char* name, std::vector<std::string> so,
                   std::vector<std::string> fo, LiteralSchema head,
                   std::vector<LiteralSchema> body, ConstraintPtr constraint) {
    Metarule m;
    m.name = Sym::intern(name);
    m.so_names = std::move(so);
    m.fo_names = std::move(fo);
    m.head = std::move(head);
    m.body = std::move(body);
    m.constraint = std::move(constraint);
    return m;
}

enum { P = 0, Q = 1, R = 2, S = 3 };

Metarule identity(ConstraintPtr c) {
    return make_rule("identity", {"P", "Q"}, {"x", "y"}, {P, {0, 1}}, {{Q, {0, 1}}}, std::move(c));
}

Metarule chain(ConstraintPtr c) {
    return make_rule("chain", {"P", "Q", "R"}, {"x", "y", "z"}, {P, {0, 1}},
                     {{Q, {0, 2}}, {R, {2, 1}}}, std::move(c));
}

Metarule tri_chain(ConstraintPtr c) {
    return make_rule("tri_chain", {"P", "Q", "R", "S"}, {"x", "y", "z", "u"},
                     {P, {0, 1}}, {{Q, {0, 2}}, {R, {2, 3}}, {S, {3, 1}}},
                     std::move(c));
}

// Table-3 constraints. The printed not(empty(Q,R)) reads as "no listed
// variable is the empty preterminal", so it expands to per-variable negations.
ConstraintPtr cgnf_identity_c() {
    return c_and({c_target({P}), c_or({c_background({Q}), c_empty({Q})})});
}

ConstraintPtr cgnf_chain_c() {
    return c_and({c_neq(P, Q), c_or({c_target({P}), c_invented({P})}),
                  c_not(c_target({Q})), c_not(c_empty({Q})), c_not(c_empty({R})),
                  c_cond_neq(P, Q)});
}

ConstraintPtr cgnf_tri_chain_c() {
    return c_and({c_neq(P, Q), c_neq(Q, R), c_neq(R, S),
                  c_or({c_target({P}), c_invented({P})}), c_not(c_target({Q})),
                  c_not(c_empty({Q})), c_not(c_empty({R})), c_not(c_empty({S})),
                  c_cond_neq(P, Q)});
}

constexpr int kLnfMaxExpansion = 11;  // longest production among the benchmarks

// One-step rewrite metarules over an input and an output difference pair:
// read one symbol, emit its n-symbol expansion, recurse on the rest.
Metarule lnf_base() {
    return make_rule("lnf_base", {"P"}, {"x", "u"}, {P, {0, 0, 1, 1}}, {},
                     c_target({P}));
}

Metarule lnf_rule(int n) {
    // fo vars: x=0 y=1 u=2 v=3 z=4 w1..wn=5..
    std::vector<std::string> so = {"P", "Q"};
    for (int i = 1; i <= n; ++i) so.push_back("R" + std::to_string(i));
    std::vector<std::string> fo = {"x", "y", "u", "v", "z"};
    for (int i = 1; i <= n; ++i) fo.push_back("w" + std::to_string(i));
    std::vector<LiteralSchema> body;
    body.push_back({Q, {0, 4}});
    int prev = 2;  // u
    for (int i = 1; i <= n; ++i) {
        body.push_back({1 + i, {prev, 4 + i}});
        prev = 4 + i;
    }
    body.push_back({P, {4, 1, prev, 3}});
    std::vector<int> bgs = {Q};
    for (int i = 1; i <= n; ++i) bgs.push_back(1 + i);
    ConstraintPtr c = c_and({c_target({P}), c_background(std::move(bgs))});
    std::string name = "lnf_rule_" + std::to_string(n);
    return make_rule(name.c_str(), std::move(so), std::move(fo), {P, {0, 1, 2, 3}},
                     std::move(body), std::move(c));
}

}  // namespace

const std::vector<Metarule>& builtin_metarules() {
    static const std::vector<Metarule>* rules = [] {
        auto* v = new std::vector<Metarule>();
        v->push_back(identity(c_true()));
        v->push_back(make_rule("inverse", {"P", "Q"}, {"x", "y"}, {P, {0, 1}},
                               {{Q, {1, 0}}}, c_true()));
        v->push_back(make_rule("precon", {"P", "Q", "R"}, {"x", "y"}, {P, {0, 1}},
                               {{Q, {0}}, {R, {0, 1}}}, c_true()));
        v->push_back(chain(c_true()));
        v->push_back(tri_chain(c_true()));
        return v;
    }();
    return *rules;
}

const Sonf& builtin_cgnf() {
    static const Sonf* s = [] {
        auto* v = new Sonf();
        v->name = Sym::intern("cgnf");
        v->metarules = {identity(cgnf_identity_c()), chain(cgnf_chain_c()),
                        tri_chain(cgnf_tri_chain_c())};
        return v;
    }();
    return *s;
}

const Sonf& builtin_cgnf_no_trichain() {
    static const Sonf* s = [] {
        auto* v = new Sonf();
        v->name = Sym::intern("cgnf_no_trichain");
        v->metarules = {identity(cgnf_identity_c()), chain(cgnf_chain_c())};
        return v;
    }();
    return *s;
}

const Sonf& builtin_lnf() {
    static const Sonf* s = [] {
        auto* v = new Sonf();
        v->name = Sym::intern("lnf");
        v->metarules.push_back(lnf_base());
        for (int n = 1; n <= kLnfMaxExpansion; ++n) v->metarules.push_back(lnf_rule(n));
        return v;
    }();
    return *s;
}

const Sonf* find_builtin_sonf(const std::string& name) {
    if (name == "cgnf") return &builtin_cgnf();
    if (name == "cgnf_no_trichain") return &builtin_cgnf_no_trichain();
    if (name == "lnf") return &builtin_lnf();
    return nullptr;
}

}  // namespace poker
