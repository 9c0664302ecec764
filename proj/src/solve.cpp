#include "poker/solve.hpp"

#include <algorithm>
#include <set>

namespace poker {

Term Bindings::walk(const Term& t) const {
    Term cur = t;
    while (cur->kind == TermKind::Var) {
        auto it = map.find(cur->var);
        if (it == map.end()) return cur;
        cur = it->second;
    }
    return cur;
}

namespace {

bool occurs(int var, const Term& t, const Bindings& bs) {
    Term w = bs.walk(t);
    switch (w->kind) {
        case TermKind::Var: return w->var == var;
        case TermKind::Cons:
            return occurs(var, w->head, bs) || occurs(var, w->tail, bs);
        default: return false;
    }
}

}  // namespace

bool Bindings::bind(int var, const Term& t) {
    if (t->kind == TermKind::Var && t->var == var) return true;
    if (occurs(var, t, *this)) return false;
    map[var] = t;
    trail.push_back(var);
    return true;
}

void Bindings::undo_to(size_t m) {
    while (trail.size() > m) {
        map.erase(trail.back());
        trail.pop_back();
    }
}

bool unify(const Term& a, const Term& b, Bindings& bs) {
    Term x = bs.walk(a), y = bs.walk(b);
    if (x->kind == TermKind::Var) return bs.bind(x->var, y);
    if (y->kind == TermKind::Var) return bs.bind(y->var, x);
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case TermKind::Const: return x->name == y->name;
        case TermKind::Nil: return true;
        case TermKind::Cons:
            return unify(x->head, y->head, bs) && unify(x->tail, y->tail, bs);
        default: return false;
    }
}

bool unify_atoms(const Atom& a, const Atom& b, Bindings& bs) {
    if (a.pred != b.pred || a.args.size() != b.args.size()) return false;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (!unify(a.args[i], b.args[i], bs)) return false;
    return true;
}

std::optional<Bindings> unify(const Atom& a, const Atom& b) {
    Bindings bs;
    if (!unify_atoms(a, b, bs)) return std::nullopt;
    return bs;
}

Term apply_bindings(const Term& t, const Bindings& bs) {
    Term w = bs.walk(t);
    if (w->kind == TermKind::Cons)
        return mk_cons(apply_bindings(w->head, bs), apply_bindings(w->tail, bs));
    return w;
}

Atom apply_bindings(const Atom& a, const Bindings& bs) {
    Atom out;
    out.pred = a.pred;
    for (const auto& arg : a.args) out.args.push_back(apply_bindings(arg, bs));
    return out;
}

namespace {

Term offset_vars(const Term& t, int offset) {
    switch (t->kind) {
        case TermKind::Var: return mk_var(t->var + offset);
        case TermKind::Cons:
            return mk_cons(offset_vars(t->head, offset), offset_vars(t->tail, offset));
        default: return t;
    }
}

Atom offset_atom(const Atom& a, int offset) {
    Atom out;
    out.pred = a.pred;
    for (const auto& arg : a.args) out.args.push_back(offset_vars(arg, offset));
    return out;
}

}  // namespace

Solver::Solver(const Program& prog, int budget) : prog_(prog), budget_(budget) {
    for (const auto& c : prog.clauses) index_[c.head.pred.id()].push_back(&c);
}

bool Solver::run(const std::vector<Atom>& goals, Bindings& bs,
                 const std::function<bool(const Bindings&)>& on_solution) {
    // Caller goal variables must not collide with renamed clause variables.
    int max_var = 0;
    std::function<void(const Term&)> scan = [&](const Term& t) {
        if (t->kind == TermKind::Var) max_var = std::max(max_var, t->var + 1);
        else if (t->kind == TermKind::Cons) {
            scan(t->head);
            scan(t->tail);
        }
    };
    for (const auto& g : goals)
        for (const auto& arg : g.args) scan(arg);
    next_var_ = std::max(next_var_, max_var);

    std::vector<Atom> stack(goals.rbegin(), goals.rend());
    return step(stack, bs, 0, on_solution);
}

bool Solver::step(std::vector<Atom>& goals, Bindings& bs, int depth,
                  const std::function<bool(const Bindings&)>& on_solution) {
    if (goals.empty()) return on_solution(bs);
    if (depth >= budget_ || ++steps_ > step_cap_) {
        budget_hit_ = true;
        return false;
    }
    Atom goal = goals.back();
    goals.pop_back();
    auto it = index_.find(goal.pred.id());
    if (it != index_.end()) {
        for (const Clause* c : it->second) {
            int offset = next_var_;
            next_var_ += c->var_count;
            size_t m = bs.mark();
            Atom head = offset_atom(c->head, offset);
            if (unify_atoms(goal, head, bs)) {
                size_t base = goals.size();
                for (auto bit = c->body.rbegin(); bit != c->body.rend(); ++bit)
                    goals.push_back(offset_atom(*bit, offset));
                if (step(goals, bs, depth + 1, on_solution)) return true;
                goals.resize(base);
            }
            bs.undo_to(m);
            next_var_ = offset;
        }
    }
    goals.push_back(goal);
    return false;
}

// ---------------------------------------------------------------------------
// Exact recognition and generation for chain-form grammar programs.
//
// Grammar clauses produced by the normal forms all look like difference-list
// chains: facts p([c..|X],X) / p(X,X) (or the two-tape analogues) and rules
// whose body literals thread the head arguments linearly, with at most one
// recursive two-tape literal. For such programs, membership of a ground goal
// can be decided exactly by a CYK-style fixpoint over string positions, and
// the entailed strings can be enumerated bottom-up by length. Both avoid the
// exponential backtracking that ambiguous grammars force on plain SLD
// resolution. Anything outside this shape falls back to the budgeted solver.

namespace {

struct GFact {
    Sym head;
    int arity;                 // 2 or 4
    std::vector<Sym> s1, s2;   // emitted prefix per tape
};

struct GRule {
    Sym head;
    int arity;                     // 2 or 4
    std::vector<Sym> pre1, pre2;   // arity-2 body literals per tape, in order
    std::vector<Sym> post1, post2; // after the recursive literal (arity 4)
    Sym rec;                       // the single arity-4 body literal, if any
    bool has_rec = false;
};

struct ChainGrammar {
    bool ok = false;
    std::vector<GFact> facts;
    std::vector<GRule> rules;
};

// A ground-constant prefix ending in a variable: [c1,..,ck|X]. Returns the
// prefix and the tail variable id, or nullopt for any other shape.
std::optional<std::pair<std::vector<Sym>, int>> parse_prefix(const Term& t) {
    std::vector<Sym> prefix;
    Term cur = t;
    while (cur->kind == TermKind::Cons) {
        if (cur->head->kind != TermKind::Const) return std::nullopt;
        prefix.push_back(cur->head->name);
        cur = cur->tail;
    }
    if (cur->kind != TermKind::Var) return std::nullopt;
    return std::make_pair(std::move(prefix), cur->var);
}

bool parse_fact_pair(const Term& a, const Term& b, std::vector<Sym>& out) {
    auto p = parse_prefix(a);
    if (!p || b->kind != TermKind::Var || b->var != p->second) return false;
    out = std::move(p->first);
    return true;
}

ChainGrammar compile_grammar(const Program& prog) {
    ChainGrammar g;
    auto var_of = [](const Term& t) {
        return t->kind == TermKind::Var ? t->var : -1;
    };
    for (const auto& c : prog.clauses) {
        size_t ar = c.head.args.size();
        if (ar != 2 && ar != 4) return g;
        if (c.body.empty()) {
            GFact f{c.head.pred, static_cast<int>(ar), {}, {}};
            if (!parse_fact_pair(c.head.args[0], c.head.args[1], f.s1)) return g;
            if (ar == 4) {
                if (!parse_fact_pair(c.head.args[2], c.head.args[3], f.s2)) return g;
                // The two tapes must use distinct tail variables.
                if (var_of(c.head.args[1]) == var_of(c.head.args[3])) return g;
            }
            g.facts.push_back(std::move(f));
            continue;
        }
        GRule r;
        r.head = c.head.pred;
        r.arity = static_cast<int>(ar);
        std::vector<int> hv;
        for (const auto& arg : c.head.args) {
            int v = var_of(arg);
            if (v < 0) return g;
            for (int prev : hv)
                if (prev == v) return g;
            hv.push_back(v);
        }
        int cur1 = hv[0];
        int cur2 = ar == 4 ? hv[2] : -1;
        for (const auto& lit : c.body) {
            if (lit.args.size() == 2) {
                int u = var_of(lit.args[0]), v = var_of(lit.args[1]);
                if (u < 0 || v < 0 || u == v || v == cur1 || v == cur2) return g;
                if (u == cur1) {
                    (r.has_rec ? r.post1 : r.pre1).push_back(lit.pred);
                    cur1 = v;
                } else if (u == cur2) {
                    (r.has_rec ? r.post2 : r.pre2).push_back(lit.pred);
                    cur2 = v;
                } else {
                    return g;
                }
            } else if (lit.args.size() == 4 && ar == 4 && !r.has_rec) {
                int u = var_of(lit.args[0]), v = var_of(lit.args[1]);
                int x = var_of(lit.args[2]), y = var_of(lit.args[3]);
                if (u != cur1 || x != cur2 || v < 0 || y < 0 || v == y) return g;
                r.rec = lit.pred;
                r.has_rec = true;
                cur1 = v;
                cur2 = y;
            } else {
                return g;
            }
        }
        if (cur1 != hv[1] || (ar == 4 && cur2 != hv[3])) return g;
        g.rules.push_back(std::move(r));
    }
    g.ok = true;
    return g;
}

// Binary relations over string positions 0..n, one per predicate.
using PosRel = std::vector<uint8_t>;  // (n+1) x (n+1), index i*(n+1)+j
using RelMap = std::unordered_map<int, PosRel>;

// Fixpoint of the arity-2 derivability relations over one ground string.
RelMap derive_rel2(const ChainGrammar& g, const std::vector<Sym>& w) {
    int n = static_cast<int>(w.size());
    int stride = n + 1;
    RelMap rel;
    auto table = [&](Sym p) -> PosRel& {
        auto [it, fresh] = rel.try_emplace(p.id());
        if (fresh) it->second.assign(stride * stride, 0);
        return it->second;
    };
    for (const auto& f : g.facts) {
        if (f.arity != 2) continue;
        int k = static_cast<int>(f.s1.size());
        PosRel& t = table(f.head);
        for (int i = 0; i + k <= n; ++i) {
            bool match = true;
            for (int d = 0; d < k; ++d)
                if (w[i + d] != f.s1[d]) match = false;
            if (match) t[i * stride + i + k] = 1;
        }
    }
    bool changed = true;
    std::vector<uint8_t> frontier(stride), next(stride);
    while (changed) {
        changed = false;
        for (const auto& r : g.rules) {
            if (r.arity != 2) continue;
            PosRel& head = table(r.head);
            for (int i = 0; i <= n; ++i) {
                std::fill(frontier.begin(), frontier.end(), 0);
                frontier[i] = 1;
                for (Sym lit : r.pre1) {
                    std::fill(next.begin(), next.end(), 0);
                    auto it = rel.find(lit.id());
                    if (it != rel.end())
                        for (int p = i; p <= n; ++p)
                            if (frontier[p])
                                for (int q = p; q <= n; ++q)
                                    if (it->second[p * stride + q]) next[q] = 1;
                    frontier.swap(next);
                }
                for (int j = i; j <= n; ++j)
                    if (frontier[j] && !head[i * stride + j]) {
                        head[i * stride + j] = 1;
                        changed = true;
                    }
            }
        }
    }
    return rel;
}

// Compose a chain of arity-2 relations into one relation.
PosRel compose_chain(const RelMap& rel, const std::vector<Sym>& chain, int n) {
    int stride = n + 1;
    PosRel out(stride * stride, 0);
    for (int i = 0; i <= n; ++i) out[i * stride + i] = 1;
    for (Sym lit : chain) {
        PosRel next(stride * stride, 0);
        auto it = rel.find(lit.id());
        if (it == rel.end()) return PosRel(stride * stride, 0);
        for (int i = 0; i <= n; ++i)
            for (int p = i; p <= n; ++p)
                if (out[i * stride + p])
                    for (int q = p; q <= n; ++q)
                        if (it->second[p * stride + q]) next[i * stride + q] = 1;
        out.swap(next);
    }
    return out;
}

bool chart_recognize2(const ChainGrammar& g, Sym target,
                      const std::vector<Sym>& w) {
    RelMap rel = derive_rel2(g, w);
    auto it = rel.find(target.id());
    if (it == rel.end()) return false;
    int n = static_cast<int>(w.size());
    return it->second[0 * (n + 1) + n] != 0;
}

bool chart_recognize4(const ChainGrammar& g, Sym target,
                      const std::vector<Sym>& w1, const std::vector<Sym>& w2) {
    int n1 = static_cast<int>(w1.size()), n2 = static_cast<int>(w2.size());
    int s1 = n1 + 1, s2 = n2 + 1;
    RelMap rel1 = derive_rel2(g, w1);
    RelMap rel2 = derive_rel2(g, w2);
    auto idx = [&](int i, int j, int a, int b) {
        return ((i * s1 + j) * s2 + a) * s2 + b;
    };
    std::unordered_map<int, std::vector<uint8_t>> derived;
    auto table = [&](Sym p) -> std::vector<uint8_t>& {
        auto [it, fresh] = derived.try_emplace(p.id());
        if (fresh) it->second.assign(s1 * s1 * s2 * s2, 0);
        return it->second;
    };
    for (const auto& f : g.facts) {
        if (f.arity != 4) continue;
        int k1 = static_cast<int>(f.s1.size()), k2 = static_cast<int>(f.s2.size());
        std::vector<uint8_t>& t = table(f.head);
        for (int i = 0; i + k1 <= n1; ++i) {
            bool m1 = true;
            for (int d = 0; d < k1; ++d)
                if (w1[i + d] != f.s1[d]) m1 = false;
            if (!m1) continue;
            for (int a = 0; a + k2 <= n2; ++a) {
                bool m2 = true;
                for (int d = 0; d < k2; ++d)
                    if (w2[a + d] != f.s2[d]) m2 = false;
                if (m2) t[idx(i, i + k1, a, a + k2)] = 1;
            }
        }
    }
    struct CompiledRule {
        const GRule* r;
        PosRel c1p, c1s, c2p, c2s;
    };
    std::vector<CompiledRule> rules;
    for (const auto& r : g.rules) {
        if (r.arity != 4) continue;
        rules.push_back({&r, compose_chain(rel1, r.pre1, n1),
                         compose_chain(rel1, r.post1, n1),
                         compose_chain(rel2, r.pre2, n2),
                         compose_chain(rel2, r.post2, n2)});
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& cr : rules) {
            std::vector<uint8_t>& head = table(cr.r->head);
            if (!cr.r->has_rec) {
                for (int i = 0; i <= n1; ++i)
                    for (int j = i; j <= n1; ++j) {
                        if (!cr.c1p[i * s1 + j]) continue;
                        for (int a = 0; a <= n2; ++a)
                            for (int b = a; b <= n2; ++b)
                                if (cr.c2p[a * s2 + b] && !head[idx(i, j, a, b)]) {
                                    head[idx(i, j, a, b)] = 1;
                                    changed = true;
                                }
                    }
                continue;
            }
            auto rit = derived.find(cr.r->rec.id());
            if (rit == derived.end()) continue;
            const std::vector<uint8_t>& recd = rit->second;
            for (int z1 = 0; z1 <= n1; ++z1)
                for (int z2 = z1; z2 <= n1; ++z2)
                    for (int v1 = 0; v1 <= n2; ++v1)
                        for (int v2 = v1; v2 <= n2; ++v2) {
                            if (!recd[idx(z1, z2, v1, v2)]) continue;
                            for (int i = 0; i <= z1; ++i) {
                                if (!cr.c1p[i * s1 + z1]) continue;
                                for (int j = z2; j <= n1; ++j) {
                                    if (!cr.c1s[z2 * s1 + j]) continue;
                                    for (int a = 0; a <= v1; ++a) {
                                        if (!cr.c2p[a * s2 + v1]) continue;
                                        for (int b = v2; b <= n2; ++b)
                                            if (cr.c2s[v2 * s2 + b] &&
                                                !head[idx(i, j, a, b)]) {
                                                head[idx(i, j, a, b)] = 1;
                                                changed = true;
                                            }
                                    }
                                }
                            }
                        }
        }
    }
    auto it = derived.find(target.id());
    return it != derived.end() && it->second[idx(0, n1, 0, n2)] != 0;
}

// Ground goal s(W,[]) or s(W1,[],W2,[]) -> the list arguments, else nullopt.
std::optional<std::vector<std::vector<Sym>>> ground_goal_strings(const Atom& goal) {
    if (goal.args.size() != 2 && goal.args.size() != 4) return std::nullopt;
    std::vector<std::vector<Sym>> out;
    for (size_t i = 0; i < goal.args.size(); i += 2) {
        if (goal.args[i + 1]->kind != TermKind::Nil) return std::nullopt;
        auto syms = list_syms(goal.args[i]);
        if (!syms) return std::nullopt;
        out.push_back(std::move(*syms));
    }
    return out;
}

constexpr int kChartMaxLen = 96;        // position-table size guard
constexpr long kGenWorkCap = 8000000;   // bottom-up generation effort guard

// Bottom-up enumeration of the strings (or string pairs) each predicate
// derives, by total length. Returns false if the work cap is hit.
struct SymVecLess {
    bool operator()(const std::vector<Sym>& a, const std::vector<Sym>& b) const {
        return std::lexicographical_compare(
            a.begin(), a.end(), b.begin(), b.end(),
            [](Sym x, Sym y) { return x.id() < y.id(); });
    }
};

using SymVecSet = std::set<std::vector<Sym>, SymVecLess>;

struct GenSets {
    // sets[pred.id()][len] -> canonical keys; pair tapes are separated by a
    // marker entry.
    std::unordered_map<int, std::vector<SymVecSet>> sets;
};

bool chart_generate(const ChainGrammar& g, Sym target, int arity, int max_count,
                    int max_len, const std::vector<Sym>& alphabet,
                    std::vector<Atom>& out) {
    Sym sep = Sym::intern("\x01sep");
    auto joined = [&](const std::vector<Sym>& a,
                      const std::vector<Sym>& b) {
        std::vector<Sym> j = a;
        j.push_back(sep);
        j.insert(j.end(), b.begin(), b.end());
        return j;
    };
    GenSets gs;
    auto sets_of = [&](Sym p) -> std::vector<SymVecSet>& {
        auto [it, fresh] = gs.sets.try_emplace(p.id());
        if (fresh) it->second.assign(max_len + 1, {});
        return it->second;
    };
    long work = 0;
    for (const auto& f : g.facts) {
        int len = static_cast<int>(f.s1.size() + f.s2.size());
        if (len > max_len) continue;
        if (f.arity == 2)
            sets_of(f.head)[len].insert(f.s1);
        else
            sets_of(f.head)[len].insert(joined(f.s1, f.s2));
    }
    int emitted = 0;
    for (int len = 0; len <= max_len && emitted < max_count; ++len) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& r : g.rules) {
                // Components in tape-threading order; for two-tape rules the
                // first tape is assembled from pre1 + rec-src + post1 and the
                // second from pre2 + rec-dst + post2.
                struct Comp {
                    Sym pred;
                    int tape;  // 0, 1, or 2 for the two-tape literal
                };
                std::vector<Comp> comps;
                for (Sym p : r.pre1) comps.push_back({p, 0});
                for (Sym p : r.pre2) comps.push_back({p, 1});
                if (r.has_rec) comps.push_back({r.rec, 2});
                for (Sym p : r.post1) comps.push_back({p, 0});
                for (Sym p : r.post2) comps.push_back({p, 1});
                auto& head_sets = sets_of(r.head);
                std::vector<Sym> t1, t2;
                std::function<bool(size_t, int)> assemble = [&](size_t ci,
                                                                int rem) -> bool {
                    if (++work > kGenWorkCap) return false;
                    if (ci == comps.size()) {
                        if (rem != 0) return true;
                        std::vector<Sym> key =
                            r.arity == 2 ? t1 : joined(t1, t2);
                        if (head_sets[len].insert(std::move(key)).second)
                            changed = true;
                        return true;
                    }
                    auto it = gs.sets.find(comps[ci].pred.id());
                    if (it == gs.sets.end()) return true;
                    for (int l = 0; l <= rem; ++l) {
                        for (const auto& s : it->second[l]) {
                            size_t m1 = t1.size(), m2 = t2.size();
                            if (comps[ci].tape == 0) {
                                t1.insert(t1.end(), s.begin(), s.end());
                            } else if (comps[ci].tape == 1) {
                                t2.insert(t2.end(), s.begin(), s.end());
                            } else {
                                auto mid = std::find(s.begin(), s.end(), sep);
                                t1.insert(t1.end(), s.begin(), mid);
                                t2.insert(t2.end(), mid + 1, s.end());
                            }
                            bool ok = assemble(ci + 1, rem - l);
                            t1.resize(m1);
                            t2.resize(m2);
                            if (!ok) return false;
                        }
                    }
                    return true;
                };
                if (!assemble(0, len)) return false;
            }
        }
        auto it = gs.sets.find(target.id());
        if (it == gs.sets.end()) continue;
        std::vector<Atom> layer;
        for (const auto& s : it->second[len]) {
            Atom a;
            a.pred = target;
            if (arity == 2) {
                a.args = {mk_string(s), mk_nil()};
            } else {
                auto mid = std::find(s.begin(), s.end(), sep);
                a.args = {mk_string({s.begin(), mid}), mk_nil(),
                          mk_string({mid + 1, s.end()}), mk_nil()};
            }
            layer.push_back(std::move(a));
        }
        std::sort(layer.begin(), layer.end(), [&](const Atom& a, const Atom& b) {
            return atom_less(a, b, alphabet);
        });
        for (auto& a : layer) {
            out.push_back(std::move(a));
            if (++emitted >= max_count) break;
        }
    }
    return true;
}

}  // namespace

ProveResult prove(const Atom& goal, const Program& prog) {
    if (auto strings = ground_goal_strings(goal)) {
        bool small = true;
        for (const auto& w : *strings)
            if (static_cast<int>(w.size()) > kChartMaxLen) small = false;
        if (small) {
            ChainGrammar g = compile_grammar(prog);
            if (g.ok) {
                bool ok = strings->size() == 1
                              ? chart_recognize2(g, goal.pred, (*strings)[0])
                              : chart_recognize4(g, goal.pred, (*strings)[0],
                                                 (*strings)[1]);
                return {ok, false};
            }
        }
    }
    int len = atom_string_length(goal);
    Solver solver(prog, prog.depth_coeff * (len + 1));
    Bindings bs;
    bool ok = solver.run({goal}, bs, [](const Bindings&) { return true; });
    return {ok, solver.budget_hit()};
}

Program merge_programs(const Program& a, const Program& b) {
    Program out = a;
    for (const auto& c : b.clauses) out.clauses.push_back(c);
    return out;
}

std::vector<Atom> enumerate_atoms(const Program& prog, Sym target, int arity,
                                  int max_count, int max_len,
                                  const std::vector<Sym>& alphabet) {
    std::vector<Atom> out;
    if (max_count <= 0) return out;
    {
        ChainGrammar g = compile_grammar(prog);
        if (g.ok && chart_generate(g, target, arity, max_count, max_len,
                                   alphabet, out))
            return out;
        out.clear();
    }
    for (int len = 0; len <= max_len; ++len) {
        std::vector<Atom> layer;
        std::set<std::string> seen;
        auto collect = [&](const std::vector<Atom>& goals) {
            Solver solver(prog, prog.depth_coeff * (len + 1));
            Bindings bs;
            solver.run(goals, bs, [&](const Bindings& b) {
                Atom ground = apply_bindings(goals[0], b);
                bool ok = true;
                for (const auto& arg : ground.args)
                    if (!list_syms(arg)) ok = false;
                if (ok && seen.insert(atom_key(ground)).second)
                    layer.push_back(std::move(ground));
                return false;
            });
        };
        if (arity == 2) {
            Term str = mk_nil();
            for (int i = len - 1; i >= 0; --i) str = mk_cons(mk_var(i), str);
            Atom goal{target, {str, mk_nil()}};
            collect({goal});
        } else {
            // arity 4: layer by total length of the two strings
            for (int a = 0; a <= len; ++a) {
                int b = len - a;
                Term in = mk_nil(), outl = mk_nil();
                for (int i = a - 1; i >= 0; --i) in = mk_cons(mk_var(i), in);
                for (int i = b - 1; i >= 0; --i) outl = mk_cons(mk_var(a + i), outl);
                Atom goal{target, {in, mk_nil(), outl, mk_nil()}};
                collect({goal});
            }
        }
        std::sort(layer.begin(), layer.end(), [&](const Atom& a, const Atom& b) {
            return atom_less(a, b, alphabet);
        });
        for (auto& a : layer) {
            out.push_back(std::move(a));
            if (static_cast<int>(out.size()) >= max_count) return out;
        }
    }
    return out;
}

}  // namespace poker
