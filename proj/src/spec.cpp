#include "poker/spec.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace poker {

namespace {

struct Token {
    enum Kind { Word, Punct, End };
    Kind kind = End;
    std::string text;
    int line = 1;
};

std::vector<Token> tokenize(const std::string& text, std::vector<ParseError>* errors) {
    std::vector<Token> out;
    int line = 1;
    size_t i = 0;
    auto word_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '%') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (text.compare(i, 3, "-->") == 0) {
            out.push_back({Token::Punct, "-->", line});
            i += 3;
            continue;
        }
        if (text.compare(i, 2, ":-") == 0) {
            out.push_back({Token::Punct, ":-", line});
            i += 2;
            continue;
        }
        if (std::string("()[]|,./=:").find(c) != std::string::npos) {
            out.push_back({Token::Punct, std::string(1, c), line});
            ++i;
            continue;
        }
        if (c == '+' || c == '-') {  // terminal constants
            out.push_back({Token::Word, std::string(1, c), line});
            ++i;
            continue;
        }
        if (word_char(c)) {
            size_t j = i;
            while (j < text.size() && word_char(text[j])) ++j;
            out.push_back({Token::Word, text.substr(i, j - i), line});
            i = j;
            continue;
        }
        if (errors)
            errors->push_back({line, std::string("unexpected character '") + c + "'"});
        ++i;
    }
    out.push_back({Token::End, "", line});
    return out;
}

struct ParseFail {
    ParseError error;
};

class Parser {
public:
    Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(size_t ahead = 0) const {
        size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }
    bool at_end() const { return peek().kind == Token::End; }
    Token next() {
        Token t = peek();
        if (!at_end()) ++pos_;
        return t;
    }
    bool accept(const std::string& punct) {
        if (peek().kind == Token::Punct && peek().text == punct) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(const std::string& punct) {
        if (!accept(punct)) fail("expected '" + punct + "'");
    }
    std::string expect_word(const std::string& what) {
        if (peek().kind != Token::Word) fail("expected " + what);
        return next().text;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseFail{{peek().line, msg + (peek().kind == Token::End
                                                 ? " at end of input"
                                                 : " near '" + peek().text + "'")}};
    }
    // Error recovery: skip past the next statement terminator.
    void sync() {
        while (!at_end() && !accept(".")) ++pos_;
    }

private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;
};

bool is_var_word(const std::string& w) {
    return !w.empty() && (std::isupper(static_cast<unsigned char>(w[0])) || w[0] == '_');
}

struct VarMap {
    std::map<std::string, int> ids;
    int get(const std::string& name) {
        auto it = ids.find(name);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(ids.size());
        ids.emplace(name, id);
        return id;
    }
};

Term parse_term(Parser& p, VarMap& vars);

Term parse_list(Parser& p, VarMap& vars) {
    p.expect("[");
    if (p.accept("]")) return mk_nil();
    std::vector<Term> elems;
    for (;;) {
        elems.push_back(parse_term(p, vars));
        if (!p.accept(",")) break;
    }
    Term tail = mk_nil();
    if (p.accept("|")) tail = parse_term(p, vars);
    p.expect("]");
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) tail = mk_cons(*it, tail);
    return tail;
}

Term parse_term(Parser& p, VarMap& vars) {
    if (p.peek().kind == Token::Punct && p.peek().text == "[") return parse_list(p, vars);
    std::string w = p.expect_word("a term");
    if (is_var_word(w)) return mk_var(vars.get(w));
    return mk_const(Sym::intern(w));
}

Atom parse_atom(Parser& p, VarMap& vars) {
    Atom a;
    a.pred = Sym::intern(p.expect_word("a predicate name"));
    p.expect("(");
    if (!p.accept(")")) {
        for (;;) {
            a.args.push_back(parse_term(p, vars));
            if (!p.accept(",")) break;
        }
        p.expect(")");
    }
    return a;
}

Clause parse_clause(Parser& p) {
    VarMap vars;
    Clause c;
    c.head = parse_atom(p, vars);
    if (p.accept(":-")) {
        for (;;) {
            c.body.push_back(parse_atom(p, vars));
            if (!p.accept(",")) break;
        }
    }
    p.expect(".");
    c.var_count = static_cast<int>(vars.ids.size());
    return c;
}

// --- metarule / constraint syntax -------------------------------------------

struct SoMap {
    std::vector<std::string> names;
    int get(const std::string& name) {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        names.push_back(name);
        return static_cast<int>(names.size()) - 1;
    }
    std::optional<int> find(const std::string& name) const {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return static_cast<int>(i);
        return std::nullopt;
    }
};

LiteralSchema parse_schema(Parser& p, SoMap& so, VarMap& fo) {
    LiteralSchema s;
    s.so_var = so.get(p.expect_word("a second-order variable"));
    p.expect("(");
    for (;;) {
        s.fo_vars.push_back(fo.get(p.expect_word("a first-order variable")));
        if (!p.accept(",")) break;
    }
    p.expect(")");
    return s;
}

ConstraintPtr parse_constraint(Parser& p, const SoMap& so) {
    std::string op = p.expect_word("a constraint");
    if (op == "true") return c_true();
    p.expect("(");
    auto so_args = [&] {
        std::vector<int> vs;
        for (;;) {
            std::string n = p.expect_word("a second-order variable");
            auto idx = so.find(n);
            if (!idx) p.fail("unknown variable '" + n + "' in constraint");
            vs.push_back(*idx);
            if (!p.accept(",")) break;
        }
        p.expect(")");
        return vs;
    };
    auto two = [&](auto make) {
        auto vs = so_args();
        if (vs.size() != 2) p.fail("constraint '" + op + "' takes two variables");
        return make(vs[0], vs[1]);
    };
    if (op == "eq") return two(c_eq);
    if (op == "neq") return two(c_neq);
    if (op == "cond_neq") return two(c_cond_neq);
    if (op == "cond_leq") return two(c_cond_leq);
    if (op == "cond_geq") return two(c_cond_geq);
    if (op == "target") return c_target(so_args());
    if (op == "invented") return c_invented(so_args());
    if (op == "background") return c_background(so_args());
    if (op == "empty") return c_empty(so_args());
    if (op == "and" || op == "or") {
        std::vector<ConstraintPtr> kids;
        for (;;) {
            kids.push_back(parse_constraint(p, so));
            if (!p.accept(",")) break;
        }
        p.expect(")");
        return op == "and" ? c_and(std::move(kids)) : c_or(std::move(kids));
    }
    if (op == "not") {
        auto kid = parse_constraint(p, so);
        p.expect(")");
        return c_not(std::move(kid));
    }
    p.fail("unknown constraint '" + op + "'");
}

Metarule parse_metarule_body(Parser& p) {
    Metarule m;
    m.name = Sym::intern(p.expect_word("a metarule name"));
    p.expect(":");
    SoMap so;
    VarMap fo;
    m.head = parse_schema(p, so, fo);
    if (p.accept(":-")) {
        for (;;) {
            m.body.push_back(parse_schema(p, so, fo));
            if (!p.accept(",")) break;
        }
    }
    if (p.peek().kind == Token::Word && p.peek().text == "where") {
        p.next();
        m.constraint = parse_constraint(p, so);
    }
    p.expect(".");
    m.so_names = so.names;
    m.fo_names.resize(fo.ids.size());
    for (const auto& [name, id] : fo.ids) m.fo_names[static_cast<size_t>(id)] = name;
    return m;
}

// --- spec statements --------------------------------------------------------

std::string terminal_pred_name(Sym terminal) {
    const std::string& s = terminal.str();
    if (s.size() == 1) return preterminal_name(s[0]);
    return s;
}

Clause make_preterminal(Sym pred, const std::vector<Sym>& terminals) {
    Clause c;
    c.head.pred = pred;
    c.head.args = {mk_string(terminals, mk_var(0)), mk_var(0)};
    c.var_count = 1;
    return c;
}

long parse_int(Parser& p, const std::string& w) {
    try {
        size_t used = 0;
        long v = std::stol(w, &used);
        if (used != w.size()) throw std::invalid_argument(w);
        return v;
    } catch (const std::exception&) {
        p.fail("expected an integer, got '" + w + "'");
    }
}

bool parse_bool(Parser& p, const std::string& w) {
    if (w == "true" || w == "1") return true;
    if (w == "false" || w == "0") return false;
    p.fail("expected a boolean, got '" + w + "'");
}

}  // namespace

SpecParseError::SpecParseError(std::vector<ParseError> errs)
    : ConfigError([&errs] {
          std::ostringstream os;
          os << "spec parse failed:";
          for (const auto& e : errs) os << "\n  line " << e.line << ": " << e.message;
          return os.str();
      }()),
      errors(std::move(errs)) {}

const Sonf& ProblemSpec::sonf() const {
    if (inline_sonf) return *inline_sonf;
    const Sonf* s = find_builtin_sonf(sonf_name);
    if (!s) throw ConfigError("unknown SONF: " + sonf_name);
    return *s;
}

LearnProblem ProblemSpec::to_problem() const {
    LearnProblem p;
    p.target = target;
    p.target_arity = target_arity;
    p.labelled = labelled;
    p.unlabelled = unlabelled;
    p.params = params;
    p.sonf = &sonf();
    if (background_auto) {
        std::set<Sym, bool (*)(Sym, Sym)> terminals(natural_less);
        std::function<void(const Term&)> walk = [&](const Term& t) {
            if (t->kind == TermKind::Const) terminals.insert(t->name);
            if (t->kind == TermKind::Cons) {
                walk(t->head);
                walk(t->tail);
            }
        };
        for (const auto& a : labelled)
            for (const auto& arg : a.args) walk(arg);
        for (const auto& a : unlabelled)
            for (const auto& arg : a.args) walk(arg);
        for (Sym t : terminals)
            p.background.clauses.push_back(
                make_preterminal(Sym::intern(terminal_pred_name(t)), {t}));
        p.background.clauses.push_back(make_preterminal(Sym::intern("empty"), {}));
    } else {
        p.background = background;
    }
    p.background.depth_coeff = params.depth_coeff;
    p.sigs.add(target, target_arity, Role::Target);
    register_background_roles(p.background, p.sigs);
    p.alphabet = terminal_alphabet(p.background);
    return p;
}

ProblemSpec parse_spec(const std::string& text) {
    std::vector<ParseError> errors;
    Parser p(tokenize(text, &errors));
    ProblemSpec spec;
    bool have_target = false, have_sonf = false;
    std::vector<Metarule> inline_rules;

    while (!p.at_end()) {
        int stmt_line = p.peek().line;
        try {
            std::string kw = p.expect_word("a declaration");
            if (kw == "target") {
                spec.target = Sym::intern(p.expect_word("a predicate name"));
                p.expect("/");
                spec.target_arity =
                    static_cast<int>(parse_int(p, p.expect_word("an arity")));
                p.expect(".");
                if (spec.target_arity != 2 && spec.target_arity != 4)
                    throw ParseFail{{stmt_line, "target arity must be 2 or 4"}};
                have_target = true;
            } else if (kw == "background") {
                if (p.peek().kind == Token::Word && p.peek().text == "auto") {
                    p.next();
                    p.expect(".");
                    spec.background_auto = true;
                } else {
                    for (;;) {
                        Sym pred = Sym::intern(p.expect_word("a preterminal name"));
                        p.expect("-->");
                        VarMap vars;
                        Term list = parse_list(p, vars);
                        p.expect(".");
                        auto syms = list_syms(list);
                        if (!syms)
                            throw ParseFail{
                                {stmt_line, "preterminal body must be a ground list"}};
                        spec.background.clauses.push_back(make_preterminal(pred, *syms));
                        // more rules in the same declaration: name --> [...]
                        if (!(p.peek().kind == Token::Word &&
                              p.peek(1).kind == Token::Punct && p.peek(1).text == "-->"))
                            break;
                    }
                }
            } else if (kw == "sonf") {
                spec.sonf_name = p.expect_word("a SONF name");
                p.expect(".");
                if (!find_builtin_sonf(spec.sonf_name))
                    throw ParseFail{{stmt_line, "unknown SONF name: " + spec.sonf_name}};
                have_sonf = true;
            } else if (kw == "metarule") {
                inline_rules.push_back(parse_metarule_body(p));
            } else if (kw == "pos" || kw == "unlabelled") {
                VarMap vars;
                Atom a = parse_atom(p, vars);
                p.expect(".");
                for (const auto& arg : a.args)
                    if (!term_ground(arg))
                        throw ParseFail{{stmt_line, "non-ground example: " + to_string(a)}};
                (kw == "pos" ? spec.labelled : spec.unlabelled).push_back(std::move(a));
            } else if (kw == "param") {
                std::string key = p.expect_word("a parameter name");
                p.expect("=");
                std::string val = p.expect_word("a value");
                p.expect(".");
                auto& ps = spec.params;
                if (key == "k") ps.k = static_cast<int>(parse_int(p, val));
                else if (key == "l") ps.l = static_cast<int>(parse_int(p, val));
                else if (key == "gestalt") ps.gestalt = parse_bool(p, val);
                else if (key == "final_union") ps.final_union = parse_bool(p, val);
                else if (key == "reduce") ps.reduce = parse_bool(p, val);
                else if (key == "unfold") ps.unfold_output = parse_bool(p, val);
                else if (key == "max_gen_len") ps.max_gen_len = static_cast<int>(parse_int(p, val));
                else if (key == "depth_coeff") ps.depth_coeff = static_cast<int>(parse_int(p, val));
                else if (key == "max_invented") ps.max_invented = static_cast<int>(parse_int(p, val));
                else if (key == "probe_cap") ps.probe_cap = static_cast<int>(parse_int(p, val));
                else if (key == "seed") spec.seed = static_cast<uint64_t>(parse_int(p, val));
                else throw ParseFail{{stmt_line, "unknown parameter: " + key}};
            } else {
                throw ParseFail{{stmt_line, "unknown declaration: " + kw}};
            }
        } catch (const ParseFail& f) {
            errors.push_back(f.error);
            p.sync();
        }
    }

    if (!inline_rules.empty()) {
        Sonf s;
        s.name = Sym::intern("inline");
        s.metarules = std::move(inline_rules);
        spec.inline_sonf = std::move(s);
        if (have_sonf) errors.push_back({0, "both a SONF name and inline metarules given"});
    }
    if (!have_target) errors.push_back({0, "missing target declaration"});

    if (errors.empty() && have_target) {
        for (const auto& a :
             {std::cref(spec.labelled), std::cref(spec.unlabelled)})
            for (const auto& atom : a.get()) {
                if (atom.pred != spec.target)
                    errors.push_back({0, "example predicate is not the target: " +
                                             to_string(atom)});
                else if (static_cast<int>(atom.args.size()) != spec.target_arity)
                    errors.push_back({0, "arity mismatch: " + to_string(atom)});
            }
        for (const auto& c : spec.background.clauses)
            if (c.head.pred == spec.target)
                errors.push_back({0, "background rule head is the target: " +
                                         c.head.pred.str()});
    }
    if (!errors.empty()) throw SpecParseError(std::move(errors));
    return spec;
}

namespace {

std::optional<std::vector<Sym>> preterminal_body(const Clause& c) {
    if (!c.body.empty() || c.head.args.size() != 2) return std::nullopt;
    std::vector<Sym> syms;
    const TermNode* t = c.head.args[0].get();
    while (t->kind == TermKind::Cons && t->head->kind == TermKind::Const) {
        syms.push_back(t->head->name);
        t = t->tail.get();
    }
    if (t->kind != TermKind::Var || c.head.args[1]->kind != TermKind::Var ||
        t->var != c.head.args[1]->var)
        return std::nullopt;
    return syms;
}

}  // namespace

std::string print_constraint(const ConstraintPtr& c,
                             const std::vector<std::string>& so_names) {
    using K = Constraint::Kind;
    auto vars = [&] {
        std::string s;
        for (size_t i = 0; i < c->vars.size(); ++i) {
            if (i) s += ",";
            s += so_names[static_cast<size_t>(c->vars[i])];
        }
        return s;
    };
    auto kids = [&] {
        std::string s;
        for (size_t i = 0; i < c->kids.size(); ++i) {
            if (i) s += ",";
            s += print_constraint(c->kids[i], so_names);
        }
        return s;
    };
    switch (c->kind) {
        case K::True: return "true";
        case K::Eq: return "eq(" + vars() + ")";
        case K::Neq: return "neq(" + vars() + ")";
        case K::Target: return "target(" + vars() + ")";
        case K::Invented: return "invented(" + vars() + ")";
        case K::Background: return "background(" + vars() + ")";
        case K::Empty: return "empty(" + vars() + ")";
        case K::CondNeq: return "cond_neq(" + vars() + ")";
        case K::CondLeq: return "cond_leq(" + vars() + ")";
        case K::CondGeq: return "cond_geq(" + vars() + ")";
        case K::And: return "and(" + kids() + ")";
        case K::Or: return "or(" + kids() + ")";
        case K::Not: return "not(" + kids() + ")";
    }
    return "true";
}

std::string print_metarule(const Metarule& m) {
    auto schema = [&](const LiteralSchema& s) {
        std::string out = m.so_names[static_cast<size_t>(s.so_var)] + "(";
        for (size_t i = 0; i < s.fo_vars.size(); ++i) {
            if (i) out += ",";
            out += m.fo_names[static_cast<size_t>(s.fo_vars[i])];
        }
        return out + ")";
    };
    std::string out = "metarule " + m.name.str() + ": " + schema(m.head);
    for (size_t i = 0; i < m.body.size(); ++i)
        out += (i == 0 ? ":-" : ",") + schema(m.body[i]);
    if (m.constraint && m.constraint->kind != Constraint::Kind::True)
        out += " where " + print_constraint(m.constraint, m.so_names);
    return out + ".";
}

std::string print_spec(const ProblemSpec& spec) {
    std::ostringstream os;
    os << "target " << spec.target.str() << "/" << spec.target_arity << ".\n";
    if (spec.background_auto) {
        os << "background auto.\n";
    } else {
        for (const auto& c : spec.background.clauses) {
            os << "background " << c.head.pred.str() << " --> [";
            auto syms = preterminal_body(c);
            if (syms)
                for (size_t i = 0; i < syms->size(); ++i)
                    os << (i ? "," : "") << (*syms)[i].str();
            os << "].\n";
        }
    }
    if (spec.inline_sonf) {
        for (const auto& m : spec.inline_sonf->metarules) os << print_metarule(m) << "\n";
    } else {
        os << "sonf " << spec.sonf_name << ".\n";
    }
    for (const auto& a : spec.labelled) os << "pos " << to_string(a) << ".\n";
    for (const auto& a : spec.unlabelled) os << "unlabelled " << to_string(a) << ".\n";
    const auto& ps = spec.params;
    os << "param k=" << ps.k << ".\n";
    os << "param l=" << ps.l << ".\n";
    os << "param gestalt=" << (ps.gestalt ? "true" : "false") << ".\n";
    os << "param final_union=" << (ps.final_union ? "true" : "false") << ".\n";
    os << "param reduce=" << (ps.reduce ? "true" : "false") << ".\n";
    os << "param unfold=" << (ps.unfold_output ? "true" : "false") << ".\n";
    os << "param max_gen_len=" << ps.max_gen_len << ".\n";
    os << "param depth_coeff=" << ps.depth_coeff << ".\n";
    os << "param max_invented=" << ps.max_invented << ".\n";
    os << "param probe_cap=" << ps.probe_cap << ".\n";
    os << "param seed=" << spec.seed << ".\n";
    return os.str();
}

Atom parse_atom_text(const std::string& text) {
    std::vector<ParseError> errors;
    Parser p(tokenize(text, &errors));
    if (!errors.empty()) throw SpecParseError(std::move(errors));
    try {
        VarMap vars;
        Atom a = parse_atom(p, vars);
        p.accept(".");
        if (!p.at_end()) p.fail("trailing input");
        return a;
    } catch (const ParseFail& f) {
        throw SpecParseError({f.error});
    }
}

Clause parse_clause_text(const std::string& text) {
    std::vector<ParseError> errors;
    Parser p(tokenize(text, &errors));
    if (!errors.empty()) throw SpecParseError(std::move(errors));
    try {
        Clause c = parse_clause(p);
        if (!p.at_end()) p.fail("trailing input");
        return c;
    } catch (const ParseFail& f) {
        throw SpecParseError({f.error});
    }
}

Program parse_program_text(const std::string& text) {
    std::vector<ParseError> errors;
    Parser p(tokenize(text, &errors));
    if (!errors.empty()) throw SpecParseError(std::move(errors));
    Program prog;
    try {
        while (!p.at_end()) prog.clauses.push_back(parse_clause(p));
    } catch (const ParseFail& f) {
        throw SpecParseError({f.error});
    }
    return prog;
}

}  // namespace poker
