#include "poker/term.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace poker {

namespace {

struct Interner {
    std::mutex mu;
    std::vector<std::string> names;
    std::unordered_map<std::string, int> ids;
};

Interner& interner() {
    static Interner* it = new Interner();
    return *it;
}

}  // namespace

Sym Sym::intern(std::string_view name) {
    auto& in = interner();
    std::lock_guard<std::mutex> lock(in.mu);
    std::string key(name);
    auto it = in.ids.find(key);
    if (it != in.ids.end()) return Sym(it->second);
    int id = static_cast<int>(in.names.size());
    in.names.push_back(key);
    in.ids.emplace(std::move(key), id);
    return Sym(id);
}

const std::string& Sym::str() const {
    auto& in = interner();
    std::lock_guard<std::mutex> lock(in.mu);
    return in.names.at(static_cast<size_t>(id_));
}

bool natural_less(const std::string& a, const std::string& b) {
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (std::isdigit(static_cast<unsigned char>(a[i])) &&
            std::isdigit(static_cast<unsigned char>(b[j]))) {
            size_t i0 = i, j0 = j;
            while (i < a.size() && std::isdigit(static_cast<unsigned char>(a[i]))) ++i;
            while (j < b.size() && std::isdigit(static_cast<unsigned char>(b[j]))) ++j;
            std::string da = a.substr(i0, i - i0), db = b.substr(j0, j - j0);
            // strip leading zeros before comparing run lengths
            da.erase(0, std::min(da.find_first_not_of('0'), da.size() - 1));
            db.erase(0, std::min(db.find_first_not_of('0'), db.size() - 1));
            if (da.size() != db.size()) return da.size() < db.size();
            if (da != db) return da < db;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return (a.size() - i) < (b.size() - j);
}

bool natural_less(Sym a, Sym b) {
    if (a == b) return false;
    return natural_less(a.str(), b.str());
}

Term mk_var(int id) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Var;
    n->var = id;
    return n;
}

Term mk_const(Sym name) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Const;
    n->name = name;
    return n;
}

Term mk_nil() {
    static const Term nil = [] {
        auto n = std::make_shared<TermNode>();
        n->kind = TermKind::Nil;
        return Term(n);
    }();
    return nil;
}

Term mk_cons(Term head, Term tail) {
    auto n = std::make_shared<TermNode>();
    n->kind = TermKind::Cons;
    n->head = std::move(head);
    n->tail = std::move(tail);
    return n;
}

Term mk_string(const std::vector<Sym>& syms, Term tail) {
    Term t = std::move(tail);
    for (auto it = syms.rbegin(); it != syms.rend(); ++it)
        t = mk_cons(mk_const(*it), t);
    return t;
}

bool term_ground(const Term& t) {
    switch (t->kind) {
        case TermKind::Var: return false;
        case TermKind::Const:
        case TermKind::Nil: return true;
        case TermKind::Cons: return term_ground(t->head) && term_ground(t->tail);
    }
    return false;
}

namespace {

void collect_vars(const Term& t, std::vector<int>& order,
                  std::unordered_map<int, int>& seen) {
    switch (t->kind) {
        case TermKind::Var:
            if (!seen.count(t->var)) {
                seen.emplace(t->var, static_cast<int>(order.size()));
                order.push_back(t->var);
            }
            break;
        case TermKind::Cons:
            collect_vars(t->head, order, seen);
            collect_vars(t->tail, order, seen);
            break;
        default: break;
    }
}

Term renumber(const Term& t, const std::unordered_map<int, int>& map) {
    switch (t->kind) {
        case TermKind::Var: return mk_var(map.at(t->var));
        case TermKind::Cons:
            return mk_cons(renumber(t->head, map), renumber(t->tail, map));
        default: return t;
    }
}

}  // namespace

Clause normalize_clause(const Clause& c) {
    std::vector<int> order;
    std::unordered_map<int, int> map;
    for (const auto& arg : c.head.args) collect_vars(arg, order, map);
    for (const auto& a : c.body)
        for (const auto& arg : a.args) collect_vars(arg, order, map);
    Clause out;
    out.head.pred = c.head.pred;
    for (const auto& arg : c.head.args) out.head.args.push_back(renumber(arg, map));
    for (const auto& a : c.body) {
        Atom na;
        na.pred = a.pred;
        for (const auto& arg : a.args) na.args.push_back(renumber(arg, map));
        out.body.push_back(std::move(na));
    }
    out.var_count = static_cast<int>(order.size());
    return out;
}

int atom_string_length(const Atom& a) {
    int n = 0;
    for (const auto& arg : a.args) {
        const TermNode* t = arg.get();
        while (t->kind == TermKind::Cons) {
            ++n;
            t = t->tail.get();
        }
    }
    return n;
}

namespace {

std::string var_name(int id) {
    std::string s;
    s += static_cast<char>('A' + id % 26);
    if (id >= 26) s += std::to_string(id / 26);
    return s;
}

void print_term(std::ostringstream& os, const Term& t) {
    switch (t->kind) {
        case TermKind::Var: os << var_name(t->var); return;
        case TermKind::Const: os << t->name.str(); return;
        case TermKind::Nil: os << "[]"; return;
        case TermKind::Cons: {
            os << '[';
            const TermNode* n = t.get();
            bool first = true;
            while (n->kind == TermKind::Cons) {
                if (!first) os << ',';
                first = false;
                print_term(os, n->head);
                n = n->tail.get();
            }
            if (n->kind == TermKind::Var) os << '|' << var_name(n->var);
            os << ']';
            return;
        }
    }
}

void print_atom(std::ostringstream& os, const Atom& a) {
    os << a.pred.str() << '(';
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) os << ',';
        print_term(os, a.args[i]);
    }
    os << ')';
}

}  // namespace

std::string to_string(const Term& t) {
    std::ostringstream os;
    print_term(os, t);
    return os.str();
}

std::string to_string(const Atom& a) {
    std::ostringstream os;
    print_atom(os, a);
    return os.str();
}

std::string to_string(const Clause& c) {
    std::ostringstream os;
    print_atom(os, c.head);
    if (!c.body.empty()) {
        os << ":-";
        for (size_t i = 0; i < c.body.size(); ++i) {
            if (i) os << ',';
            print_atom(os, c.body[i]);
        }
    }
    os << '.';
    return os.str();
}

std::string to_string(const Program& p) {
    std::string out;
    for (const auto& c : p.clauses) {
        out += to_string(c);
        out += '\n';
    }
    return out;
}

std::string clause_key(const Clause& c) { return to_string(normalize_clause(c)); }

bool atoms_equal(const Atom& a, const Atom& b) {
    return atom_key(a) == atom_key(b);
}

std::string atom_key(const Atom& a) { return to_string(a); }

std::optional<std::vector<Sym>> list_syms(const Term& t) {
    std::vector<Sym> out;
    const TermNode* n = t.get();
    while (n->kind == TermKind::Cons) {
        if (n->head->kind != TermKind::Const) return std::nullopt;
        out.push_back(n->head->name);
        n = n->tail.get();
    }
    if (n->kind != TermKind::Nil) return std::nullopt;
    return out;
}

bool atom_less(const Atom& a, const Atom& b, const std::vector<Sym>& alphabet) {
    auto rank = [&](Sym s) {
        for (size_t i = 0; i < alphabet.size(); ++i)
            if (alphabet[i] == s) return static_cast<int>(i);
        return static_cast<int>(alphabet.size());
    };
    size_t n = std::min(a.args.size(), b.args.size());
    for (size_t i = 0; i < n; ++i) {
        auto la = list_syms(a.args[i]), lb = list_syms(b.args[i]);
        if (!la || !lb) continue;
        if (la->size() != lb->size()) return la->size() < lb->size();
        for (size_t j = 0; j < la->size(); ++j)
            if ((*la)[j] != (*lb)[j]) return rank((*la)[j]) < rank((*lb)[j]);
    }
    if (a.args.size() != b.args.size()) return a.args.size() < b.args.size();
    return natural_less(a.pred, b.pred);
}

}  // namespace poker
