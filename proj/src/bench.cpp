#include "poker/bench.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace poker {

namespace {

bool is_bit_string(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

std::vector<LanguageOracle> make_oracles() {
    std::vector<LanguageOracle> out;
    auto add = [&](const char* name, std::function<bool(const std::string&)> f) {
        out.push_back({Sym::intern(name),
                       [f = std::move(f)](const std::string& s) {
                           return is_bit_string(s) && f(s);
                       }});
    };
    add("even_parity", [](const std::string& s) {
        return std::count(s.begin(), s.end(), '1') % 2 == 0;
    });
    add("anbn", [](const std::string& s) {
        size_t n = s.size() / 2;
        if (n == 0 || s.size() % 2 != 0) return false;
        return s == std::string(n, '1') + std::string(n, '0');
    });
    add("equal_count", [](const std::string& s) {
        return std::count(s.begin(), s.end(), '1') ==
               std::count(s.begin(), s.end(), '0');
    });
    add("anbm", [](const std::string& s) {
        size_t i = 0;
        while (i < s.size() && s[i] == '1') ++i;
        size_t ones = i;
        while (i < s.size() && s[i] == '0') ++i;
        return i == s.size() && s.size() - ones <= ones;
    });
    add("palindrome", [](const std::string& s) {
        return std::equal(s.begin(), s.begin() + static_cast<long>(s.size() / 2),
                          s.rbegin());
    });
    // Balanced parentheses with ( as 1 and ) as 0.
    add("parens", [](const std::string& s) {
        int depth = 0;
        for (char c : s) {
            depth += c == '1' ? 1 : -1;
            if (depth < 0) return false;
        }
        return depth == 0;
    });
    return out;
}

const std::vector<LanguageOracle>& oracles() {
    static const std::vector<LanguageOracle> all = make_oracles();
    return all;
}

std::vector<LSystem> make_lsystems() {
    auto close = [](LSystem ls) {
        std::set<char> syms(ls.axiom.begin(), ls.axiom.end());
        for (const auto& [lhs, rhs] : ls.rules) {
            syms.insert(lhs);
            syms.insert(rhs.begin(), rhs.end());
        }
        for (char c : syms)
            if (!ls.rules.count(c)) ls.rules[c] = std::string(1, c);
        ls.alphabet.assign(syms.begin(), syms.end());
        return ls;
    };
    std::vector<LSystem> out;
    out.push_back(close({Sym::intern("dragon"), "f",
                         {{'f', "f+g+"}, {'g', "-f-g"}}, ""}));
    // f is a constant in the Hilbert curve.
    out.push_back(close({Sym::intern("hilbert"), "x",
                         {{'x', "-yf+xfx+fy-"}, {'y', "+xf-yfy-fx+"}}, ""}));
    out.push_back(close({Sym::intern("koch"), "f", {{'f', "f+f--f+f"}}, ""}));
    out.push_back(close({Sym::intern("sierpinski"), "f-g-g",
                         {{'f', "f-g+f+g-f"}, {'g', "gg"}}, ""}));
    return out;
}

const std::vector<LSystem>& lsystems() {
    static const std::vector<LSystem> all = make_lsystems();
    return all;
}

}  // namespace

const LanguageOracle& oracle(const std::string& name) {
    for (const auto& o : oracles())
        if (o.name.str() == name) return o;
    throw ConfigError("unknown language: " + name);
}

const std::vector<std::string>& oracle_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& o : oracles()) v.push_back(o.name.str());
        return v;
    }();
    return names;
}

const LSystem& lsystem(const std::string& name) {
    for (const auto& ls : lsystems())
        if (ls.name.str() == name) return ls;
    throw ConfigError("unknown L-system: " + name);
}

const std::vector<std::string>& lsystem_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& ls : lsystems()) v.push_back(ls.name.str());
        return v;
    }();
    return names;
}

std::string lsystem_step(const LSystem& ls, const std::string& s) {
    std::string out;
    for (char c : s) {
        auto it = ls.rules.find(c);
        if (it == ls.rules.end())
            throw ConfigError(std::string("symbol without rule: ") + c);
        out += it->second;
    }
    return out;
}

std::vector<std::string> lsystem_derive(const LSystem& ls, int depth) {
    std::vector<std::string> out{ls.axiom};
    for (int i = 0; i < depth; ++i) out.push_back(lsystem_step(ls, out.back()));
    return out;
}

namespace {

Term string_term(const std::string& s, const Term& tail) {
    std::vector<Sym> syms;
    for (char c : s) syms.push_back(Sym::intern(std::string(1, c)));
    return mk_string(syms, tail);
}

std::optional<std::string> term_string(const Term& t) {
    auto syms = list_syms(t);
    if (!syms) return std::nullopt;
    std::string s;
    for (Sym sy : *syms) {
        if (sy.str().size() != 1) return std::nullopt;
        s += sy.str();
    }
    return s;
}

}  // namespace

Atom string_atom(Sym target, const std::string& s) {
    return {target, {string_term(s, mk_nil()), mk_nil()}};
}

Atom rewrite_atom(Sym target, const std::string& src, const std::string& dst) {
    return {target,
            {string_term(src, mk_nil()), mk_nil(), string_term(dst, mk_nil()), mk_nil()}};
}

std::optional<std::string> atom_input_string(const Atom& a) {
    if (a.args.size() < 2 || a.args[1]->kind != TermKind::Nil) return std::nullopt;
    return term_string(a.args[0]);
}

std::optional<std::string> atom_output_string(const Atom& a) {
    if (a.args.size() != 4 || a.args[3]->kind != TermKind::Nil) return std::nullopt;
    return term_string(a.args[2]);
}

namespace {

// All matching strings of length <= max_len in length-lexicographic order
// (0 before 1), with the length of each pool entry alongside.
std::vector<std::pair<std::string, int>> language_pool(const LanguageOracle& o,
                                                       int max_len, bool positive) {
    std::vector<std::pair<std::string, int>> pool;
    std::vector<std::string> layer{""};
    for (int len = 0; len <= max_len; ++len) {
        for (const auto& s : layer)
            if (o.accepts(s) == positive) pool.push_back({s, len});
        if (len == max_len) break;
        std::vector<std::string> next;
        next.reserve(layer.size() * 2);
        for (const auto& s : layer) {
            next.push_back(s + "0");
            next.push_back(s + "1");
        }
        layer = std::move(next);
    }
    return pool;
}

}  // namespace

std::vector<Atom> sample_language(const LanguageOracle& o, Sym target, int count,
                                  int max_len, uint64_t seed, bool positive,
                                  std::vector<std::string>* diagnostics) {
    std::vector<std::string> pool;
    for (auto& [w, len] : language_pool(o, max_len, positive)) pool.push_back(w);
    if (static_cast<int>(pool.size()) <= count) {
        if (static_cast<int>(pool.size()) < count && diagnostics)
            diagnostics->push_back("sample: only " + std::to_string(pool.size()) +
                                   " strings available for " + o.name.str());
    } else {
        std::mt19937_64 rng(seed);
        std::vector<std::string> picked;
        std::sample(pool.begin(), pool.end(), std::back_inserter(picked),
                    static_cast<size_t>(count), rng);
        pool = std::move(picked);
    }
    std::vector<Atom> out;
    for (const auto& s : pool) out.push_back(string_atom(target, s));
    return out;
}

std::vector<Atom> sample_language_stratified(const LanguageOracle& o, Sym target,
                                             int count, int max_len, uint64_t seed,
                                             std::vector<std::string>* diagnostics) {
    auto pool = language_pool(o, max_len, true);
    std::vector<Atom> out;
    if (pool.empty()) {
        if (diagnostics)
            diagnostics->push_back("sample: no strings available for " + o.name.str());
        return out;
    }
    std::mt19937_64 rng(seed);
    std::set<std::string> used;
    // One string per length band, so the sample pins both the short members
    // of the language and enough long ones to force generalisation.
    for (int b = 0; b < count; ++b) {
        int lo = b * (max_len + 1) / count;
        int hi = (b + 1) * (max_len + 1) / count - 1;
        std::vector<const std::string*> band;
        for (const auto& [w, len] : pool)
            if (len >= lo && len <= hi && !used.count(w)) band.push_back(&w);
        if (band.empty())
            for (const auto& [w, len] : pool)
                if (!used.count(w)) band.push_back(&w);
        if (band.empty()) break;
        const std::string& pick = *band[rng() % band.size()];
        used.insert(pick);
        out.push_back(string_atom(target, pick));
    }
    if (static_cast<int>(out.size()) < count && diagnostics)
        diagnostics->push_back("sample: only " + std::to_string(out.size()) +
                               " strings available for " + o.name.str());
    return out;
}

std::vector<Atom> sample_rewrites(const LSystem& ls, Sym target, int count,
                                  int max_src_len, uint64_t seed,
                                  std::vector<std::string>* diagnostics) {
    // Source pool: contiguous substrings, up to max_src_len, of the axiom's
    // derivation strings (enough steps that longer strings add nothing new).
    std::set<std::string> sources;
    std::string s = ls.axiom;
    for (int step = 0; step < 8; ++step) {
        size_t before = sources.size();
        for (size_t i = 0; i < s.size(); ++i)
            for (size_t n = 1; n <= static_cast<size_t>(max_src_len) && i + n <= s.size(); ++n)
                sources.insert(s.substr(i, n));
        if (sources.size() == before && step > 0) break;
        s = lsystem_step(ls, s);
        if (s.size() > 4096) break;
    }
    std::vector<std::string> pool(sources.begin(), sources.end());
    std::sort(pool.begin(), pool.end(), [](const std::string& a, const std::string& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    if (static_cast<int>(pool.size()) <= count) {
        if (static_cast<int>(pool.size()) < count && diagnostics)
            diagnostics->push_back("sample: only " + std::to_string(pool.size()) +
                                   " rewrite sources available for " + ls.name.str());
    } else {
        std::mt19937_64 rng(seed);
        std::vector<std::string> picked;
        std::sample(pool.begin(), pool.end(), std::back_inserter(picked),
                    static_cast<size_t>(count), rng);
        pool = std::move(picked);
    }
    std::vector<Atom> out;
    for (const auto& src : pool)
        out.push_back(rewrite_atom(target, src, lsystem_step(ls, src)));
    return out;
}

std::string preterminal_name(char terminal) {
    switch (terminal) {
        case '1': return "one";
        case '0': return "zero";
        case '+': return "plus";
        case '-': return "minus";
        default: return std::string(1, terminal);
    }
}

namespace {

Clause preterminal_clause(const std::string& pred, const std::string& terminals) {
    Clause c;
    c.head.pred = Sym::intern(pred);
    std::vector<Sym> syms;
    for (char t : terminals) syms.push_back(Sym::intern(std::string(1, t)));
    c.head.args = {mk_string(syms, mk_var(0)), mk_var(0)};
    c.var_count = 1;
    return c;
}

}  // namespace

Program background_bits() {
    Program p;
    p.clauses.push_back(preterminal_clause("one", "1"));
    p.clauses.push_back(preterminal_clause("zero", "0"));
    p.clauses.push_back(preterminal_clause("empty", ""));
    return p;
}

Program background_lsystem(const LSystem& ls) {
    Program p;
    for (char c : ls.alphabet)
        p.clauses.push_back(preterminal_clause(preterminal_name(c), std::string(1, c)));
    std::sort(p.clauses.begin(), p.clauses.end(), [](const Clause& a, const Clause& b) {
        return natural_less(a.head.pred, b.head.pred);
    });
    return p;
}

void register_background_roles(const Program& background, SignatureSet& sigs) {
    std::set<int> seen;
    for (const auto& c : background.clauses) {
        if (!seen.insert(c.head.pred.id()).second) continue;
        Role r = c.head.pred.str() == "empty" ? Role::Empty : Role::Background;
        if (!sigs.contains(c.head.pred))
            sigs.add(c.head.pred, static_cast<int>(c.head.args.size()), r);
    }
}

}  // namespace poker
