#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "doctest.h"
#include "poker/bench.hpp"
#include "poker/spec.hpp"

using namespace poker;

namespace {

std::vector<std::string> all_bit_strings(int max_len) {
    std::vector<std::string> out{""}, layer{""};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::string> next;
        for (const auto& s : layer) {
            next.push_back(s + "0");
            next.push_back(s + "1");
        }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

// Reference acceptors as DCGs, used for differential testing of the oracles.
const std::map<std::string, std::string>& reference_grammars() {
    static const std::map<std::string, std::string> g = {
        {"even_parity",
         "s(A,B):-empty(A,B).\n"
         "s(A,B):-one(A,C),a(C,B).\n"
         "s(A,B):-zero(A,C),s(C,B).\n"
         "a(A,B):-one(A,C),s(C,B).\n"
         "a(A,B):-zero(A,C),a(C,B).\n"},
        {"anbn",
         "s(A,B):-one(A,C),zero(C,B).\n"
         "s(A,B):-s_1(A,C),zero(C,B).\n"
         "s_1(A,B):-one(A,C),s(C,B).\n"},
        {"equal_count",
         "s(A,B):-empty(A,B).\n"
         "s(A,B):-one(A,C),b(C,B).\n"
         "s(A,B):-zero(A,C),a(C,B).\n"
         "a(A,B):-one(A,C),s(C,B).\n"
         "a(A,B):-zero(A,C),c(C,B).\n"
         "c(A,B):-a(A,C),a(C,B).\n"
         "b(A,B):-zero(A,C),s(C,B).\n"
         "b(A,B):-one(A,C),d(C,B).\n"
         "d(A,B):-b(A,C),b(C,B).\n"},
        {"anbm",
         "s(A,B):-empty(A,B).\n"
         "s(A,B):-one(A,C),s(C,B).\n"
         "s(A,B):-one(A,C),s(C,D),zero(D,B).\n"},
        {"palindrome",
         "s(A,B):-empty(A,B).\n"
         "s(A,B):-one(A,B).\n"
         "s(A,B):-zero(A,B).\n"
         "s(A,B):-one(A,C),s(C,D),one(D,B).\n"
         "s(A,B):-zero(A,C),s(C,D),zero(D,B).\n"},
        {"parens",
         "s(A,B):-empty(A,B).\n"
         "s(A,B):-one(A,C),a(C,B).\n"
         "a(A,B):-zero(A,C),s(C,B).\n"
         "a(A,B):-one(A,C),b(C,B).\n"
         "b(A,B):-a(A,C),a(C,B).\n"},
    };
    return g;
}

}  // namespace

TEST_CASE("oracle spot checks") {
    CHECK(oracle("anbn").accepts("10"));
    CHECK_FALSE(oracle("anbn").accepts(""));
    CHECK_FALSE(oracle("anbn").accepts("100"));
    CHECK(oracle("anbm").accepts(""));
    CHECK(oracle("anbm").accepts("1"));
    CHECK_FALSE(oracle("anbm").accepts("01"));
    CHECK_FALSE(oracle("anbm").accepts("10000"));
    CHECK(oracle("even_parity").accepts(""));
    CHECK(oracle("even_parity").accepts("11"));
    CHECK_FALSE(oracle("even_parity").accepts("1"));
    CHECK(oracle("equal_count").accepts("0110"));
    CHECK_FALSE(oracle("equal_count").accepts("011"));
    CHECK(oracle("palindrome").accepts("0110"));
    CHECK(oracle("palindrome").accepts("010"));
    CHECK_FALSE(oracle("palindrome").accepts("011"));
    CHECK(oracle("parens").accepts("1100"));
    CHECK(oracle("parens").accepts("1010"));
    CHECK_FALSE(oracle("parens").accepts("0"));
    CHECK_FALSE(oracle("parens").accepts("10 "));
    CHECK_THROWS_AS(oracle("nosuch"), ConfigError);
}

TEST_CASE("oracles agree with the reference grammars on every string up to length 12") {
    Sym s = Sym::intern("s");
    auto strings = all_bit_strings(12);
    for (const auto& [name, grammar] : reference_grammars()) {
        const LanguageOracle& o = oracle(name);
        Program p = merge_programs(background_bits(), parse_program_text(grammar));
        INFO(name);
        int mismatches = 0;
        for (const auto& w : strings)
            if (o.accepts(w) != prove(string_atom(s, w), p).proved) ++mismatches;
        CHECK(mismatches == 0);
    }
}

TEST_CASE("dragon curve single step and derivation") {
    const LSystem& dragon = lsystem("dragon");
    CHECK(lsystem_step(dragon, "f") == "f+g+");
    CHECK(lsystem_step(dragon, "g") == "-f-g");
    CHECK(lsystem_step(dragon, "f+g+") == "f+g++-f-g+");
    auto d = lsystem_derive(dragon, 2);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == "f");
    CHECK(d[1] == "f+g+");
    CHECK(d[2] == "f+g++-f-g+");
}

TEST_CASE("derivation at depth zero is just the axiom") {
    for (const auto& name : lsystem_names()) {
        auto d = lsystem_derive(lsystem(name), 0);
        REQUIRE(d.size() == 1);
        CHECK(d[0] == lsystem(name).axiom);
    }
}

TEST_CASE("hilbert curve keeps f fixed pointwise") {
    const LSystem& hilbert = lsystem("hilbert");
    CHECK(lsystem_step(hilbert, "f") == "f");
    CHECK(lsystem_step(hilbert, "x") == "-yf+xfx+fy-");
    CHECK(lsystem_step(hilbert, "y") == "+xf-yfy-fx+");
}

TEST_CASE("koch and sierpinski productions") {
    CHECK(lsystem_step(lsystem("koch"), "f") == "f+f--f+f");
    CHECK(lsystem_step(lsystem("sierpinski"), "f") == "f-g+f+g-f");
    CHECK(lsystem_step(lsystem("sierpinski"), "g") == "gg");
    CHECK(lsystem(("sierpinski")).axiom == "f-g-g");
}

TEST_CASE("rewriting an unknown symbol is an error") {
    CHECK_THROWS_AS(lsystem_step(lsystem("dragon"), "q"), ConfigError);
}

TEST_CASE("derivation lengths follow the production arithmetic") {
    const LSystem& dragon = lsystem("dragon");
    std::string s = dragon.axiom;
    for (int i = 0; i < 6; ++i) {
        size_t expected = 0;
        for (char c : s) expected += dragon.rules.at(c).size();
        s = lsystem_step(dragon, s);
        CHECK(s.size() == expected);
    }
}

TEST_CASE("language sampling respects polarity and is exhaustive when small") {
    Sym s = Sym::intern("s");
    auto pos = sample_language(oracle("anbn"), s, 3, 6, 42, true);
    std::set<std::string> keys;
    for (const auto& a : pos) keys.insert(atom_key(a));
    CHECK(keys == std::set<std::string>{atom_key(string_atom(s, "10")),
                                        atom_key(string_atom(s, "1100")),
                                        atom_key(string_atom(s, "111000"))});
    std::vector<std::string> diag;
    auto more = sample_language(oracle("anbn"), s, 10, 6, 42, true, &diag);
    CHECK(more.size() == 3);
    CHECK(!diag.empty());
    auto neg = sample_language(oracle("anbn"), s, 5, 18, 7, false);
    REQUIRE(neg.size() == 5);
    for (const auto& a : neg) {
        auto w = atom_input_string(a);
        REQUIRE(w.has_value());
        CHECK_FALSE(oracle("anbn").accepts(*w));
    }
}

TEST_CASE("sampling is deterministic per seed") {
    Sym s = Sym::intern("s");
    for (bool polarity : {true, false}) {
        auto a = sample_language(oracle("equal_count"), s, 10, 10, 99, polarity);
        auto b = sample_language(oracle("equal_count"), s, 10, 10, 99, polarity);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) CHECK(atoms_equal(a[i], b[i]));
        auto c = sample_language(oracle("equal_count"), s, 10, 10, 100, polarity);
        bool all_same = a.size() == c.size();
        for (size_t i = 0; all_same && i < a.size(); ++i)
            all_same = atoms_equal(a[i], c[i]);
        CHECK_FALSE(all_same);  // different seed, different sample
    }
}

TEST_CASE("rewrite sampling pairs sources with their one-step rewrites") {
    Sym s = Sym::intern("s");
    const LSystem& koch = lsystem("koch");
    auto pairs = sample_rewrites(koch, s, 8, 3, 5);
    REQUIRE(!pairs.empty());
    for (const auto& a : pairs) {
        auto src = atom_input_string(a);
        auto dst = atom_output_string(a);
        REQUIRE(src.has_value());
        REQUIRE(dst.has_value());
        CHECK(lsystem_step(koch, *src) == *dst);
    }
    auto again = sample_rewrites(koch, s, 8, 3, 5);
    REQUIRE(again.size() == pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i) CHECK(atoms_equal(pairs[i], again[i]));
}

TEST_CASE("background theories expose one preterminal per terminal") {
    Program bits = background_bits();
    REQUIRE(bits.clauses.size() == 3);
    CHECK(clause_key(bits.clauses[0]) == clause_key(parse_clause_text("one([1|X],X).")));
    CHECK(clause_key(bits.clauses[1]) == clause_key(parse_clause_text("zero([0|X],X).")));
    CHECK(clause_key(bits.clauses[2]) == clause_key(parse_clause_text("empty(X,X).")));
    auto alpha = terminal_alphabet(bits);
    REQUIRE(alpha.size() == 2);
    CHECK(alpha[0].str() == "0");
    CHECK(alpha[1].str() == "1");

    Program dragon = background_lsystem(lsystem("dragon"));
    std::set<std::string> preds;
    for (const auto& c : dragon.clauses) preds.insert(c.head.pred.str());
    CHECK(preds == std::set<std::string>{"f", "g", "plus", "minus"});
}
