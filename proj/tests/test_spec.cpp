#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "doctest.h"
#include "poker/spec.hpp"

using namespace poker;

namespace {

const char* kRunningExample = R"(
% Learn 1^n 0^n from three positive strings.
target s/2.
background one --> [1].
background zero --> [0].
background empty --> [].
sonf cgnf.
pos s([1,0],[]).
pos s([1,1,0,0],[]).
pos s([1,1,1,0,0,0],[]).
param k=100.
param l=3.
param max_invented=1.
param seed=7.
)";

}  // namespace

TEST_CASE("a complete spec parses into the expected problem") {
    ProblemSpec spec = parse_spec(kRunningExample);
    CHECK(spec.target.str() == "s");
    CHECK(spec.target_arity == 2);
    CHECK_FALSE(spec.background_auto);
    REQUIRE(spec.background.clauses.size() == 3);
    CHECK(clause_key(spec.background.clauses[0]) ==
          clause_key(parse_clause_text("one([1|X],X).")));
    CHECK(clause_key(spec.background.clauses[2]) ==
          clause_key(parse_clause_text("empty(X,X).")));
    CHECK(spec.sonf_name == "cgnf");
    CHECK(&spec.sonf() == &builtin_cgnf());
    REQUIRE(spec.labelled.size() == 3);
    CHECK(atom_key(spec.labelled[1]) == atom_key(parse_atom_text("s([1,1,0,0],[])")));
    CHECK(spec.unlabelled.empty());
    CHECK(spec.params.k == 100);
    CHECK(spec.params.l == 3);
    CHECK(spec.params.max_invented == 1);
    CHECK(spec.seed == 7);
}

TEST_CASE("print then parse round-trips the spec") {
    ProblemSpec spec = parse_spec(kRunningExample);
    std::string printed = print_spec(spec);
    ProblemSpec again = parse_spec(printed);
    CHECK(print_spec(again) == printed);
}

TEST_CASE("to_problem registers roles and derives the alphabet") {
    LearnProblem p = parse_spec(kRunningExample).to_problem();
    CHECK(p.target.str() == "s");
    CHECK(p.sonf == &builtin_cgnf());
    CHECK(p.sigs.role_of(Sym::intern("s")) == Role::Target);
    CHECK(p.sigs.role_of(Sym::intern("one")) == Role::Background);
    CHECK(p.sigs.role_of(Sym::intern("empty")) == Role::Empty);
    REQUIRE(p.alphabet.size() == 2);
    CHECK(p.alphabet[0].str() == "0");
    CHECK(p.alphabet[1].str() == "1");
}

TEST_CASE("background auto builds preterminals from example constants") {
    ProblemSpec spec = parse_spec(
        "target s/2.\n"
        "background auto.\n"
        "pos s([1,0],[]).\n");
    CHECK(spec.background_auto);
    LearnProblem p = spec.to_problem();
    std::set<std::string> keys;
    for (const auto& c : p.background.clauses) keys.insert(clause_key(c));
    CHECK(keys == std::set<std::string>{clause_key(parse_clause_text("one([1|X],X).")),
                                        clause_key(parse_clause_text("zero([0|X],X).")),
                                        clause_key(parse_clause_text("empty(X,X)."))});
}

TEST_CASE("non-ground examples are rejected with the offending line") {
    try {
        parse_spec(
            "target s/2.\n"
            "background auto.\n"
            "pos s(X,[]).\n");
        FAIL("expected SpecParseError");
    } catch (const SpecParseError& e) {
        REQUIRE(!e.errors.empty());
        CHECK(e.errors[0].line == 3);
    }
}

TEST_CASE("examples must use the declared target predicate") {
    CHECK_THROWS_AS(parse_spec("target s/2.\n"
                               "background auto.\n"
                               "pos t([1,0],[]).\n"),
                    SpecParseError);
    CHECK_THROWS_AS(parse_spec("target s/2.\n"
                               "background auto.\n"
                               "pos s([1,0],[],[1],[]).\n"),
                    SpecParseError);
}

TEST_CASE("unknown second-order theory names are rejected") {
    CHECK_THROWS_AS(parse_spec("target s/2.\n"
                               "background auto.\n"
                               "sonf nosuch.\n"
                               "pos s([1,0],[]).\n"),
                    SpecParseError);
}

TEST_CASE("background rules may not redefine the target") {
    CHECK_THROWS_AS(parse_spec("target s/2.\n"
                               "background s --> [1].\n"
                               "pos s([1,0],[]).\n"),
                    SpecParseError);
}

TEST_CASE("inline metarules parse with their constraints") {
    ProblemSpec spec = parse_spec(
        "target s/2.\n"
        "background auto.\n"
        "metarule identity: P(x,y):-Q(x,y) where target(P).\n"
        "metarule chain: P(x,y):-Q(x,z),R(z,y) where and(neq(P,Q),not(empty(Q))).\n"
        "pos s([1,0],[]).\n");
    REQUIRE(spec.inline_sonf.has_value());
    REQUIRE(spec.inline_sonf->metarules.size() == 2);
    CHECK(spec.inline_sonf->metarules[0].name.str() == "identity");
    CHECK(spec.inline_sonf->metarules[1].body.size() == 2);
    // print_metarule is re-parseable text
    std::string text = print_metarule(spec.inline_sonf->metarules[1]) + "\n";
    ProblemSpec again = parse_spec("target s/2.\nbackground auto.\n" + text +
                                   "pos s([1,0],[]).\n");
    REQUIRE(again.inline_sonf.has_value());
    CHECK(print_metarule(again.inline_sonf->metarules[0]) ==
          print_metarule(spec.inline_sonf->metarules[1]));
}

TEST_CASE("parameter parsing covers every knob and rejects junk") {
    ProblemSpec spec = parse_spec(
        "target s/2.\n"
        "background auto.\n"
        "pos s([1,0],[]).\n"
        "param k=5.\n"
        "param l=2.\n"
        "param gestalt=false.\n"
        "param final_union=false.\n"
        "param reduce=false.\n"
        "param unfold=true.\n"
        "param max_gen_len=9.\n"
        "param depth_coeff=6.\n"
        "param max_invented=2.\n"
        "param probe_cap=33.\n"
        "param seed=99.\n");
    CHECK(spec.params.k == 5);
    CHECK(spec.params.l == 2);
    CHECK_FALSE(spec.params.gestalt);
    CHECK_FALSE(spec.params.final_union);
    CHECK_FALSE(spec.params.reduce);
    CHECK(spec.params.unfold_output);
    CHECK(spec.params.max_gen_len == 9);
    CHECK(spec.params.depth_coeff == 6);
    CHECK(spec.params.max_invented == 2);
    CHECK(spec.params.probe_cap == 33);
    CHECK(spec.seed == 99);
    CHECK_THROWS_AS(parse_spec("target s/2.\nbackground auto.\n"
                               "pos s([1,0],[]).\nparam nosuch=1.\n"),
                    SpecParseError);
}

TEST_CASE("multiple errors are reported in one pass") {
    try {
        parse_spec(
            "target s/2.\n"
            "background auto.\n"
            "pos s(X,[]).\n"
            "pos t([1],[]).\n"
            "param nosuch=1.\n");
        FAIL("expected SpecParseError");
    } catch (const SpecParseError& e) {
        CHECK(e.errors.size() >= 2);  // semantic checks wait for a clean parse
        for (const auto& err : e.errors) CHECK(err.line > 0);
    }
}

TEST_CASE("first-order text parsing round-trips via to_string") {
    for (const char* text : {"s(A,B):-one(A,C),zero(C,B).", "one([1|A],A).",
                             "empty(A,A).", "s(A,B,C,D):-f(A,E),s(E,B,C,D)."}) {
        Clause c = parse_clause_text(text);
        CHECK(to_string(c) == text);
    }
    Atom a = parse_atom_text("s([1,0,1],[])");
    CHECK(to_string(a) == "s([1,0,1],[])");
}
