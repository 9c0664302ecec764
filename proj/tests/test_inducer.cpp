#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "poker/bench.hpp"
#include "poker/inducer.hpp"
#include "poker/spec.hpp"

using namespace poker;

namespace {

SignatureSet base_sigs() {
    SignatureSet sigs;
    sigs.add(Sym::intern("s"), 2, Role::Target);
    return sigs;
}

Atom bit_atom(const std::string& s) { return string_atom(Sym::intern("s"), s); }

std::string hyp_key(const std::string& program_text) {
    std::map<std::string, Clause> sorted;
    for (const auto& c : parse_program_text(program_text).clauses)
        sorted.emplace(clause_key(c), c);
    std::string key;
    for (const auto& [k, c] : sorted) {
        key += k;
        key += '\n';
    }
    return key;
}

bool contains_hypothesis(const TopProgram& top, const std::string& program_text) {
    std::string want = hyp_key(program_text);
    for (const auto& h : top.hypotheses)
        if (h.key == want) return true;
    return false;
}

}  // namespace

TEST_CASE("a single chain clause is induced from the shortest example") {
    SignatureSet sigs = base_sigs();
    register_background_roles(background_bits(), sigs);
    InducerConfig cfg;
    cfg.l = 1;
    cfg.max_invented = 0;
    TopProgram top = generalise(background_bits(), builtin_cgnf_no_trichain(),
                                {bit_atom("10")}, cfg, sigs);
    CHECK(contains_hypothesis(top, "s(A,B):-one(A,C),zero(C,B).\n"));
    for (const auto& h : top.hypotheses)
        for (const auto& c : h.clauses)
            CHECK(clause_key(c) != clause_key(parse_clause_text(
                                       "s(A,B):-empty(A,C),zero(C,B).")));
}

TEST_CASE("the recursive three-clause hypothesis is induced from 1100") {
    SignatureSet sigs = base_sigs();
    register_background_roles(background_bits(), sigs);
    InducerConfig cfg;
    cfg.l = 3;
    cfg.max_invented = 1;
    TopProgram top = generalise(background_bits(), builtin_cgnf_no_trichain(),
                                {bit_atom("1100")}, cfg, sigs);
    CHECK(contains_hypothesis(top,
                              "s(A,B):-one(A,C),zero(C,B).\n"
                              "s(A,B):-s_1(A,C),zero(C,B).\n"
                              "s_1(A,B):-one(A,C),s(C,B).\n"));
}

TEST_CASE("every induced hypothesis covers at least one example") {
    SignatureSet sigs = base_sigs();
    register_background_roles(background_bits(), sigs);
    InducerConfig cfg;
    cfg.l = 3;
    cfg.max_invented = 1;
    std::vector<Atom> examples{bit_atom("10"), bit_atom("1100")};
    TopProgram top = generalise(background_bits(), builtin_cgnf_no_trichain(),
                                examples, cfg, sigs);
    REQUIRE(!top.hypotheses.empty());
    for (const auto& h : top.hypotheses) {
        bool covers = false;
        for (const auto& e : examples)
            if (covered(h, background_bits(), e)) covers = true;
        CHECK(covers);
    }
}

TEST_CASE("every induced clause instantiates the normal form") {
    SignatureSet sigs = base_sigs();
    register_background_roles(background_bits(), sigs);
    InducerConfig cfg;
    cfg.l = 3;
    cfg.max_invented = 1;
    TopProgram top = generalise(background_bits(), builtin_cgnf_no_trichain(),
                                {bit_atom("1100")}, cfg, sigs);
    for (const auto& h : top.hypotheses) {
        CHECK(h.metasubs.size() <= 3);
        CHECK(h.clauses.size() <= 3);
        for (const auto& c : h.clauses)
            CHECK(matches_sonf(c, builtin_cgnf_no_trichain(), sigs));
    }
}

TEST_CASE("induction output is deterministic") {
    auto run = [] {
        SignatureSet sigs = base_sigs();
        register_background_roles(background_bits(), sigs);
        InducerConfig cfg;
        cfg.l = 3;
        cfg.max_invented = 1;
        TopProgram top = generalise(background_bits(), builtin_cgnf_no_trichain(),
                                    {bit_atom("10"), bit_atom("1100")}, cfg, sigs);
        std::string out;
        for (const auto& h : top.hypotheses) out += h.key + "\n---\n";
        return out;
    };
    CHECK(run() == run());
}

TEST_CASE("usage errors are reported clearly") {
    SignatureSet sigs = base_sigs();
    register_background_roles(background_bits(), sigs);
    InducerConfig cfg;
    CHECK_THROWS_AS(generalise(background_bits(), builtin_cgnf(), {}, cfg, sigs),
                    ConfigError);
    Atom non_ground{Sym::intern("s"), {mk_var(0), mk_nil()}};
    CHECK_THROWS_AS(generalise(background_bits(), builtin_cgnf(), {non_ground}, cfg, sigs),
                    ConfigError);
    Atom wrong_pred = string_atom(Sym::intern("t"), "10");
    CHECK_THROWS_AS(generalise(background_bits(), builtin_cgnf(), {wrong_pred}, cfg, sigs),
                    ConfigError);
}

TEST_CASE("covered checks entailment of single atoms") {
    Hypothesis h;
    h.clauses = parse_program_text(
                    "s(A,B):-one(A,C),zero(C,B).\n"
                    "s(A,B):-s_1(A,C),zero(C,B).\n"
                    "s_1(A,B):-one(A,C),s(C,B).\n")
                    .clauses;
    CHECK(covered(h, background_bits(), bit_atom("111000")));
    CHECK_FALSE(covered(h, background_bits(), bit_atom("110")));
    Hypothesis empty;
    CHECK_FALSE(covered(empty, background_bits(), bit_atom("10")));
}

TEST_CASE("rewrite rules are induced from a single dragon-curve example") {
    const LSystem& dragon = lsystem("dragon");
    Program bg = background_lsystem(dragon);
    SignatureSet sigs;
    sigs.add(Sym::intern("s"), 4, Role::Target);
    register_background_roles(bg, sigs);
    InducerConfig cfg;
    cfg.l = 3;
    cfg.max_invented = 0;
    // f -> f+g+ and the termination clause suffice to rewrite "f".
    Atom e = rewrite_atom(Sym::intern("s"), "f", "f+g+");
    TopProgram top = generalise(bg, builtin_lnf(), {e}, cfg, sigs);
    REQUIRE(!top.hypotheses.empty());
    bool found = false;
    for (const auto& h : top.hypotheses)
        if (covered(h, bg, e)) found = true;
    CHECK(found);
    for (const auto& h : top.hypotheses)
        for (const auto& c : h.clauses) CHECK(matches_sonf(c, builtin_lnf(), sigs));
}
