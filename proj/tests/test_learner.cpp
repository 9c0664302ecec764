#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <set>

#include "doctest.h"
#include "poker/bench.hpp"
#include "poker/learner.hpp"
#include "poker/spec.hpp"

using namespace poker;

namespace {

Atom bit_atom(const std::string& s) { return string_atom(Sym::intern("s"), s); }

// The running example: learn a^n b^n (as 1^n 0^n) from three positives plus
// unlabelled 1^n 0^m strings, with one invented predicate allowed.
LearnProblem anbn_problem() {
    LearnProblem p;
    p.background = background_bits();
    p.sonf = &builtin_cgnf_no_trichain();
    p.target = Sym::intern("s");
    p.target_arity = 2;
    p.labelled = {bit_atom("10"), bit_atom("1100"), bit_atom("111000")};
    p.sigs.add(p.target, 2, Role::Target);
    register_background_roles(p.background, p.sigs);
    p.alphabet = terminal_alphabet(p.background);
    p.params.k = 100;
    p.params.l = 3;
    p.params.max_invented = 1;
    // Unlabelled pool: all 1^n 0^m with n+m <= 12, shortest first.
    for (int len = 1; len <= 12; ++len)
        for (int n = 0; n <= len; ++n)
            p.unlabelled.push_back(
                bit_atom(std::string(n, '1') + std::string(len - n, '0')));
    return p;
}

InducerConfig inducer_cfg(const LearnerParams& lp) {
    InducerConfig cfg;
    cfg.l = lp.l;
    cfg.max_invented = lp.max_invented;
    cfg.depth_coeff = lp.depth_coeff;
    return cfg;
}

bool accepts(const Program& learned, const Program& background, const std::string& w) {
    return prove(bit_atom(w), merge_programs(background, learned)).proved;
}

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

std::string canon(const Program& p) {
    std::set<std::string> keys;
    for (const auto& c : p.clauses) keys.insert(clause_key(c));
    std::string out;
    for (const auto& k : keys) out += k + "\n";
    return out;
}

}  // namespace

TEST_CASE("generate yields nothing without hypotheses or unlabelled input") {
    LearnProblem p = anbn_problem();
    p.unlabelled.clear();
    TopProgram empty;
    auto cands = generate(p.background, empty, p.target, 2, p.labelled,
                          p.unlabelled, p.params, p.alphabet);
    CHECK(cands.empty());
}

TEST_CASE("generate passes unlabelled examples through first, in input order") {
    LearnProblem p = anbn_problem();
    p.params.k = 0;  // no automatic generation
    TopProgram empty;
    auto cands = generate(p.background, empty, p.target, 2, p.labelled,
                          p.unlabelled, p.params, p.alphabet);
    // E? atoms that duplicate a labelled example are dropped; the rest keep
    // their input order.
    std::set<std::string> known;
    for (const auto& a : p.labelled) known.insert(atom_key(a));
    std::vector<Atom> expected;
    for (const auto& a : p.unlabelled)
        if (!known.count(atom_key(a))) expected.push_back(a);
    REQUIRE(cands.size() == expected.size());
    for (size_t i = 0; i < cands.size(); ++i)
        CHECK(atoms_equal(cands[i], expected[i]));
}

TEST_CASE("generated atoms avoid the labelled and unlabelled examples") {
    LearnProblem p = anbn_problem();
    TopProgram top = generalise(p.background, *p.sonf, p.labelled,
                                inducer_cfg(p.params),
                                p.sigs);
    auto cands = generate(p.background, top, p.target, 2, p.labelled,
                          p.unlabelled, p.params, p.alphabet);
    std::set<std::string> known;
    for (const auto& a : p.labelled) known.insert(atom_key(a));
    std::set<std::string> seen;
    size_t user = p.unlabelled.size();
    CHECK(cands.size() > user);  // the union generates beyond E?
    CHECK(cands.size() <= user + static_cast<size_t>(p.params.k));
    for (const auto& a : cands) {
        CHECK(!known.count(atom_key(a)));
        CHECK(seen.insert(atom_key(a)).second);  // no duplicates
    }
}

TEST_CASE("labelling with no candidates changes nothing") {
    LearnProblem p = anbn_problem();
    TopProgram top = generalise(p.background, *p.sonf, p.labelled,
                                inducer_cfg(p.params),
                                p.sigs);
    auto [after, lab] = label(p.background, top, p.labelled, {});
    CHECK(after.hypotheses.size() == top.hypotheses.size());
    CHECK(lab.positives.size() == p.labelled.size());
    CHECK(lab.negatives.empty());
    verify_labelling(p.background, top, after, lab);
}

TEST_CASE("a candidate whose removal would break coverage is relabelled positive") {
    LearnProblem p = anbn_problem();
    TopProgram top;
    Hypothesis exact;  // the target grammar itself
    exact.clauses = parse_program_text(
                        "s(A,B):-one(A,C),zero(C,B).\n"
                        "s(A,B):-s_1(A,C),zero(C,B).\n"
                        "s_1(A,B):-one(A,C),s(C,B).\n")
                        .clauses;
    Hypothesis loose;  // 1^n 0^m, a strict superset
    loose.clauses = parse_program_text(
                        "s(A,B):-one(A,C),zero(C,B).\n"
                        "s(A,B):-one(A,C),s(C,B).\n"
                        "s(A,B):-s(A,C),zero(C,B).\n")
                        .clauses;
    for (Hypothesis* h : {&exact, &loose}) {
        std::set<std::string> keys;
        for (const auto& c : h->clauses) keys.insert(clause_key(c));
        for (const auto& k : keys) h->key += k + "\n";
        top.hypotheses.push_back(*h);
    }
    // 100 is covered only by the loose hypothesis: dropping it keeps the
    // positives covered, so 100 stays negative and the loose hypothesis dies.
    // 11110000 is then covered only by the exact hypothesis, whose removal
    // would leave every positive uncovered, so it is relabelled positive.
    auto [after, lab] = label(p.background, top, p.labelled,
                              {bit_atom("100"), bit_atom("11110000")});
    REQUIRE(after.hypotheses.size() == 1);
    CHECK(after.hypotheses[0].key == exact.key);
    auto has = [](const std::vector<Atom>& v, const Atom& a) {
        return std::any_of(v.begin(), v.end(), [&](const Atom& x) {
            return atom_key(x) == atom_key(a);
        });
    };
    CHECK(has(lab.negatives, bit_atom("100")));
    CHECK(has(lab.positives, bit_atom("11110000")));
    verify_labelling(p.background, top, after, lab);
}

TEST_CASE("a candidate outside the language is labelled negative") {
    LearnProblem p = anbn_problem();
    TopProgram top = generalise(p.background, *p.sonf, p.labelled,
                                inducer_cfg(p.params),
                                p.sigs);
    auto [after, lab] = label(p.background, top, p.labelled, {bit_atom("110")});
    bool negative = std::any_of(
        lab.negatives.begin(), lab.negatives.end(),
        [](const Atom& a) { return atom_key(a) == atom_key(bit_atom("110")); });
    CHECK(negative);
    // Every survivor now rejects it.
    for (const auto& h : after.hypotheses)
        CHECK_FALSE(covered(h, p.background, bit_atom("110")));
    verify_labelling(p.background, top, after, lab);
}

TEST_CASE("learning the running example recovers the target language") {
    LearnProblem p = anbn_problem();
    LearnResult res = learn(p);
    REQUIRE(!res.program.clauses.empty());
    const LanguageOracle& o = oracle("anbn");
    for (const auto& w : all_bit_strings(14))
        CHECK(accepts(res.program, p.background, w) == o.accepts(w));
    // Labelling agrees with ground truth on every example it labels.
    for (const auto& a : res.labelling.positives)
        CHECK(o.accepts(*atom_input_string(a)));
    for (const auto& a : res.labelling.negatives)
        CHECK_FALSE(o.accepts(*atom_input_string(a)));
}

TEST_CASE("unfolding removes the invented predicate from the learned grammar") {
    LearnProblem p = anbn_problem();
    p.params.unfold_output = true;
    LearnResult res = learn(p);
    std::set<std::string> keys;
    for (const auto& c : res.program.clauses) keys.insert(clause_key(c));
    std::set<std::string> want{
        clause_key(parse_clause_text("s(A,B):-one(A,C),zero(C,B).")),
        clause_key(parse_clause_text("s(A,B):-one(A,C),s(C,D),zero(D,B).")),
    };
    CHECK(keys == want);
    // Acceptance is preserved through unfolding.
    const LanguageOracle& o = oracle("anbn");
    for (const auto& w : all_bit_strings(14))
        CHECK(accepts(res.program, p.background, w) == o.accepts(w));
}

TEST_CASE("with no unlabelled data and k=0 the result is over-general") {
    LearnProblem p = anbn_problem();
    p.unlabelled.clear();
    p.params.k = 0;
    LearnResult res = learn(p);
    REQUIRE(!res.program.clauses.empty());
    // All positives still covered...
    for (const auto& e : p.labelled)
        CHECK(accepts(res.program, p.background, *atom_input_string(e)));
    // ...but nothing pruned the wrong hypotheses: strings outside the target
    // language are accepted too.
    int false_accepts = 0;
    for (const auto& w : all_bit_strings(8))
        if (!oracle("anbn").accepts(w) && accepts(res.program, p.background, w))
            ++false_accepts;
    CHECK(false_accepts > 0);
}

TEST_CASE("the supervised baseline over-generalises like the k=0 learner") {
    LearnProblem p = anbn_problem();
    LearnResult res = louise_baseline(p);
    REQUIRE(!res.program.clauses.empty());
    for (const auto& e : p.labelled)
        CHECK(accepts(res.program, p.background, *atom_input_string(e)));
    int false_accepts = 0;
    for (const auto& w : all_bit_strings(8))
        if (!oracle("anbn").accepts(w) && accepts(res.program, p.background, w))
            ++false_accepts;
    CHECK(false_accepts > 0);
}

TEST_CASE("reduce drops clauses that add no accepted strings") {
    LearnProblem p = anbn_problem();
    // The third clause is subsumed by the first up to any length.
    Program redundant = parse_program_text(
        "s(A,B):-one(A,C),zero(C,B).\n"
        "s(A,B):-s_1(A,C),zero(C,B).\n"
        "s_1(A,B):-one(A,C),s(C,B).\n"
        "s(A,B):-one(A,C),zero(C,B).\n");
    Program reduced = reduce_program(redundant, p.background, p.target, 2,
                                     p.params.max_gen_len, p.alphabet,
                                     p.params.probe_cap);
    CHECK(reduced.clauses.size() == 3);
    const LanguageOracle& o = oracle("anbn");
    for (const auto& w : all_bit_strings(12))
        CHECK(accepts(reduced, p.background, w) == o.accepts(w));
}

TEST_CASE("reduce keeps a minimal program unchanged") {
    LearnProblem p = anbn_problem();
    Program minimal = parse_program_text(
        "s(A,B):-one(A,C),zero(C,B).\n"
        "s(A,B):-s_1(A,C),zero(C,B).\n"
        "s_1(A,B):-one(A,C),s(C,B).\n");
    Program reduced = reduce_program(minimal, p.background, p.target, 2,
                                     p.params.max_gen_len, p.alphabet,
                                     p.params.probe_cap);
    CHECK(canon(reduced) == canon(minimal));
}

TEST_CASE("learning twice yields byte-identical programs and labellings") {
    auto run = [] {
        LearnResult res = learn(anbn_problem());
        std::string out = to_string(res.program);
        for (const auto& a : res.labelling.positives) out += "+" + atom_key(a);
        for (const auto& a : res.labelling.negatives) out += "-" + atom_key(a);
        return out;
    };
    CHECK(run() == run());
}

TEST_CASE("labelling postcondition checks catch a corrupted labelling") {
    LearnProblem p = anbn_problem();
    TopProgram top = generalise(p.background, *p.sonf, p.labelled,
                                inducer_cfg(p.params),
                                p.sigs);
    auto [after, lab] = label(p.background, top, p.labelled, {bit_atom("110")});
    Labelling broken = lab;
    broken.negatives.push_back(lab.positives.front());  // breaks disjointness
    CHECK_THROWS_AS(verify_labelling(p.background, top, after, broken),
                    std::logic_error);
}
