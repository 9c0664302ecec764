#pragma once

#include "poker/inducer.hpp"

namespace poker {

struct LearnerParams {
    int k = 100;              // max automatically generated examples
    int l = 3;                // max clauses per initial hypothesis
    bool gestalt = true;      // generate from the union of all hypotheses
    bool final_union = true;
    bool reduce = true;
    int max_gen_len = 18;     // generation / equivalence length cap
    bool unfold_output = false;
    int depth_coeff = 4;
    int max_invented = 1;
    int probe_cap = 512;      // acceptance-set probe size for reduce/unfold
};

struct Labelling {
    std::vector<Atom> positives;
    std::vector<Atom> negatives;
};

struct LearnResult {
    Program program;        // final T, unified and optionally reduced/unfolded
    TopProgram top_program; // surviving hypotheses, pre-union
    Labelling labelling;
    std::vector<std::string> diagnostics;
};

// Everything learn() needs; the textual .spec format maps onto this.
struct LearnProblem {
    Program background;
    const Sonf* sonf = nullptr;
    Sym target;
    int target_arity = 2;
    std::vector<Atom> labelled;    // E+, nonempty
    std::vector<Atom> unlabelled;  // E?
    LearnerParams params;
    SignatureSet sigs;             // target + background roles
    std::vector<Sym> alphabet;     // terminal order for tie-breaks
};

// Terminals mentioned in background preterminal clauses, natural-sorted.
std::vector<Sym> terminal_alphabet(const Program& background);

// Candidate negatives: user E? first (input order), then up to k atoms
// enumerated from B u T', deduplicated against E+ and E?.
std::vector<Atom> generate(const Program& background, const TopProgram& top,
                           Sym target, int arity, const std::vector<Atom>& labelled,
                           const std::vector<Atom>& unlabelled,
                           const LearnerParams& params,
                           const std::vector<Sym>& alphabet);

// Specialisation by detection of contradictions: assumes each candidate is
// negative, removes accepting hypotheses unless that breaks coverage of the
// current positives, in which case the candidate is relabelled positive.
std::pair<TopProgram, Labelling> label(const Program& background,
                                       const TopProgram& top,
                                       const std::vector<Atom>& labelled,
                                       const std::vector<Atom>& candidates);

// Drops clauses whose removal leaves the accepted-atom probe set unchanged;
// greedy single pass in canonical clause order.
Program reduce_program(const Program& p, const Program& background, Sym target,
                       int arity, int max_gen_len, const std::vector<Sym>& alphabet,
                       int probe_cap);

// Resolves invented predicate calls against their defining clauses, each
// symbol at most once per chain. On failure or acceptance mismatch returns p
// unchanged and appends a diagnostic.
Program unfold_program(const Program& p, const Program& background,
                       const SignatureSet& sigs, Sym target, int arity,
                       int max_gen_len, const std::vector<Sym>& alphabet,
                       int probe_cap, std::vector<std::string>* diagnostics);

LearnResult learn(const LearnProblem& problem);
LearnResult louise_baseline(const LearnProblem& problem);

// Labelling postconditions: partition disjointness, positive coverage,
// negative rejection, specialisation-only. Throws std::logic_error on
// violation; used by tests and the acceptance suite.
void verify_labelling(const Program& background, const TopProgram& initial,
                      const TopProgram& final_top, const Labelling& labelling);

}  // namespace poker
