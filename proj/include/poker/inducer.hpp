#pragma once

#include "poker/metarule.hpp"
#include "poker/solve.hpp"

namespace poker {

struct InducerConfig {
    int l = 3;              // max clauses per initial hypothesis
    int depth_coeff = 4;    // meta-interpreter budget = coeff * (len + 1)
    int max_invented = 1;
    long max_steps = 4000000;       // per-example search safety cap
    size_t max_hypotheses = 50000;
};

struct Hypothesis {
    std::vector<Metasub> metasubs;
    std::vector<Clause> clauses;  // canonical order, duplicate-free
    std::string key;
};

struct TopProgram {
    std::vector<Hypothesis> hypotheses;
};

// Registers invented symbols <target>_1.. in sigs (role Invented) and returns
// every distinct hypothesis collectable as the metasubstitution set of one
// successful bounded meta-interpretive refutation of some positive example.
TopProgram generalise(const Program& background, const Sonf& sonf,
                      const std::vector<Atom>& positives, const InducerConfig& cfg,
                      SignatureSet& sigs,
                      std::vector<std::string>* diagnostics = nullptr);

Program hypothesis_program(const Hypothesis& h, int depth_coeff);

bool covered(const Hypothesis& h, const Program& background, const Atom& e);

}  // namespace poker
