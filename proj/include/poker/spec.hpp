#pragma once

#include "poker/bench.hpp"
#include "poker/learner.hpp"

namespace poker {

struct ParseError {
    int line = 0;
    std::string message;
};

struct SpecParseError : ConfigError {
    std::vector<ParseError> errors;
    explicit SpecParseError(std::vector<ParseError> errs);
};

// A textual learning problem: target, first-order background theory (explicit
// DCG preterminals or auto-derived from example alphabets), second-order
// background theory (named builtin or inline metarules), examples, parameters.
struct ProblemSpec {
    Sym target;
    int target_arity = 2;
    Program background;
    bool background_auto = false;
    std::string sonf_name = "cgnf";
    std::optional<Sonf> inline_sonf;
    std::vector<Atom> labelled;
    std::vector<Atom> unlabelled;
    LearnerParams params;
    uint64_t seed = 0;

    const Sonf& sonf() const;  // throws ConfigError on unknown name

    // Fully resolved problem: auto background expanded, roles registered.
    LearnProblem to_problem() const;
};

ProblemSpec parse_spec(const std::string& text);
std::string print_spec(const ProblemSpec& spec);

// First-order text forms (Prolog conventions: uppercase variables).
Atom parse_atom_text(const std::string& text);
Clause parse_clause_text(const std::string& text);
Program parse_program_text(const std::string& text);

std::string print_constraint(const ConstraintPtr& c,
                             const std::vector<std::string>& so_names);
std::string print_metarule(const Metarule& m);

}  // namespace poker
