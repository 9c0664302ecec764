#pragma once

#include <functional>
#include <unordered_map>

#include "poker/term.hpp"

namespace poker {

// Triangular substitution with a trail for backtracking.
struct Bindings {
    std::unordered_map<int, Term> map;
    std::vector<int> trail;

    Term walk(const Term& t) const;
    bool bind(int var, const Term& t);  // occurs-check enforced
    size_t mark() const { return trail.size(); }
    void undo_to(size_t m);
};

bool unify(const Term& a, const Term& b, Bindings& b2);
bool unify_atoms(const Atom& a, const Atom& b, Bindings& bs);

Term apply_bindings(const Term& t, const Bindings& bs);
Atom apply_bindings(const Atom& a, const Bindings& bs);

// Convenience for the unify operation contract: most general unifier of two
// standardized-apart atoms, or nothing.
std::optional<Bindings> unify(const Atom& a, const Atom& b);

struct ProveResult {
    bool proved = false;
    bool budget_hit = false;  // some branch was cut by the depth budget
};

// Bounded SLD resolution. The budget counts resolution steps along any one
// derivation branch; prove() sizes it as depth_coeff * (string length + 1).
class Solver {
public:
    Solver(const Program& prog, int budget);

    // Proves goals left to right. on_solution may return true to stop the
    // search. Returns true if stopped early.
    bool run(const std::vector<Atom>& goals, Bindings& bs,
             const std::function<bool(const Bindings&)>& on_solution);

    bool budget_hit() const { return budget_hit_; }

    // Safety valve against ambiguous programs whose derivation trees blow up
    // inside the depth budget; hitting it counts as a budget hit.
    void set_step_cap(long cap) { step_cap_ = cap; }

private:
    bool step(std::vector<Atom>& goals, Bindings& bs, int depth,
              const std::function<bool(const Bindings&)>& on_solution);

    const Program& prog_;
    int budget_;
    int next_var_ = 0;
    bool budget_hit_ = false;
    long step_cap_ = 4000000;
    long steps_ = 0;
    std::unordered_map<int, std::vector<const Clause*>> index_;  // by pred id
};

ProveResult prove(const Atom& goal, const Program& prog);

// Merge two programs (background first); depth_coeff taken from the first.
Program merge_programs(const Program& a, const Program& b);

// Fair generation: ground atoms of the target predicate entailed by the
// program, layered by string length (arity 2: one string; arity 4: layered
// by total length of the two strings), sorted within a layer by the given
// terminal order. Complete up to max_len unless max_count truncates.
std::vector<Atom> enumerate_atoms(const Program& prog, Sym target, int arity,
                                  int max_count, int max_len,
                                  const std::vector<Sym>& alphabet);

}  // namespace poker
