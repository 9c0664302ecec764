#pragma once

#include <memory>
#include <optional>
#include <stdexcept>

#include "poker/term.hpp"

namespace poker {

// Roles partition the predicate-symbol universe. The empty preterminal also
// passes background membership tests.
enum class Role { Target, Background, Invented, Empty };

struct PredInfo {
    Sym name;
    int arity = 2;
    Role role = Role::Background;
};

class SignatureSet {
public:
    void add(Sym name, int arity, Role role);
    bool contains(Sym name) const;
    Role role_of(Sym name) const;        // throws on unknown symbol
    int arity_of(Sym name) const;
    bool is_background(Sym name) const;  // true for Background and Empty
    bool is_target(Sym name) const;
    bool is_invented(Sym name) const;
    bool is_empty(Sym name) const;

    // Symbols of a role in natural (alphabetic, numeric-suffix-aware) order.
    std::vector<Sym> of_role(Role r) const;
    const std::vector<PredInfo>& all() const { return symbols_; }

private:
    std::vector<PredInfo> symbols_;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Constraint formulae over a metarule's second-order variables.
struct Constraint;
using ConstraintPtr = std::shared_ptr<const Constraint>;

struct Constraint {
    enum class Kind {
        True,
        Eq,          // vars[0] == vars[1]
        Neq,
        Target,      // every listed var instantiates to a target symbol
        Invented,
        Background,
        Empty,
        CondNeq,     // invented(P,Q) -> P != Q
        CondLeq,     // invented(P,Q) -> P <= Q (alphabetic)
        CondGeq,
        And,
        Or,
        Not
    };
    Kind kind = Kind::True;
    std::vector<int> vars;               // second-order variable indices
    std::vector<ConstraintPtr> kids;
};

ConstraintPtr c_true();
ConstraintPtr c_eq(int p, int q);
ConstraintPtr c_neq(int p, int q);
ConstraintPtr c_target(std::vector<int> vs);
ConstraintPtr c_invented(std::vector<int> vs);
ConstraintPtr c_background(std::vector<int> vs);
ConstraintPtr c_empty(std::vector<int> vs);
ConstraintPtr c_cond_neq(int p, int q);
ConstraintPtr c_cond_leq(int p, int q);
ConstraintPtr c_cond_geq(int p, int q);
ConstraintPtr c_and(std::vector<ConstraintPtr> kids);
ConstraintPtr c_or(std::vector<ConstraintPtr> kids);
ConstraintPtr c_not(ConstraintPtr kid);

enum class Tri { Sat, Unsat, Undetermined };

// Literal schema: one second-order variable applied to first-order variable
// positions. The same second-order variable may occur in several literals.
struct LiteralSchema {
    int so_var = 0;
    std::vector<int> fo_vars;
};

struct Metarule {
    Sym name;
    std::vector<std::string> so_names;  // P, Q, R, ...
    std::vector<std::string> fo_names;  // x, y, z, ...
    LiteralSchema head;
    std::vector<LiteralSchema> body;
    ConstraintPtr constraint = c_true();

    int so_count() const { return static_cast<int>(so_names.size()); }
    int fo_count() const { return static_cast<int>(fo_names.size()); }
};

struct Sonf {
    Sym name;
    std::vector<Metarule> metarules;
};

// Binding of a metarule's second-order variables to predicate symbols.
struct Metasub {
    const Metarule* rule = nullptr;
    std::vector<std::optional<Sym>> bind;

    bool complete() const;
};

// Three-valued satisfaction of c under a possibly partial metasubstitution:
// Sat iff every grounding extension over the symbol universe satisfies c,
// Unsat iff none does. Short-circuits where bindings already determine the
// answer, with a small exhaustive fallback for the residual cases.
Tri eval_constraint(const ConstraintPtr& c, const Metasub& m,
                    const SignatureSet& symbols);

// Short-circuit-only variant for the induction inner loop: may answer
// Undetermined where eval_constraint would not, never wrongly Sat/Unsat.
Tri eval_constraint_partial(const ConstraintPtr& c, const Metasub& m,
                            const SignatureSet& symbols);

// First-order clause from a complete, constraint-satisfying metasubstitution.
Clause project(const Metasub& m);

// True iff some metarule in the SONF has a complete, constraint-satisfying
// metasubstitution projecting to c up to variable renaming.
bool matches_sonf(const Clause& c, const Sonf& sonf, const SignatureSet& symbols);

// Table-2 metarule library: Identity, Inverse, Precon, Chain, Tri-Chain.
const std::vector<Metarule>& builtin_metarules();

const Sonf& builtin_cgnf();               // Identity, Chain, Tri-Chain
const Sonf& builtin_cgnf_no_trichain();   // Identity, Chain
const Sonf& builtin_lnf();                // one-step L-system rewrite form
const Sonf* find_builtin_sonf(const std::string& name);

}  // namespace poker
