#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace poker {

// Interned symbol. Equality and hashing are O(1); ordering uses
// natural_less (numeric suffixes compare numerically, so s_2 < s_10).
class Sym {
public:
    Sym() = default;
    static Sym intern(std::string_view name);
    const std::string& str() const;
    int id() const { return id_; }
    bool valid() const { return id_ >= 0; }
    friend bool operator==(Sym a, Sym b) { return a.id_ == b.id_; }
    friend bool operator!=(Sym a, Sym b) { return a.id_ != b.id_; }

private:
    explicit Sym(int id) : id_(id) {}
    int id_ = -1;
};

struct SymHash {
    size_t operator()(Sym s) const { return static_cast<size_t>(s.id()); }
};

bool natural_less(Sym a, Sym b);
bool natural_less(const std::string& a, const std::string& b);

// First-order terms. Strings are proper lists of constants; difference
// lists arise from clause bodies like one([1|X],X). Lists are built from
// cons cells so partial lists (variable tails) unify uniformly. No other
// compound shape exists.
enum class TermKind { Var, Const, Nil, Cons };

class TermNode;
using Term = std::shared_ptr<const TermNode>;

class TermNode {
public:
    TermKind kind;
    int var = -1;     // Var
    Sym name;         // Const
    Term head, tail;  // Cons
};

Term mk_var(int id);
Term mk_const(Sym name);
Term mk_nil();
Term mk_cons(Term head, Term tail);
Term mk_string(const std::vector<Sym>& syms, Term tail = mk_nil());

bool term_ground(const Term& t);

struct Atom {
    Sym pred;
    std::vector<Term> args;
};

// Definite clause. Variables are numbered 0..var_count-1 so clauses can be
// standardized apart by offsetting ids.
struct Clause {
    Atom head;
    std::vector<Atom> body;
    int var_count = 0;
};

struct Program {
    std::vector<Clause> clauses;
    int depth_coeff = 4;  // prove budget = depth_coeff * (string length + 1)
};

// Renumber clause variables by order of first occurrence and set var_count.
Clause normalize_clause(const Clause& c);

// Total ground length of all list arguments; used to size depth budgets.
int atom_string_length(const Atom& a);

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Clause& c);
std::string to_string(const Program& p);

// Canonical text form; equal up to variable renaming iff keys are equal.
std::string clause_key(const Clause& c);

bool atoms_equal(const Atom& a, const Atom& b);
std::string atom_key(const Atom& a);

// Ordering used for deterministic output: (length, symbol order) on the
// flattened list arguments, then predicate name.
bool atom_less(const Atom& a, const Atom& b, const std::vector<Sym>& alphabet);

std::optional<std::vector<Sym>> list_syms(const Term& t);

}  // namespace poker
