#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "poker/metarule.hpp"

namespace poker {

// Ground-truth membership test for a bit-string language. Strings use the
// characters '1' and '0'; other benchmark alphabets (a/b, parentheses) are
// mapped onto bits.
struct LanguageOracle {
    Sym name;
    std::function<bool(const std::string&)> accepts;
};

// Known names: even_parity, anbn, equal_count, anbm, palindrome, parens.
const LanguageOracle& oracle(const std::string& name);  // throws ConfigError
const std::vector<std::string>& oracle_names();

// Deterministic (D0L) Lindenmayer system; constants carry identity rules.
struct LSystem {
    Sym name;
    std::string axiom;
    std::map<char, std::string> rules;
    std::string alphabet;  // in tie-break order
};

// Known names: dragon, hilbert, koch, sierpinski.
const LSystem& lsystem(const std::string& name);  // throws ConfigError
const std::vector<std::string>& lsystem_names();

std::string lsystem_step(const LSystem& ls, const std::string& s);  // throws on unknown symbol
std::vector<std::string> lsystem_derive(const LSystem& ls, int depth);

// Atom renderings. Bit strings become s(List,[]); rewrite pairs become
// s(Src,[],Dst,[]).
Atom string_atom(Sym target, const std::string& s);
Atom rewrite_atom(Sym target, const std::string& src, const std::string& dst);

// The (first) string argument of a difference-list atom, if ground.
std::optional<std::string> atom_input_string(const Atom& a);
std::optional<std::string> atom_output_string(const Atom& a);  // arity-4 only

// Uniform sample without replacement from the accepted (positive) or rejected
// strings of length <= max_len, in length-lexicographic order. If fewer than
// count strings exist, returns all of them and appends a diagnostic.
std::vector<Atom> sample_language(const LanguageOracle& o, Sym target, int count,
                                  int max_len, uint64_t seed, bool positive,
                                  std::vector<std::string>* diagnostics = nullptr);

// Positive sample with one string drawn per length band of [0, max_len]:
// short members pin the bottom of the language while long ones force
// generalisation. Deterministic in seed.
std::vector<Atom> sample_language_stratified(const LanguageOracle& o, Sym target,
                                             int count, int max_len, uint64_t seed,
                                             std::vector<std::string>* diagnostics = nullptr);

// Uniform sample without replacement of rewrite pairs (sigma, step(sigma)),
// where sigma ranges over strings occurring in derivations of the axiom plus
// their contiguous substrings up to max_src_len.
std::vector<Atom> sample_rewrites(const LSystem& ls, Sym target, int count,
                                  int max_src_len, uint64_t seed,
                                  std::vector<std::string>* diagnostics = nullptr);

// Standard first-order background theories.
Program background_bits();              // one-->[1], zero-->[0], empty-->[]
Program background_lsystem(const LSystem& ls);  // one preterminal per symbol
void register_background_roles(const Program& background, SignatureSet& sigs);

// Preterminal name for a terminal symbol (1->one, 0->zero, +->plus, ...).
std::string preterminal_name(char terminal);

}  // namespace poker
