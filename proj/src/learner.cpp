#include "poker/learner.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace poker {

namespace {

void collect_consts(const Term& t, std::set<int>& seen, std::vector<Sym>& out) {
    switch (t->kind) {
        case TermKind::Const:
            if (seen.insert(t->name.id()).second) out.push_back(t->name);
            break;
        case TermKind::Cons:
            collect_consts(t->head, seen, out);
            collect_consts(t->tail, seen, out);
            break;
        default: break;
    }
}

Program union_program(const TopProgram& top, int depth_coeff) {
    Program p;
    p.depth_coeff = depth_coeff;
    std::map<std::string, Clause> sorted;
    for (const auto& h : top.hypotheses)
        for (const auto& c : h.clauses) sorted.emplace(clause_key(c), c);
    for (auto& [k, c] : sorted) p.clauses.push_back(std::move(c));
    return p;
}

Sym rename_pred(Sym p, const std::map<int, Sym>& renames) {
    auto it = renames.find(p.id());
    return it == renames.end() ? p : it->second;
}

Clause rename_clause(const Clause& c, const std::map<int, Sym>& renames) {
    Clause out = c;
    out.head.pred = rename_pred(out.head.pred, renames);
    for (auto& b : out.body) b.pred = rename_pred(b.pred, renames);
    return out;
}

// Invented symbols are private to each hypothesis: a raw clause union would
// let derivations mix clauses across hypotheses through a shared s_1, which
// accepts strings no single hypothesis accepts. Renaming the invented symbols
// of each hypothesis apart makes the union exactly the disjunction. Hypotheses
// that are identical up to invented-symbol naming are merged first.
Program union_program_apart(const TopProgram& top, SignatureSet& sigs,
                            Sym target, int arity, int depth_coeff) {
    // Canonical form: invented symbols renumbered by first appearance in the
    // canonically sorted clause list.
    std::map<std::string, std::vector<Clause>> variants;
    for (const auto& h : top.hypotheses) {
        std::map<std::string, Clause> sorted;
        for (const auto& c : h.clauses) sorted.emplace(clause_key(c), c);
        std::map<int, Sym> renames;
        int next = 0;
        auto canon = [&](Sym p) {
            if (!sigs.contains(p) || !sigs.is_invented(p)) return;
            if (renames.count(p.id())) return;
            renames.emplace(p.id(),
                            Sym::intern("\x01inv_" + std::to_string(next++)));
        };
        for (const auto& [k, c] : sorted) {
            canon(c.head.pred);
            for (const auto& b : c.body) canon(b.pred);
        }
        std::map<std::string, Clause> renamed;
        for (const auto& [k, c] : sorted) {
            Clause rc = rename_clause(c, renames);
            renamed.emplace(clause_key(rc), rc);
        }
        std::string key;
        std::vector<Clause> clauses;
        for (auto& [k, c] : renamed) {
            key += k;
            key += '\n';
            clauses.push_back(std::move(c));
        }
        variants.emplace(std::move(key), std::move(clauses));
    }

    Program p;
    p.depth_coeff = depth_coeff;
    std::map<std::string, Clause> sorted;
    int next = 0;
    for (const auto& [vk, clauses] : variants) {
        std::map<int, Sym> renames;
        auto fresh = [&](Sym c) {
            if (c.str().rfind("\x01inv_", 0) != 0 || renames.count(c.id())) return;
            Sym nv = Sym::intern(target.str() + "_" + std::to_string(++next));
            if (!sigs.contains(nv)) sigs.add(nv, arity, Role::Invented);
            renames.emplace(c.id(), nv);
        };
        for (const auto& c : clauses) {
            fresh(c.head.pred);
            for (const auto& b : c.body) fresh(b.pred);
        }
        for (const auto& c : clauses) {
            Clause rc = rename_clause(c, renames);
            sorted.emplace(clause_key(rc), std::move(rc));
        }
    }
    for (auto& [k, c] : sorted) p.clauses.push_back(std::move(c));
    return p;
}

}  // namespace

std::vector<Sym> terminal_alphabet(const Program& background) {
    std::set<int> seen;
    std::vector<Sym> out;
    for (const auto& c : background.clauses) {
        for (const auto& a : c.head.args) collect_consts(a, seen, out);
        for (const auto& b : c.body)
            for (const auto& a : b.args) collect_consts(a, seen, out);
    }
    std::sort(out.begin(), out.end(), [](Sym a, Sym b) { return natural_less(a, b); });
    return out;
}

std::vector<Atom> generate(const Program& background, const TopProgram& top,
                           Sym target, int arity, const std::vector<Atom>& labelled,
                           const std::vector<Atom>& unlabelled,
                           const LearnerParams& params,
                           const std::vector<Sym>& alphabet) {
    std::vector<Atom> out;
    std::set<std::string> taken;
    for (const auto& e : labelled) taken.insert(atom_key(e));
    for (const auto& e : unlabelled) {
        if (taken.insert(atom_key(e)).second) out.push_back(e);
    }
    if (params.k <= 0 || top.hypotheses.empty()) return out;

    int want = params.k + static_cast<int>(taken.size());
    std::vector<Atom> pool;
    if (params.gestalt) {
        Program t_prime = merge_programs(background, union_program(top, params.depth_coeff));
        pool = enumerate_atoms(t_prime, target, arity, want, params.max_gen_len, alphabet);
    } else {
        std::set<std::string> seen;
        for (const auto& h : top.hypotheses) {
            Program p = merge_programs(background, hypothesis_program(h, params.depth_coeff));
            for (auto& a : enumerate_atoms(p, target, arity, want, params.max_gen_len, alphabet))
                if (seen.insert(atom_key(a)).second) pool.push_back(std::move(a));
        }
        std::sort(pool.begin(), pool.end(),
                  [&](const Atom& a, const Atom& b) { return atom_less(a, b, alphabet); });
    }
    int added = 0;
    for (auto& a : pool) {
        if (added >= params.k) break;
        if (!taken.insert(atom_key(a)).second) continue;
        out.push_back(std::move(a));
        ++added;
    }
    return out;
}

namespace {

// Lazily memoized coverage of atoms by hypotheses.
class Coverage {
public:
    Coverage(const Program& background, const TopProgram& top) {
        for (const auto& h : top.hypotheses)
            programs_.push_back(merge_programs(background, hypothesis_program(h, background.depth_coeff)));
    }

    bool covers(size_t hyp, const Atom& e) {
        auto key = std::make_pair(hyp, atom_key(e));
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        bool r = prove(e, programs_[hyp]).proved;
        memo_.emplace(std::move(key), r);
        return r;
    }

    size_t size() const { return programs_.size(); }

private:
    std::vector<Program> programs_;
    std::map<std::pair<size_t, std::string>, bool> memo_;
};

}  // namespace

std::pair<TopProgram, Labelling> label(const Program& background,
                                       const TopProgram& top,
                                       const std::vector<Atom>& labelled,
                                       const std::vector<Atom>& candidates) {
    Coverage cov(background, top);
    std::vector<bool> alive(top.hypotheses.size(), true);
    Labelling lab;
    std::set<std::string> positive_keys, seen;
    for (const auto& e : labelled) {
        lab.positives.push_back(e);
        positive_keys.insert(atom_key(e));
        seen.insert(atom_key(e));
    }
    for (const auto& e : candidates) {
        std::string k = atom_key(e);
        if (positive_keys.count(k)) continue;  // duplicate of a positive: skip
        if (!seen.insert(k).second) continue;
        std::vector<size_t> removal;
        for (size_t i = 0; i < alive.size(); ++i)
            if (alive[i] && cov.covers(i, e)) removal.push_back(i);
        bool consistent = true;
        if (!removal.empty()) {
            std::vector<bool> dead(alive.size(), false);
            for (size_t i : removal) dead[i] = true;
            for (const auto& p : lab.positives) {
                bool covered_still = false;
                for (size_t i = 0; i < alive.size() && !covered_still; ++i)
                    if (alive[i] && !dead[i] && cov.covers(i, p)) covered_still = true;
                if (!covered_still) {
                    consistent = false;
                    break;
                }
            }
        }
        if (consistent) {
            for (size_t i : removal) alive[i] = false;
            lab.negatives.push_back(e);
        } else {
            lab.positives.push_back(e);
            positive_keys.insert(std::move(k));
        }
    }
    TopProgram out;
    for (size_t i = 0; i < alive.size(); ++i)
        if (alive[i]) out.hypotheses.push_back(top.hypotheses[i]);
    return {std::move(out), std::move(lab)};
}

Program reduce_program(const Program& p, const Program& background, Sym target,
                       int arity, int max_gen_len, const std::vector<Sym>& alphabet,
                       int probe_cap) {
    std::map<std::string, Clause> sorted;
    for (const auto& c : p.clauses) sorted.emplace(clause_key(c), c);
    std::vector<Clause> clauses;
    for (auto& [k, c] : sorted) clauses.push_back(std::move(c));

    Program whole = background;
    whole.depth_coeff = p.depth_coeff;
    for (const auto& c : clauses) whole.clauses.push_back(c);
    std::vector<Atom> probe =
        enumerate_atoms(whole, target, arity, probe_cap, max_gen_len, alphabet);

    for (size_t i = 0; i < clauses.size();) {
        Program without = background;
        without.depth_coeff = p.depth_coeff;
        for (size_t j = 0; j < clauses.size(); ++j)
            if (j != i) without.clauses.push_back(clauses[j]);
        bool same = true;
        for (const auto& a : probe)
            if (!prove(a, without).proved) {
                same = false;
                break;
            }
        if (same)
            clauses.erase(clauses.begin() + static_cast<long>(i));
        else
            ++i;
    }
    Program out;
    out.depth_coeff = p.depth_coeff;
    out.clauses = std::move(clauses);
    return out;
}

namespace {

Term shift_vars(const Term& t, int offset) {
    switch (t->kind) {
        case TermKind::Var: return mk_var(t->var + offset);
        case TermKind::Cons:
            return mk_cons(shift_vars(t->head, offset), shift_vars(t->tail, offset));
        default: return t;
    }
}

Atom shift_atom(const Atom& a, int offset) {
    Atom out;
    out.pred = a.pred;
    for (const auto& t : a.args) out.args.push_back(shift_vars(t, offset));
    return out;
}

// All complete unfoldings of c's invented calls, or nullopt if some symbol
// cannot be eliminated within the one-cycle bound.
std::optional<std::vector<Clause>> expand_clause(
    const Clause& c0, const std::map<int, std::vector<Clause>>& defs,
    const SignatureSet& sigs, std::set<int> used) {
    Clause c = normalize_clause(c0);
    size_t pos = c.body.size();
    for (size_t i = 0; i < c.body.size(); ++i)
        if (sigs.contains(c.body[i].pred) && sigs.is_invented(c.body[i].pred)) {
            pos = i;
            break;
        }
    if (pos == c.body.size()) return std::vector<Clause>{c};
    Sym sym = c.body[pos].pred;
    if (used.count(sym.id())) return std::nullopt;
    auto dit = defs.find(sym.id());
    if (dit == defs.end() || dit->second.empty()) return std::nullopt;
    used.insert(sym.id());

    std::vector<Clause> out;
    for (const auto& d0 : dit->second) {
        Clause d = normalize_clause(d0);
        int offset = c.var_count;
        Bindings bs;
        Atom dh = shift_atom(d.head, offset);
        bool ok = c.body[pos].args.size() == dh.args.size();
        for (size_t i = 0; ok && i < dh.args.size(); ++i)
            ok = unify(c.body[pos].args[i], dh.args[i], bs);
        if (!ok) continue;
        Clause r;
        r.head = apply_bindings(c.head, bs);
        for (size_t i = 0; i < c.body.size(); ++i) {
            if (i == pos) {
                for (const auto& b : d.body)
                    r.body.push_back(apply_bindings(shift_atom(b, offset), bs));
            } else {
                r.body.push_back(apply_bindings(c.body[i], bs));
            }
        }
        auto rec = expand_clause(r, defs, sigs, used);
        if (!rec) return std::nullopt;
        for (auto& rc : *rec) out.push_back(std::move(rc));
    }
    return out;
}

}  // namespace

Program unfold_program(const Program& p, const Program& background,
                       const SignatureSet& sigs, Sym target, int arity,
                       int max_gen_len, const std::vector<Sym>& alphabet,
                       int probe_cap, std::vector<std::string>* diagnostics) {
    bool any_invented = false;
    std::map<int, std::vector<Clause>> defs;
    std::vector<Clause> target_clauses;
    for (const auto& c : p.clauses) {
        if (sigs.contains(c.head.pred) && sigs.is_invented(c.head.pred)) {
            defs[c.head.pred.id()].push_back(c);
            any_invented = true;
        } else {
            target_clauses.push_back(c);
            for (const auto& b : c.body)
                if (sigs.contains(b.pred) && sigs.is_invented(b.pred)) any_invented = true;
        }
    }
    if (!any_invented) return p;

    std::map<std::string, Clause> result;
    for (const auto& c : target_clauses) {
        auto expanded = expand_clause(c, defs, sigs, {});
        if (!expanded) {
            if (diagnostics)
                diagnostics->push_back("unfold: could not eliminate an invented predicate; program left unchanged");
            return p;
        }
        for (auto& rc : *expanded) result.emplace(clause_key(rc), rc);
    }
    Program out;
    out.depth_coeff = p.depth_coeff;
    for (auto& [k, c] : result) out.clauses.push_back(std::move(c));

    // Acceptance probe must agree with the original program.
    Program orig = merge_programs(background, p);
    Program repl = merge_programs(background, out);
    auto a = enumerate_atoms(orig, target, arity, probe_cap, max_gen_len, alphabet);
    auto b = enumerate_atoms(repl, target, arity, probe_cap, max_gen_len, alphabet);
    bool same = a.size() == b.size();
    for (size_t i = 0; same && i < a.size(); ++i) same = atoms_equal(a[i], b[i]);
    if (!same) {
        if (diagnostics)
            diagnostics->push_back("unfold: acceptance mismatch after unfolding; program left unchanged");
        return p;
    }
    return out;
}

namespace {

LearnResult run_learn(const LearnProblem& problem, bool self_supervise) {
    LearnResult res;
    const LearnerParams& params = problem.params;
    if (!problem.sonf) throw ConfigError("no SONF configured");

    SignatureSet sigs = problem.sigs;
    InducerConfig icfg;
    icfg.l = params.l;
    icfg.depth_coeff = params.depth_coeff;
    icfg.max_invented = params.max_invented;

    Program background = problem.background;
    background.depth_coeff = params.depth_coeff;

    std::vector<Sym> alphabet =
        problem.alphabet.empty() ? terminal_alphabet(background) : problem.alphabet;

    TopProgram top = generalise(background, *problem.sonf, problem.labelled, icfg,
                                sigs, &res.diagnostics);
    if (top.hypotheses.empty()) {
        res.diagnostics.push_back("generalise returned no hypothesis within bounds");
        res.labelling.positives = problem.labelled;
        res.program.depth_coeff = params.depth_coeff;
        return res;
    }

    if (self_supervise) {
        std::vector<Atom> candidates =
            generate(background, top, problem.target, problem.target_arity,
                     problem.labelled, problem.unlabelled, params, alphabet);
        // User-given unlabelled atoms keep their input order; generated atoms
        // are judged longest-first. Long strings prune over-specific junk
        // hypotheses while every removal is still easy to compensate, so by
        // the time short in-language strings come up, removing their accepters
        // breaks coverage and they are correctly relabelled positive.
        std::set<std::string> user_keys;
        for (const auto& e : problem.unlabelled) user_keys.insert(atom_key(e));
        auto tail = candidates.begin();
        while (tail != candidates.end() && user_keys.count(atom_key(*tail))) ++tail;
        std::stable_sort(tail, candidates.end(), [&](const Atom& a, const Atom& b) {
            return atom_less(b, a, alphabet);
        });
        auto [survivors, labelling] = label(background, top, problem.labelled, candidates);
        res.top_program = std::move(survivors);
        res.labelling = std::move(labelling);
    } else {
        res.top_program = std::move(top);
        res.labelling.positives = problem.labelled;
    }

    // Disjunction-preserving union once labelling has pruned the hypothesis
    // set; with no pruning signal (k = 0, no unlabelled input) the plain
    // clause union is kept: the result is over-general either way and the
    // renamed-apart form would be enormous.
    constexpr size_t kApartCap = 192;
    if (self_supervise && res.top_program.hypotheses.size() <= kApartCap)
        res.program = union_program_apart(res.top_program, sigs, problem.target,
                                          problem.target_arity, params.depth_coeff);
    else
        res.program = union_program(res.top_program, params.depth_coeff);
    if (params.reduce)
        res.program = reduce_program(res.program, background, problem.target,
                                     problem.target_arity, params.max_gen_len,
                                     alphabet, params.probe_cap);
    if (params.unfold_output)
        res.program = unfold_program(res.program, background, sigs, problem.target,
                                     problem.target_arity, params.max_gen_len,
                                     alphabet, params.probe_cap, &res.diagnostics);
    return res;
}

}  // namespace

LearnResult learn(const LearnProblem& problem) { return run_learn(problem, true); }

LearnResult louise_baseline(const LearnProblem& problem) {
    return run_learn(problem, false);
}

void verify_labelling(const Program& background, const TopProgram& initial,
                      const TopProgram& final_top, const Labelling& labelling) {
    std::set<std::string> pos, neg, init_keys;
    for (const auto& a : labelling.positives) pos.insert(atom_key(a));
    for (const auto& a : labelling.negatives) neg.insert(atom_key(a));
    for (const auto& a : pos)
        if (neg.count(a)) throw std::logic_error("labelling not a partition: " + a);
    for (const auto& h : initial.hypotheses) init_keys.insert(h.key);
    for (const auto& h : final_top.hypotheses)
        if (!init_keys.count(h.key))
            throw std::logic_error("final T is not a subset of initial T");
    for (const auto& p : labelling.positives) {
        bool c = false;
        for (const auto& h : final_top.hypotheses)
            if (covered(h, background, p)) {
                c = true;
                break;
            }
        if (!c && !final_top.hypotheses.empty())
            throw std::logic_error("positive not covered by final T: " + atom_key(p));
    }
    for (const auto& n : labelling.negatives)
        for (const auto& h : final_top.hypotheses)
            if (covered(h, background, n))
                throw std::logic_error("negative covered by final T: " + atom_key(n));
}

}  // namespace poker
