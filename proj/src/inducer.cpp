#include "poker/inducer.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace poker {

namespace {

// Second-order refutation search. Goals carry either a concrete predicate or
// a reference to an unbound slot of a store entry; slots are bound lazily when
// their literal is selected, so wide metarules (LNF) stay tractable.
class MetaSearch {
public:
    MetaSearch(const Program& background, const Sonf& sonf, SignatureSet& sigs,
               const std::vector<Sym>& pool, const InducerConfig& cfg,
               std::map<std::string, Hypothesis>& out)
        : background_(background), sonf_(sonf), sigs_(sigs), pool_(pool),
          cfg_(cfg), out_(out) {
        for (const auto& c : background.clauses)
            index_[c.head.pred.id()].push_back(&c);
        targets_ = sigs.of_role(Role::Target);
        backgrounds_ = sigs.of_role(Role::Background);
        for (Sym e : sigs.of_role(Role::Empty)) backgrounds_.push_back(e);
        std::sort(backgrounds_.begin(), backgrounds_.end(),
                  [](Sym a, Sym b) { return natural_less(a, b); });
    }

    void prove_example(const Atom& e) {
        int len = atom_string_length(e);
        budget_ = cfg_.depth_coeff * (len + 1);
        Goal g;
        g.entry = -1;
        g.pred = e.pred;
        g.args = e.args;
        stack_.clear();
        stack_.push_back(std::move(g));
        solve(0);
    }

    bool overflowed() const { return overflow_; }

private:
    struct Goal {
        int entry = -1;  // store entry whose slot names the predicate, or -1
        int slot = 0;
        Sym pred;        // valid when entry == -1
        std::vector<Term> args;
    };

    struct StoreEntry {
        const Metarule* rule;
        std::vector<std::optional<Sym>> bind;
    };

    void solve(int depth) {
        if (++steps_ > cfg_.max_steps || out_.size() >= cfg_.max_hypotheses) {
            overflow_ = true;
            return;
        }
        if (stack_.empty()) {
            emit();
            return;
        }
        if (depth >= budget_) return;
        Goal g = std::move(stack_.back());
        stack_.pop_back();
        if (g.entry < 0) {
            resolve(g.pred, g.args, depth);
        } else {
            // Index store_ afresh around every resolve: nested resolution can
            // grow the store and reallocate it.
            size_t ei = static_cast<size_t>(g.entry), si = static_cast<size_t>(g.slot);
            if (store_[ei].bind[si]) {
                resolve(*store_[ei].bind[si], g.args, depth);
            } else {
                for (Sym cand : slot_candidates(g.args.size())) {
                    store_[ei].bind[si] = cand;
                    Metasub view{store_[ei].rule, store_[ei].bind};
                    if (eval_constraint_partial(view.rule->constraint, view, sigs_) !=
                        Tri::Unsat)
                        resolve(cand, g.args, depth);
                    store_[ei].bind[si] = std::nullopt;
                    if (overflow_) break;
                }
            }
        }
        stack_.push_back(std::move(g));
    }

    // Invented symbols are introduced lazily: only ones already used in the
    // store plus the first unused one are candidates.
    std::vector<Sym> slot_candidates(size_t arity) {
        std::vector<Sym> cands;
        auto want = [&](Sym s) { return sigs_.arity_of(s) == static_cast<int>(arity); };
        for (Sym t : targets_)
            if (want(t)) cands.push_back(t);
        // Background before invented: the leading body slot of a grammar rule
        // must eventually consume a terminal, so terminal-first ordering keeps
        // the search directional and failures shallow.
        for (Sym b : backgrounds_)
            if (want(b)) cands.push_back(b);
        for (Sym v : pool_) {
            bool used = false;
            for (const auto& e : store_)
                for (const auto& b : e.bind)
                    if (b && *b == v) used = true;
            if (want(v)) cands.push_back(v);
            if (!used) break;  // first unused pool symbol is the last tried
        }
        return cands;
    }

    void resolve(Sym pred, const std::vector<Term>& args, int depth) {
        Role role = sigs_.role_of(pred);
        if (role == Role::Background || role == Role::Empty) {
            auto it = index_.find(pred.id());
            if (it == index_.end()) return;
            for (const Clause* c : it->second) {
                int offset = next_var_;
                next_var_ += c->var_count;
                size_t m = bs_.mark();
                size_t base = stack_.size();
                if (unify_clause_head(*c, offset, args)) {
                    for (auto bit = c->body.rbegin(); bit != c->body.rend(); ++bit) {
                        Goal g;
                        g.entry = -1;
                        g.pred = bit->pred;
                        for (const auto& a : bit->args) g.args.push_back(rename(a, offset));
                        stack_.push_back(std::move(g));
                    }
                    solve(depth + 1);
                }
                stack_.resize(base);
                bs_.undo_to(m);
                next_var_ = offset;
                if (overflow_) return;
            }
            return;
        }
        // target or invented: resolve with a metarule, reusing an existing
        // store entry or creating a new one while |store| < l
        for (const auto& rule : sonf_.metarules) {
            if (rule.head.fo_vars.size() != args.size()) continue;
            for (size_t ei = 0; ei < store_.size(); ++ei) {
                const auto& e = store_[ei];
                if (e.rule != &rule) continue;
                auto hb = e.bind[static_cast<size_t>(rule.head.so_var)];
                if (!hb || *hb != pred) continue;
                use_entry(ei, args, depth);
                if (overflow_) return;
            }
            if (store_.size() < static_cast<size_t>(cfg_.l)) {
                StoreEntry e;
                e.rule = &rule;
                e.bind.assign(static_cast<size_t>(rule.so_count()), std::nullopt);
                e.bind[static_cast<size_t>(rule.head.so_var)] = pred;
                Metasub view{&rule, e.bind};
                if (eval_constraint_partial(rule.constraint, view, sigs_) != Tri::Unsat) {
                    store_.push_back(std::move(e));
                    use_entry(store_.size() - 1, args, depth);
                    store_.pop_back();
                }
                if (overflow_) return;
            }
        }
    }

    void use_entry(size_t ei, const std::vector<Term>& args, int depth) {
        const Metarule* rule = store_[ei].rule;
        int offset = next_var_;
        next_var_ += rule->fo_count();
        size_t m = bs_.mark();
        size_t base = stack_.size();
        bool ok = true;
        for (size_t i = 0; ok && i < args.size(); ++i)
            ok = unify(mk_var(offset + rule->head.fo_vars[i]), args[i], bs_);
        if (ok) {
            for (auto bit = rule->body.rbegin(); bit != rule->body.rend(); ++bit) {
                Goal g;
                g.entry = static_cast<int>(ei);
                g.slot = bit->so_var;
                for (int fv : bit->fo_vars) g.args.push_back(mk_var(offset + fv));
                stack_.push_back(std::move(g));
            }
            solve(depth + 1);
        }
        stack_.resize(base);
        bs_.undo_to(m);
        next_var_ = offset;
    }

    bool unify_clause_head(const Clause& c, int offset, const std::vector<Term>& args) {
        if (c.head.args.size() != args.size()) return false;
        for (size_t i = 0; i < args.size(); ++i)
            if (!unify(rename(c.head.args[i], offset), args[i], bs_)) return false;
        return true;
    }

    static Term rename(const Term& t, int offset) {
        switch (t->kind) {
            case TermKind::Var: return mk_var(t->var + offset);
            case TermKind::Cons:
                return mk_cons(rename(t->head, offset), rename(t->tail, offset));
            default: return t;
        }
    }

    void emit() {
        Hypothesis h;
        std::map<std::string, Clause> clauses;
        for (const auto& e : store_) {
            Metasub m{e.rule, e.bind};
            if (!m.complete() ||
                eval_constraint(e.rule->constraint, m, sigs_) != Tri::Sat)
                return;  // incremental checks should have excluded this
            Clause c = project(m);
            clauses.emplace(clause_key(c), std::move(c));
            h.metasubs.push_back(std::move(m));
        }
        if (clauses.empty()) return;
        std::string key;
        for (auto& [k, c] : clauses) {
            key += k;
            key += '\n';
            h.clauses.push_back(std::move(c));
        }
        h.key = key;
        out_.emplace(std::move(key), std::move(h));
    }

    const Program& background_;
    const Sonf& sonf_;
    const SignatureSet& sigs_;
    std::vector<Sym> pool_;
    InducerConfig cfg_;
    std::map<std::string, Hypothesis>& out_;

    std::unordered_map<int, std::vector<const Clause*>> index_;
    std::vector<Sym> targets_, backgrounds_;
    Bindings bs_;
    std::vector<StoreEntry> store_;
    std::vector<Goal> stack_;
    int next_var_ = 0;
    int budget_ = 0;
    long steps_ = 0;
    bool overflow_ = false;
};

// Chart-driven construction for single-tape grammar SONFs. Blind second-order
// resolution revisits the same failed sub-proofs exponentially often; for
// metarules whose literals thread one difference list left to right, the
// hypothesis space factors through a CYK-style chart instead. The full clause
// universe (every constraint-satisfying metarule instantiation) is built once.
// A clause set covers the example iff a chart fixpoint over it derives the
// whole string, and the covering sets are upward closed, so the hypotheses a
// refutation-based search would return are exactly the supersets of minimal
// covering sets. Those minimal sets are enumerated directly: find one by
// greedy shrinking of a derivation's support, then recurse with each of its
// clauses banned in turn, which reaches every other minimal set.
class ChartTPC {
public:
    ChartTPC(const Program& background, const Sonf& sonf, const SignatureSet& sigs,
             const std::vector<Sym>& pool, const InducerConfig& cfg,
             std::map<std::string, Hypothesis>& out)
        : sigs_(sigs), pool_(pool), cfg_(cfg), out_(out) {
        eligible_ = pool.size() < 31 && shapes_ok(sonf) && facts_ok(background) &&
                    build_universe(sonf);
    }

    bool eligible() const { return eligible_; }
    bool overflowed() const { return overflow_; }

    // Guided phase, run once before the per-example searches: enumerate the
    // minimal clause sets covering every positive at once, then read each
    // example's minimal covers off those sets. A set that explains the whole
    // sample is where the generalising hypotheses live, and that space is far
    // smaller than the per-example one, so these hypotheses are found first
    // no matter how the budget then truncates the broad searches.
    void begin(const std::vector<Atom>& positives) {
        exs_.clear();
        for (const auto& e : positives) {
            ExCtx c;
            if (parse_example(e, c) && c.root >= 0) exs_.push_back(std::move(c));
        }
        if (exs_.empty()) return;
        make_canaries();
        steps_ = 0;
        overflow_ = false;
        joint_search();
    }

    // False when the example itself is not a plain string atom (or is too long
    // for the span bitmasks); the caller falls back to resolution search.
    bool run(const Atom& e) {
        ExCtx c;
        if (!parse_example(e, c)) return false;
        if (c.root < 0) return true;  // no clause can head the target
        steps_ = 0;  // caps are per example, as in the resolution search
        overflow_ = false;
        set_ctx(c);
        banned_.assign(universe_.size(), 0);
        found_.clear();
        hs_search(0);
        return true;
    }

private:
    struct UClause {
        const Metarule* rule = nullptr;
        std::vector<std::optional<Sym>> bind;
        Sym head;
        std::vector<Sym> body;
        Clause clause;
        std::string key;
        unsigned inv_mask = 0;  // pool symbols mentioned anywhere in the clause
    };

    // Span relation of one predicate: bit j of rows[i] set means the predicate
    // derives the substring [i, j) of the example.
    using Rows = std::vector<uint64_t>;

    struct ExCtx {
        std::vector<Sym> w;
        int n = 0;
        int root = -1;
        std::unordered_map<int, Rows> bg_rows;
    };

    bool parse_example(const Atom& e, ExCtx& out) const {
        if (e.args.size() != 2 || e.args[1]->kind != TermKind::Nil) return false;
        auto syms = list_syms(e.args[0]);
        if (!syms || syms->size() > 62) return false;
        auto rit = pidx_.find(e.pred.id());
        out = make_ctx(std::move(*syms));
        out.root = rit == pidx_.end() ? -1 : rit->second;
        return true;
    }

    ExCtx make_ctx(std::vector<Sym> w) const {
        ExCtx out;
        out.w = std::move(w);
        out.n = static_cast<int>(out.w.size());
        for (const auto& [pred, chs] : chunks_) {
            auto& rows = out.bg_rows[pred];
            rows.assign(static_cast<size_t>(out.n + 1), 0);
            for (const auto& chunk : chs) {
                int k = static_cast<int>(chunk.size());
                for (int i = 0; i + k <= out.n; ++i) {
                    bool hit = true;
                    for (int d = 0; hit && d < k; ++d)
                        hit = out.w[static_cast<size_t>(i + d)] == chunk[static_cast<size_t>(d)];
                    if (hit) rows[static_cast<size_t>(i)] |= 1ull << (i + k);
                }
            }
        }
        return out;
    }

    void set_ctx(const ExCtx& ex) {
        w_ = ex.w;
        n_ = ex.n;
        root_ = ex.root;
        bg_rows_ = ex.bg_rows;
        deriv_.assign(hpreds_.size(), Rows(static_cast<size_t>(n_ + 1), 0));
        scratch_ = deriv_;
        rank_.assign(hpreds_.size(),
                     std::vector<int>(static_cast<size_t>((n_ + 1) * (n_ + 1)), 0));
    }

    static constexpr size_t kUniverseCap = 4096;
    static constexpr int kNoRankCap = std::numeric_limits<int>::max();

    // Every metarule literal must be binary and thread positions linearly:
    // P(x,y) :- Q1(x,z1), Q2(z1,z2), ..., Qm(z_{m-1},y) with distinct fresh
    // connector variables.
    static bool shapes_ok(const Sonf& sonf) {
        for (const auto& r : sonf.metarules) {
            if (r.head.fo_vars.size() != 2 || r.body.empty()) return false;
            int x = r.head.fo_vars[0], y = r.head.fo_vars[1];
            if (x == y) return false;
            std::vector<int> seen{x, y};
            int thread = x;
            for (size_t b = 0; b < r.body.size(); ++b) {
                const auto& lit = r.body[b];
                if (lit.fo_vars.size() != 2) return false;
                if (lit.fo_vars[0] != thread) return false;
                int next = lit.fo_vars[1];
                if (b + 1 == r.body.size()) {
                    if (next != y) return false;
                } else {
                    for (int s : seen)
                        if (s == next) return false;
                    seen.push_back(next);
                }
                thread = next;
            }
        }
        return true;
    }

    // Background clauses must be bodiless string facts: p([c1..ck|X],X) or
    // p(X,X). Chunks are recorded per predicate.
    bool facts_ok(const Program& background) {
        for (const auto& c : background.clauses) {
            if (!c.body.empty() || c.head.args.size() != 2) return false;
            if (c.head.args[1]->kind != TermKind::Var) return false;
            int tail_var = c.head.args[1]->var;
            std::vector<Sym> chunk;
            const TermNode* t = c.head.args[0].get();
            while (t->kind == TermKind::Cons) {
                if (t->head->kind != TermKind::Const) return false;
                chunk.push_back(t->head->name);
                t = t->tail.get();
            }
            if (t->kind != TermKind::Var || t->var != tail_var) return false;
            chunks_[c.head.pred.id()].push_back(std::move(chunk));
        }
        return true;
    }

    bool build_universe(const Sonf& sonf) {
        std::vector<Sym> heads = sigs_.of_role(Role::Target);
        for (Sym v : pool_) heads.push_back(v);
        std::vector<Sym> bodies = sigs_.of_role(Role::Target);
        {
            std::vector<Sym> bg = sigs_.of_role(Role::Background);
            for (Sym e : sigs_.of_role(Role::Empty)) bg.push_back(e);
            std::sort(bg.begin(), bg.end(), [](Sym a, Sym b) { return natural_less(a, b); });
            for (Sym b : bg) bodies.push_back(b);
        }
        for (Sym v : pool_) bodies.push_back(v);

        for (const auto& r : sonf.metarules) {
            Metasub m{&r, std::vector<std::optional<Sym>>(
                              static_cast<size_t>(r.so_count()), std::nullopt)};
            std::function<bool(int)> assign = [&](int idx) -> bool {
                if (idx == r.so_count()) {
                    if (eval_constraint(r.constraint, m, sigs_) != Tri::Sat) return true;
                    UClause uc;
                    uc.rule = &r;
                    uc.bind = m.bind;
                    uc.head = *m.bind[static_cast<size_t>(r.head.so_var)];
                    for (const auto& lit : r.body)
                        uc.body.push_back(*m.bind[static_cast<size_t>(lit.so_var)]);
                    uc.clause = project(m);
                    uc.key = clause_key(uc.clause);
                    for (size_t p = 0; p < pool_.size(); ++p) {
                        bool hit = uc.head == pool_[p];
                        for (Sym b : uc.body) hit = hit || b == pool_[p];
                        if (hit) uc.inv_mask |= 1u << p;
                    }
                    universe_.push_back(std::move(uc));
                    return universe_.size() <= kUniverseCap;
                }
                const auto& cands =
                    idx == r.head.so_var ? heads : bodies;
                for (Sym s : cands) {
                    if (sigs_.arity_of(s) != 2) continue;
                    m.bind[static_cast<size_t>(idx)] = s;
                    if (eval_constraint_partial(r.constraint, m, sigs_) != Tri::Unsat)
                        if (!assign(idx + 1)) return false;
                    m.bind[static_cast<size_t>(idx)] = std::nullopt;
                }
                return true;
            };
            if (!assign(0)) return false;
        }
        for (size_t u = 0; u < universe_.size(); ++u)
            sigidx_[usig(universe_[u].rule, universe_[u].head, universe_[u].body)] =
                static_cast<int>(u);
        for (size_t u = 0; u < universe_.size(); ++u) {
            Sym h = universe_[u].head;
            if (!pidx_.count(h.id())) {
                pidx_.emplace(h.id(), static_cast<int>(hpreds_.size()));
                hpreds_.push_back(h);
            }
            byhead_[h.id()].push_back(static_cast<int>(u));
        }
        return !universe_.empty();
    }

    int cell(int i, int j) const { return i * (n_ + 1) + j; }

    const Rows* rows_of(Sym p, const std::vector<Rows>& deriv) const {
        auto hit = pidx_.find(p.id());
        if (hit != pidx_.end()) return &deriv[static_cast<size_t>(hit->second)];
        auto bit = bg_rows_.find(p.id());
        return bit == bg_rows_.end() ? nullptr : &bit->second;
    }

    // out[i] = union of b[m] over every m reachable from i through a.
    void compose(const Rows& a, const Rows& b, Rows& out) const {
        for (int i = 0; i <= n_; ++i) {
            uint64_t bits = a[static_cast<size_t>(i)], acc = 0;
            while (bits) {
                acc |= b[static_cast<size_t>(std::countr_zero(bits))];
                bits &= bits - 1;
            }
            out[static_cast<size_t>(i)] = acc;
        }
    }

    // Least fixpoint of the span relations under the given clauses; true iff
    // the root predicate derives the whole example. Pairwise compositions
    // repeat across clauses within a round, so they are cached per round (a
    // stale entry only delays a derivation to the next round). When ranks are
    // requested, each newly derived span records a global tick, giving every
    // span a justification whose sub-spans all carry strictly smaller ranks.
    bool fixpoint(const std::vector<int>& clauses, std::vector<Rows>& deriv,
                  std::vector<std::vector<int>>* ranks) {
        for (auto& r : deriv) std::fill(r.begin(), r.end(), 0);
        if (ranks)
            for (auto& r : *ranks) std::fill(r.begin(), r.end(), 0);
        int tick = 0;
        std::unordered_map<uint64_t, Rows> cache;
        Rows tmp(static_cast<size_t>(n_ + 1), 0);
        bool changed = true;
        while (changed) {
            changed = false;
            cache.clear();
            for (int u : clauses) {
                ++steps_;
                const UClause& uc = universe_[static_cast<size_t>(u)];
                const Rows* res = body_rows(uc, deriv, cache, tmp);
                if (!res) continue;
                auto& hr = deriv[static_cast<size_t>(pidx_.at(uc.head.id()))];
                for (int i = 0; i <= n_; ++i) {
                    uint64_t add = (*res)[static_cast<size_t>(i)] & ~hr[static_cast<size_t>(i)];
                    if (!add) continue;
                    hr[static_cast<size_t>(i)] |= add;
                    changed = true;
                    if (ranks) {
                        auto& rr = (*ranks)[static_cast<size_t>(pidx_.at(uc.head.id()))];
                        ++tick;
                        while (add) {
                            int j = std::countr_zero(add);
                            rr[static_cast<size_t>(cell(i, j))] = tick;
                            add &= add - 1;
                        }
                    }
                }
            }
        }
        return (deriv[static_cast<size_t>(root_)][0] >> n_) & 1;
    }

    const Rows* body_rows(const UClause& uc, const std::vector<Rows>& deriv,
                          std::unordered_map<uint64_t, Rows>& cache, Rows& tmp) const {
        const Rows* acc = rows_of(uc.body[0], deriv);
        if (!acc) return nullptr;
        uint64_t key = static_cast<uint64_t>(uc.body[0].id());
        for (size_t b = 1; b < uc.body.size(); ++b) {
            const Rows* next = rows_of(uc.body[b], deriv);
            if (!next) return nullptr;
            key = key * 1000003u + static_cast<uint64_t>(uc.body[b].id()) + 1;
            auto it = cache.find(key);
            if (it == cache.end()) {
                compose(*acc, *next, tmp);
                it = cache.emplace(key, tmp).first;
            }
            acc = &it->second;
        }
        return acc;
    }

    bool span(Sym p, int i, int j, int rank_cap) const {
        auto hit = pidx_.find(p.id());
        if (hit == pidx_.end()) {
            auto bit = bg_rows_.find(p.id());
            return bit != bg_rows_.end() &&
                   ((bit->second[static_cast<size_t>(i)] >> j) & 1);
        }
        return ((deriv_[static_cast<size_t>(hit->second)][static_cast<size_t>(i)] >> j) & 1) &&
               rank_[static_cast<size_t>(hit->second)][static_cast<size_t>(cell(i, j))] < rank_cap;
    }

    bool pick_body(const std::vector<Sym>& body, size_t idx, int i, int j,
                   int rank_cap, std::vector<std::pair<Sym, std::pair<int, int>>>& kids) const {
        if (idx + 1 == body.size()) {
            if (!span(body[idx], i, j, rank_cap)) return false;
            kids.push_back({body[idx], {i, j}});
            return true;
        }
        for (int m = i; m <= j; ++m) {
            if (!span(body[idx], i, m, rank_cap)) continue;
            kids.push_back({body[idx], {i, m}});
            if (pick_body(body, idx + 1, m, j, rank_cap, kids)) return true;
            kids.pop_back();
        }
        return false;
    }

    // Clauses of one derivation of the full example under the unbanned
    // universe. Descending ranks keep the walk well founded even through
    // unit-style cycles between nonterminals.
    std::vector<int> extract_support() {
        std::vector<int> support;
        std::unordered_set<int> in_support, visited;
        std::vector<std::pair<int, std::pair<int, int>>> todo{{root_, {0, n_}}};
        while (!todo.empty()) {
            auto [p, ij] = todo.back();
            todo.pop_back();
            int key = p * (n_ + 1) * (n_ + 1) + cell(ij.first, ij.second);
            if (!visited.insert(key).second) continue;
            int rcap = rank_[static_cast<size_t>(p)][static_cast<size_t>(cell(ij.first, ij.second))];
            for (int u : byhead_.at(hpreds_[static_cast<size_t>(p)].id())) {
                if (banned_[static_cast<size_t>(u)]) continue;
                const UClause& uc = universe_[static_cast<size_t>(u)];
                std::vector<std::pair<Sym, std::pair<int, int>>> kids;
                if (!pick_body(uc.body, 0, ij.first, ij.second, rcap, kids)) continue;
                if (in_support.insert(u).second) support.push_back(u);
                for (auto& [cp, cij] : kids) {
                    auto hit = pidx_.find(cp.id());
                    if (hit != pidx_.end()) todo.push_back({hit->second, cij});
                }
                break;
            }
        }
        std::sort(support.begin(), support.end());
        return support;
    }

    // Greedy shrink to a minimal covering subset.
    std::vector<int> minimise(std::vector<int> d) {
        for (size_t idx = 0; idx < d.size();) {
            std::vector<int> trial;
            trial.reserve(d.size() - 1);
            for (size_t k = 0; k < d.size(); ++k)
                if (k != idx) trial.push_back(d[k]);
            if (fixpoint(trial, scratch_, nullptr))
                d = std::move(trial);
            else
                ++idx;
        }
        return d;
    }

    // Any not-yet-found minimal covering set avoids at least one clause of
    // each found one, so it survives some ban set that hits all of them. The
    // search walks those ban sets; at each leaf the remaining universe still
    // covers the example and contains no found set, so shrinking it yields a
    // genuinely new minimal set. Branches that stop covering are pruned, and
    // the global found list means no minimal set is ever derived twice.
    void hs_search(size_t idx) {
        ++nodes_;
        if (steps_ > cfg_.max_steps || out_.size() >= cfg_.max_hypotheses) {
            overflow_ = true;
            return;
        }
        std::vector<int> all;
        all.reserve(universe_.size());
        for (size_t u = 0; u < universe_.size(); ++u)
            if (!banned_[u]) all.push_back(static_cast<int>(u));
        if (!fixpoint(all, deriv_, &rank_)) return;
        auto hit = [&](const std::vector<int>& m) {
            for (int c : m)
                if (banned_[static_cast<size_t>(c)]) return true;
            return false;
        };
        while (idx < found_.size() && hit(found_[idx])) ++idx;
        if (idx == found_.size()) {
            std::vector<int> m = minimise(extract_support());
            if (static_cast<int>(m.size()) <= cfg_.l) emit(m);
            found_.push_back(std::move(m));
        }
        const std::vector<int> mset = found_[idx];  // found_ grows in recursion
        for (int c : mset) {
            banned_[static_cast<size_t>(c)] = 1;
            hs_search(idx + 1);
            banned_[static_cast<size_t>(c)] = 0;
            if (overflow_) break;
        }
    }

    // True when the unbanned clauses cover every positive; fills usup with the
    // union of one derivation support per positive; spans, when asked for,
    // totals the derivable cells across all positives — a measure of how
    // unspecific the clause set is.
    bool joint_good(std::vector<int>* usup, long* spans = nullptr) {
        std::vector<int> all;
        all.reserve(universe_.size());
        for (size_t u = 0; u < universe_.size(); ++u)
            if (!banned_[u]) all.push_back(static_cast<int>(u));
        std::unordered_set<int> merged;
        if (spans) *spans = 0;
        for (const auto& ex : exs_) {
            set_ctx(ex);
            if (!fixpoint(all, deriv_, usup ? &rank_ : nullptr)) return false;
            if (usup)
                for (int u : extract_support()) merged.insert(u);
            if (spans)
                for (const auto& rows : deriv_)
                    for (uint64_t r : rows) *spans += std::popcount(r);
        }
        if (usup) {
            usup->assign(merged.begin(), merged.end());
            std::sort(usup->begin(), usup->end());
        }
        return true;
    }

    static std::string usig(const Metarule* rule, Sym head,
                            const std::vector<Sym>& body) {
        std::string sig = std::to_string(reinterpret_cast<uintptr_t>(rule));
        sig += '|';
        sig += std::to_string(head.id());
        for (Sym b : body) {
            sig += ',';
            sig += std::to_string(b.id());
        }
        return sig;
    }

    // Canonical representative of a clause set under renaming of the invented
    // symbols: the used symbols are mapped onto a prefix of the pool in every
    // possible order and the lexicographically least index vector wins. This
    // collapses the renaming symmetry, which would otherwise multiply the
    // search space by the number of permutations.
    std::vector<int> canon(std::vector<int> m) {
        std::sort(m.begin(), m.end());
        unsigned mask = 0;
        for (int c : m) mask |= universe_[static_cast<size_t>(c)].inv_mask;
        if (!mask) return m;
        std::vector<size_t> used;
        for (size_t p = 0; p < pool_.size(); ++p)
            if (mask >> p & 1) used.push_back(p);
        std::vector<size_t> slot(used.size());
        for (size_t i = 0; i < slot.size(); ++i) slot[i] = i;
        std::vector<int> best;
        do {
            std::unordered_map<uint32_t, Sym> ren;
            for (size_t i = 0; i < used.size(); ++i)
                ren.emplace(pool_[used[i]].id(), pool_[slot[i]]);
            auto map_sym = [&](Sym x) {
                auto it = ren.find(x.id());
                return it == ren.end() ? x : it->second;
            };
            std::vector<int> cand;
            bool ok = true;
            for (int c : m) {
                const UClause& uc = universe_[static_cast<size_t>(c)];
                std::vector<Sym> body;
                for (Sym b : uc.body) body.push_back(map_sym(b));
                auto it = sigidx_.find(usig(uc.rule, map_sym(uc.head), body));
                if (it == sigidx_.end()) { ok = false; break; }
                cand.push_back(it->second);
            }
            if (!ok) continue;
            std::sort(cand.begin(), cand.end());
            if (best.empty() || cand < best) best = std::move(cand);
        } while (std::next_permutation(slot.begin(), slot.end()));
        return best.empty() ? m : best;
    }

    // Shrink to a minimal joint cover. Clauses that fire most over the probe
    // words go first, so the descent strips the over-general workhorses and
    // lands on a specific cover; a single junk-ordered pass is enough because
    // a clause essential at its turn stays essential as the set shrinks.
    std::vector<int> joint_minimise(std::vector<int> d) {
        std::vector<char> save = banned_;
        std::vector<int> order = d;
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return junk_[static_cast<size_t>(a)] > junk_[static_cast<size_t>(b)];
        });
        for (int c : order) {
            banned_.assign(universe_.size(), 1);
            for (int x : d)
                if (x != c) banned_[static_cast<size_t>(x)] = 0;
            if (joint_good(nullptr))
                d.erase(std::find(d.begin(), d.end(), c));
        }
        banned_ = save;
        return d;
    }

    // Which probe words the clause set accepts: a direct reading of how
    // over-general the induced language is. The probe words are fixed
    // pseudo-random strings over the terminal alphabet, so the score is
    // deterministic and independent of the sample.
    uint64_t canary_mask(const std::vector<int>& m) {
        std::vector<char> save = banned_;
        banned_.assign(universe_.size(), 1);
        for (int c : m) banned_[static_cast<size_t>(c)] = 0;
        uint64_t mask = 0;
        for (size_t x = 0; x < canaries_.size(); ++x) {
            set_ctx(canaries_[x]);
            if (fixpoint(m, deriv_, nullptr)) mask |= 1ull << x;
        }
        banned_ = save;
        return mask;
    }

    // Remove clauses until the probe word x is underivable while the sample
    // stays covered, cutting one derivation support at a time, junkiest
    // cuttable clause first. False when x cannot be rejected that way; the
    // caller restores banned_ in that case. Operates on banned_ in place.
    bool reject_one(int x, std::minstd_rand& rng, bool jitter) {
        const int max_iter = static_cast<int>(universe_.size()) + 8;
        for (int iter = 0; iter < max_iter; ++iter) {
            std::vector<int> live;
            live.reserve(universe_.size());
            for (size_t u = 0; u < universe_.size(); ++u)
                if (!banned_[u]) live.push_back(static_cast<int>(u));
            set_ctx(canaries_[static_cast<size_t>(x)]);
            if (!fixpoint(live, deriv_, &rank_)) return true;
            std::vector<int> cut = extract_support();
            std::stable_sort(cut.begin(), cut.end(), [&](int a, int b) {
                return junk_[static_cast<size_t>(a)] > junk_[static_cast<size_t>(b)];
            });
            if (jitter && cut.size() > 1 && rng() % 2)
                std::swap(cut[0], cut[1]);
            bool done = false;
            for (int c : cut) {
                banned_[static_cast<size_t>(c)] = 1;
                if (joint_good(nullptr)) { done = true; break; }
                banned_[static_cast<size_t>(c)] = 0;
            }
            if (!done) return false;
        }
        return false;
    }

    void make_canaries() {
        canaries_.clear();
        std::vector<Sym> alphabet;
        for (const auto& [pred, chs] : chunks_)
            for (const auto& chunk : chs)
                if (chunk.size() == 1 &&
                    std::find(alphabet.begin(), alphabet.end(), chunk[0]) ==
                        alphabet.end())
                    alphabet.push_back(chunk[0]);
        if (alphabet.empty()) return;
        std::sort(alphabet.begin(), alphabet.end(),
                  [](Sym a, Sym b) { return a.str() < b.str(); });
        std::minstd_rand rng(12345);
        std::set<std::string> seen;
        for (int len = 1; len <= 12; ++len)
            for (int rep = 0; rep < 4; ++rep) {
                std::vector<Sym> w;
                std::string sig;
                for (int i = 0; i < len; ++i) {
                    w.push_back(alphabet[rng() % alphabet.size()]);
                    sig += w.back().str();
                    sig += ' ';
                }
                if (!seen.insert(sig).second) continue;
                ExCtx c = make_ctx(std::move(w));
                c.root = exs_[0].root;
                canaries_.push_back(std::move(c));
            }
        junk_.assign(universe_.size(), 0);
        std::vector<int> all;
        all.reserve(universe_.size());
        for (size_t u = 0; u < universe_.size(); ++u) all.push_back(static_cast<int>(u));
        for (const auto& ex : canaries_) {
            set_ctx(ex);
            fixpoint(all, deriv_, nullptr);
            std::unordered_map<uint64_t, Rows> cache;
            Rows tmp(static_cast<size_t>(n_ + 1), 0);
            for (size_t u = 0; u < universe_.size(); ++u) {
                const Rows* r = body_rows(universe_[u], deriv_, cache, tmp);
                if (!r) continue;
                for (uint64_t row : *r) junk_[u] += std::popcount(row);
            }
        }
    }

    long joint_spans(const std::vector<int>& m) {
        std::vector<char> save = banned_;
        banned_.assign(universe_.size(), 1);
        for (int c : m) banned_[static_cast<size_t>(c)] = 0;
        long spans = 0;
        joint_good(nullptr, &spans);
        banned_ = save;
        return spans;
    }

    // A joint cover is emitted only when one refutation justifies the whole
    // set: some positive must have a derivation that uses every clause in it.
    void process_joint(const std::vector<int>& m) {
        if (static_cast<int>(m.size()) > cfg_.l || m.size() > 63) return;
        std::vector<char> save = banned_;
        banned_.assign(universe_.size(), 1);
        for (int c : m) banned_[static_cast<size_t>(c)] = 0;
        for (const auto& ex : exs_) {
            set_ctx(ex);
            if (!fixpoint(m, deriv_, nullptr)) continue;
            long budget = 200000;
            std::unordered_set<long> path;
            std::vector<std::pair<Sym, std::pair<int, int>>> goals{
                {hpreds_[static_cast<size_t>(root_)], {0, n_}}};
            if (aud_solve(m, goals, 0, budget, path)) {
                emit(m);
                break;
            }
        }
        banned_ = save;
    }

    // Backtracking proof of the goal list under exactly the clauses of jset,
    // succeeding only when every clause has been used. Unused clauses are
    // preferred at each choice point; the on-path cell set breaks unit cycles.
    bool aud_solve(const std::vector<int>& jset,
                   std::vector<std::pair<Sym, std::pair<int, int>>>& goals,
                   uint64_t used, long& budget, std::unordered_set<long>& path) {
        if (--budget < 0) return false;
        if (goals.empty()) return used == (1ull << jset.size()) - 1;
        auto [p, ij] = goals.back();
        auto hit = pidx_.find(p.id());
        if (hit == pidx_.end()) {
            auto bit = bg_rows_.find(p.id());
            if (bit == bg_rows_.end() ||
                !((bit->second[static_cast<size_t>(ij.first)] >> ij.second) & 1))
                return false;
            goals.pop_back();
            bool ok = aud_solve(jset, goals, used, budget, path);
            goals.push_back({p, ij});
            return ok;
        }
        long key = static_cast<long>(hit->second) * (n_ + 1) * (n_ + 1) +
                   cell(ij.first, ij.second);
        if (!path.insert(key).second) return false;
        goals.pop_back();
        bool ok = false;
        for (int pass = 0; pass < 2 && !ok; ++pass) {
            for (size_t ji = 0; ji < jset.size() && !ok; ++ji) {
                bool fresh = !(used >> ji & 1);
                if ((pass == 0) != fresh) continue;
                const UClause& uc = universe_[static_cast<size_t>(jset[ji])];
                if (uc.head != p) continue;
                ok = aud_splits(jset, uc.body, 0, ij.first, ij.second, goals,
                                used | (1ull << ji), budget, path);
            }
        }
        goals.push_back({p, ij});
        path.erase(key);
        return ok;
    }

    bool aud_splits(const std::vector<int>& jset, const std::vector<Sym>& body,
                    size_t idx, int i, int j,
                    std::vector<std::pair<Sym, std::pair<int, int>>>& goals,
                    uint64_t used, long& budget, std::unordered_set<long>& path) {
        if (idx + 1 == body.size()) {
            if (!span(body[idx], i, j, kNoRankCap)) return false;
            goals.push_back({body[idx], {i, j}});
            bool ok = aud_solve(jset, goals, used, budget, path);
            goals.pop_back();
            return ok;
        }
        for (int m = i; m <= j; ++m) {
            if (!span(body[idx], i, m, kNoRankCap)) continue;
            goals.push_back({body[idx], {i, m}});
            bool ok = aud_splits(jset, body, idx + 1, m, j, goals, used, budget, path);
            goals.pop_back();
            if (ok) return true;
        }
        return false;
    }

    // Best-first walk over the minimal joint covers. A child bans one clause
    // of its parent cover and re-derives; the frontier is ordered by how few
    // spans a cover derives across the sample, so the walk heads for the most
    // specific consistent grammars — over-general covers derive everything
    // and sink in the queue. Specificity is what the labelling stage needs:
    // an over-general cover is killable by generated negatives, while a cover
    // too specific for the sample cannot arise here at all.
    // Counterexample-guided specialisation. Each pass walks the probe words
    // in a deterministic order and tries to reject every one of them; a
    // rejection that cannot be had without losing the sample is rolled back,
    // so in-language probe words survive and out-of-language ones carve the
    // clause set down towards the most specific grammar that still explains
    // the sample. Covers are emitted at checkpoints along the way, giving the
    // labelling stage a generality gradient to choose from. Several shuffled
    // orders diversify the endpoints.
    void joint_search() {
        auto emit_current = [&]() {
            std::vector<int> usup;
            if (!joint_good(&usup)) return;
            process_joint(canon(joint_minimise(usup)));
        };
        banned_.assign(universe_.size(), 0);
        emit_current();
        const int kPasses = 4;
        for (int pass = 0; pass < kPasses; ++pass) {
            std::minstd_rand rng(static_cast<unsigned>(100 + pass));
            banned_.assign(universe_.size(), 0);
            bool moved = true;
            for (int sweep = 0; sweep < 3 && moved; ++sweep) {
                moved = false;
                for (size_t xi = 0; xi < canaries_.size(); ++xi) {
                    int x = static_cast<int>(xi);
                    if (steps_ > cfg_.max_steps ||
                        out_.size() >= cfg_.max_hypotheses) {
                        overflow_ = true;
                        return;
                    }
                    std::vector<char> snap = banned_;
                    set_ctx(canaries_[xi]);
                    {
                        std::vector<int> live;
                        live.reserve(universe_.size());
                        for (size_t u = 0; u < universe_.size(); ++u)
                            if (!banned_[u]) live.push_back(static_cast<int>(u));
                        if (!fixpoint(live, deriv_, nullptr)) continue;  // already rejected
                    }
                    const char* dbg = getenv("JDBG2");
                    auto word = [&]() {
                        std::string w;
                        for (Sym sy : canaries_[xi].w) w += sy.str();
                        return w;
                    };
                    if (!reject_one(x, rng, pass > 0)) {
                        if (dbg) fprintf(stderr, "[p%d] %s infeasible\n", pass, word().c_str());
                        banned_ = snap;
                        continue;
                    }
                    // A rejection only sticks while some cover within the
                    // clause budget survives it; overshooting into languages
                    // only a large grammar can express is rolled back.
                    std::vector<int> usup;
                    if (!joint_good(&usup)) {
                        if (dbg) fprintf(stderr, "[p%d] %s lost-sample\n", pass, word().c_str());
                        banned_ = snap;
                        continue;
                    }
                    std::vector<int> m = joint_minimise(usup);
                    if (static_cast<int>(m.size()) > cfg_.l) {
                        // The support union can land on an awkward minimal
                        // cover; before giving up, minimise from everything
                        // still live, which cannot miss a small cover region.
                        std::vector<int> live;
                        live.reserve(universe_.size());
                        for (size_t u = 0; u < universe_.size(); ++u)
                            if (!banned_[u]) live.push_back(static_cast<int>(u));
                        m = joint_minimise(live);
                    }
                    if (static_cast<int>(m.size()) > cfg_.l) {
                        if (dbg) fprintf(stderr, "[p%d] %s lgate(%zu)\n", pass, word().c_str(), m.size());
                        banned_ = snap;
                        continue;
                    }
                    if (dbg) fprintf(stderr, "[p%d] %s rejected size=%zu\n", pass, word().c_str(), m.size());
                    moved = true;
                    process_joint(canon(std::move(m)));
                }
            }
            {
                // Final descent: strip the whole remaining live set junk-first.
                // Every stuck rejection survives any removal, so this lands on
                // a specific kernel inside the already-specialised space.
                std::vector<int> live;
                live.reserve(universe_.size());
                for (size_t u = 0; u < universe_.size(); ++u)
                    if (!banned_[u]) live.push_back(static_cast<int>(u));
                std::vector<int> kern = joint_minimise(live);
                if (static_cast<int>(kern.size()) <= cfg_.l)
                    process_joint(canon(kern));
                if (getenv("JDBG2")) {
                    fprintf(stderr, "[p%d kernel] size=%zu acc=%d\n", pass,
                            kern.size(), std::popcount(canary_mask(kern)));
                    for (int c : kern)
                        fprintf(stderr, "   %s\n", universe_[(size_t)c].key.c_str());
                }
            }
            emit_current();
            if (getenv("JDBG")) {
                std::vector<int> usup;
                if (joint_good(&usup)) {
                    std::vector<int> m = canon(joint_minimise(usup));
                    fprintf(stderr, "[pass %d] size=%zu acc=%d steps=%lld out=%zu\n",
                            pass, m.size(), std::popcount(canary_mask(m)),
                            static_cast<long long>(steps_), out_.size());
                    for (int c : m)
                        fprintf(stderr, "   %s\n", universe_[(size_t)c].key.c_str());
                }
            }
        }
    }

    void emit(const std::vector<int>& m) {
        // Invented symbols must enter in pool order, like the lazy
        // introduction in the resolution search.
        unsigned mask = 0;
        for (int u : m) mask |= universe_[static_cast<size_t>(u)].inv_mask;
        if (mask & (mask + 1)) return;  // not of the form 2^k - 1
        Hypothesis h;
        std::map<std::string, Clause> clauses;
        for (int u : m) {
            clauses.emplace(universe_[static_cast<size_t>(u)].key,
                            universe_[static_cast<size_t>(u)].clause);
            h.metasubs.push_back(Metasub{universe_[static_cast<size_t>(u)].rule,
                                         universe_[static_cast<size_t>(u)].bind});
        }
        if (clauses.empty()) return;
        std::string key;
        for (auto& [k, c] : clauses) {
            key += k;
            key += '\n';
            h.clauses.push_back(std::move(c));
        }
        h.key = key;
        out_.emplace(std::move(key), std::move(h));
    }

    const SignatureSet& sigs_;
    std::vector<Sym> pool_;
    InducerConfig cfg_;
    std::map<std::string, Hypothesis>& out_;

    bool eligible_ = false;
    std::vector<UClause> universe_;
    std::unordered_map<int, std::vector<int>> byhead_;
    std::unordered_map<int, int> pidx_;
    std::vector<Sym> hpreds_;
    std::unordered_map<int, std::vector<std::vector<Sym>>> chunks_;

    std::vector<Sym> w_;
    int n_ = 0;
    int root_ = 0;
    std::unordered_map<int, Rows> bg_rows_;
    std::vector<Rows> deriv_, scratch_;
    std::vector<std::vector<int>> rank_;
    std::vector<char> banned_;
    std::vector<std::vector<int>> found_;
    std::unordered_map<std::string, int> sigidx_;
    std::vector<ExCtx> exs_, canaries_;
    std::vector<long> junk_;
    long steps_ = 0;
    long nodes_ = 0;
    bool overflow_ = false;
};

}  // namespace

TopProgram generalise(const Program& background, const Sonf& sonf,
                      const std::vector<Atom>& positives, const InducerConfig& cfg,
                      SignatureSet& sigs, std::vector<std::string>* diagnostics) {
    if (positives.empty())
        throw ConfigError("generalise requires at least one labelled positive example");
    for (const auto& e : positives) {
        if (!sigs.is_target(e.pred))
            throw ConfigError("example predicate is not the target: " + e.pred.str());
        for (const auto& arg : e.args)
            if (!term_ground(arg))
                throw ConfigError("non-ground example: " + to_string(e));
    }

    Sym target = positives.front().pred;
    int arity = static_cast<int>(positives.front().args.size());
    std::vector<Sym> pool;
    for (int i = 1; i <= cfg.max_invented; ++i) {
        Sym v = Sym::intern(target.str() + "_" + std::to_string(i));
        if (!sigs.contains(v)) sigs.add(v, arity, Role::Invented);
        pool.push_back(v);
    }

    std::map<std::string, Hypothesis> found;
    bool overflow = false;
    ChartTPC chart(background, sonf, sigs, pool, cfg, found);
    if (chart.eligible()) {
        chart.begin(positives);
        overflow = chart.overflowed();
    }
    for (const auto& e : positives) {
        if (getenv("JONLY")) break;
        if (chart.eligible() && chart.run(e)) {
            overflow = overflow || chart.overflowed();
            continue;
        }
        MetaSearch search(background, sonf, sigs, pool, cfg, found);
        search.prove_example(e);
        overflow = overflow || search.overflowed();
    }
    if (overflow && diagnostics)
        diagnostics->push_back("generalise: search cap reached; hypothesis set may be incomplete");

    TopProgram tp;
    for (auto& [k, h] : found) tp.hypotheses.push_back(std::move(h));
    return tp;
}

Program hypothesis_program(const Hypothesis& h, int depth_coeff) {
    Program p;
    p.depth_coeff = depth_coeff;
    p.clauses = h.clauses;
    return p;
}

bool covered(const Hypothesis& h, const Program& background, const Atom& e) {
    Program p = merge_programs(background, hypothesis_program(h, background.depth_coeff));
    return prove(e, p).proved;
}

}  // namespace poker
