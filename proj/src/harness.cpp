#include "poker/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace poker {

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
    auto split = [](uint64_t& s) {
        s += 0x9e3779b97f4a7c15ULL;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    uint64_t s = seed;
    uint64_t out = split(s);
    s ^= a * 0xff51afd7ed558ccdULL;
    out ^= split(s);
    s ^= b * 0xc4ceb9fe1a85ec53ULL;
    out ^= split(s);
    s ^= c * 0x2545f4914f6cdd1dULL;
    out ^= split(s);
    return out;
}

RatePair eval_acceptor(const Program& program, const Program& background,
                       const std::vector<Atom>& test_pos,
                       const std::vector<Atom>& test_neg) {
    Program merged = merge_programs(background, program);
    RatePair out;
    if (test_pos.empty()) {
        out.flags.push_back("tpr_undefined");
    } else {
        int acc = 0;
        for (const auto& e : test_pos) acc += prove(e, merged).proved ? 1 : 0;
        out.tpr = static_cast<double>(acc) / static_cast<double>(test_pos.size());
    }
    if (test_neg.empty()) {
        out.flags.push_back("tnr_undefined");
    } else {
        int rej = 0;
        for (const auto& e : test_neg) rej += prove(e, merged).proved ? 0 : 1;
        out.tnr = static_cast<double>(rej) / static_cast<double>(test_neg.size());
    }
    return out;
}

RatePair eval_labelling(const Labelling& labelling,
                        const std::function<bool(const Atom&)>& truth) {
    RatePair out;
    if (labelling.positives.empty()) {
        out.flags.push_back("labelling_tpr_undefined");
    } else {
        int acc = 0;
        for (const auto& e : labelling.positives) acc += truth(e) ? 1 : 0;
        out.tpr = static_cast<double>(acc) / static_cast<double>(labelling.positives.size());
    }
    if (labelling.negatives.empty()) {
        out.flags.push_back("labelling_tnr_undefined");
    } else {
        int rej = 0;
        for (const auto& e : labelling.negatives) rej += truth(e) ? 0 : 1;
        out.tnr = static_cast<double>(rej) / static_cast<double>(labelling.negatives.size());
    }
    return out;
}

double eval_generator(const Program& program, const Program& background,
                      const LanguageOracle& o, int n_strings, int max_len,
                      const std::vector<Sym>& alphabet,
                      std::vector<std::string>* diagnostics) {
    Program merged = merge_programs(background, program);
    Sym target = program.clauses.empty() ? Sym::intern("s") : program.clauses[0].head.pred;
    auto atoms = enumerate_atoms(merged, target, 2, n_strings, max_len, alphabet);
    if (atoms.empty()) {
        if (diagnostics) diagnostics->push_back("generator: program generates nothing");
        return 0.0;
    }
    int good = 0;
    for (const auto& a : atoms) {
        auto s = atom_input_string(a);
        good += (s && o.accepts(*s)) ? 1 : 0;
    }
    return static_cast<double>(good) / static_cast<double>(atoms.size());
}

double eval_generator_lsystem(const Program& program, const Program& background,
                              const LSystem& ls, const std::vector<Atom>& sources,
                              std::vector<std::string>* diagnostics) {
    if (sources.empty()) return 0.0;
    Program merged = merge_programs(background, program);
    if (program.clauses.empty()) {
        if (diagnostics) diagnostics->push_back("generator: program generates nothing");
        return 0.0;
    }
    Sym target = program.clauses[0].head.pred;
    int good = 0;
    for (const auto& src_atom : sources) {
        auto src = atom_input_string(src_atom);
        if (!src) continue;
        std::string expected = lsystem_step(ls, *src);
        Atom goal;
        goal.pred = target;
        std::vector<Sym> in;
        for (char c : *src) in.push_back(Sym::intern(std::string(1, c)));
        goal.args = {mk_string(in, mk_nil()), mk_nil(), mk_var(0), mk_nil()};
        int budget = merged.depth_coeff *
                     (static_cast<int>(src->size() + expected.size()) + 2);
        Solver solver(merged, budget);
        Bindings bs;
        std::optional<std::string> first_out;
        solver.run({goal}, bs, [&](const Bindings& sol) {
            Atom solved = apply_bindings(goal, sol);
            auto out = atom_output_string(solved);
            if (out) {
                first_out = *out;
                return true;  // first derivation only
            }
            return false;
        });
        good += (first_out && *first_out == expected) ? 1 : 0;
    }
    return static_cast<double>(good) / static_cast<double>(sources.size());
}

bool is_lsystem_benchmark(const std::string& name) {
    const auto& names = lsystem_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

const Sonf& benchmark_sonf(const std::string& name) {
    if (is_lsystem_benchmark(name)) return builtin_lnf();
    // Tri-Chain is needed for centre-embedding (palindrome) and to express
    // 1^n 0^m compactly. Elsewhere Identity + Chain are preferred: with only
    // binary bodies a clause consumes at most two terminals, so the clause
    // budget l keeps rote covers of individual training strings out of reach,
    // which is what lets labelling separate the sample from noise.
    if (name == "palindrome" || name == "anbm") return builtin_cgnf();
    return builtin_cgnf_no_trichain();
}

std::function<bool(const Atom&)> benchmark_truth(const std::string& name) {
    if (is_lsystem_benchmark(name)) {
        const LSystem& ls = lsystem(name);
        return [&ls](const Atom& a) {
            auto src = atom_input_string(a);
            auto dst = atom_output_string(a);
            return src && dst && lsystem_step(ls, *src) == *dst;
        };
    }
    const LanguageOracle& o = oracle(name);
    return [&o](const Atom& a) {
        auto s = atom_input_string(a);
        return s && o.accepts(*s);
    };
}

namespace {

// Deterministic wrong-output rewrite pairs for L-system acceptor testing.
std::vector<Atom> mutate_rewrites(const LSystem& ls, Sym target,
                                  const std::vector<Atom>& pairs, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Atom> out;
    for (const auto& a : pairs) {
        auto src = atom_input_string(a);
        if (!src) continue;
        std::string good = lsystem_step(ls, *src);
        std::string bad = good;
        for (int tries = 0; tries < 32 && bad == good; ++tries) {
            bad = good;
            switch (rng() % 3) {
                case 0:
                    if (!bad.empty()) {
                        size_t i = rng() % bad.size();
                        bad[i] = ls.alphabet[rng() % ls.alphabet.size()];
                    }
                    break;
                case 1:
                    if (!bad.empty()) bad.pop_back();
                    break;
                default:
                    bad += ls.alphabet[rng() % ls.alphabet.size()];
                    break;
            }
        }
        if (bad != good) out.push_back(rewrite_atom(target, *src, bad));
    }
    return out;
}

void merge_flags(MetricsRow& row, const std::vector<std::string>& flags) {
    for (const auto& f : flags) row.flags.push_back(f);
}

}  // namespace

MetricsRow run_repetition(const ExperimentConfig& cfg, int labelled_count, int k,
                          int repetition) {
    MetricsRow row;
    row.benchmark = cfg.benchmark;
    row.system = cfg.system;
    row.labelled_count = labelled_count;
    row.k = k;
    row.repetition = repetition;

    uint64_t base = mix_seed(cfg.seed, static_cast<uint64_t>(labelled_count),
                             static_cast<uint64_t>(k), static_cast<uint64_t>(repetition));
    Sym target = Sym::intern("s");
    bool lsys = is_lsystem_benchmark(cfg.benchmark);

    LearnProblem problem;
    problem.target = target;
    problem.target_arity = lsys ? 4 : 2;
    problem.sonf = &benchmark_sonf(cfg.benchmark);
    problem.params.k = k;
    problem.params.l = cfg.l;
    problem.params.max_gen_len = cfg.max_gen_len;
    problem.params.depth_coeff = cfg.depth_coeff;
    problem.params.max_invented = cfg.max_invented;
    problem.params.probe_cap = cfg.probe_cap;
    problem.sigs.add(target, problem.target_arity, Role::Target);

    std::vector<Atom> test_pos, test_neg;
    auto truth = benchmark_truth(cfg.benchmark);
    if (lsys) {
        const LSystem& ls = lsystem(cfg.benchmark);
        problem.background = background_lsystem(ls);
        problem.labelled = sample_rewrites(ls, target, labelled_count,
                                           cfg.train_max_len, mix_seed(base, 1));
        test_pos = sample_rewrites(ls, target, cfg.test_pos, cfg.train_max_len + 1,
                                   mix_seed(base, 2));
        test_neg = mutate_rewrites(ls, target, test_pos, mix_seed(base, 3));
        if (static_cast<int>(test_neg.size()) > cfg.test_neg)
            test_neg.resize(static_cast<size_t>(cfg.test_neg));
    } else {
        const LanguageOracle& o = oracle(cfg.benchmark);
        problem.background = background_bits();
        problem.labelled = sample_language(o, target, labelled_count,
                                           cfg.train_max_len, mix_seed(base, 1), true);
    }
    problem.background.depth_coeff = cfg.depth_coeff;
    register_background_roles(problem.background, problem.sigs);
    problem.alphabet = terminal_alphabet(problem.background);
    if (!lsys) {
        const LanguageOracle& o = oracle(cfg.benchmark);
        test_pos = sample_language(o, target, cfg.test_pos, cfg.test_max_len,
                                   mix_seed(base, 2), true);
        test_neg = sample_language(o, target, cfg.test_neg, cfg.test_max_len,
                                   mix_seed(base, 3), false);
    }

    auto t0 = std::chrono::steady_clock::now();
    LearnResult result =
        cfg.system == "louise" ? louise_baseline(problem) : learn(problem);
    auto t1 = std::chrono::steady_clock::now();
    row.runtime_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();

    RatePair acc = eval_acceptor(result.program, problem.background, test_pos, test_neg);
    row.tpr = acc.tpr;
    row.tnr = acc.tnr;
    merge_flags(row, acc.flags);

    RatePair lab = eval_labelling(result.labelling, truth);
    row.labelling_tpr = lab.tpr;
    row.labelling_tnr = lab.tnr;
    merge_flags(row, lab.flags);

    row.hypothesis_size = static_cast<int>(result.program.clauses.size());
    std::vector<std::string> gen_diag;
    if (lsys) {
        row.generative_accuracy = eval_generator_lsystem(
            result.program, problem.background, lsystem(cfg.benchmark), test_pos, &gen_diag);
    } else {
        row.generative_accuracy =
            eval_generator(result.program, problem.background, oracle(cfg.benchmark),
                           cfg.gen_eval_strings, cfg.max_gen_len, problem.alphabet,
                           &gen_diag);
    }
    merge_flags(row, gen_diag);
    return row;
}

namespace {

struct Acc {
    std::vector<double> vals;
    void add(const std::optional<double>& v) {
        if (v) vals.push_back(*v);
    }
    void finish(std::optional<double>& mean, std::optional<double>& stderr_out) const {
        if (vals.empty()) return;
        double m = std::accumulate(vals.begin(), vals.end(), 0.0) /
                   static_cast<double>(vals.size());
        mean = m;
        if (vals.size() > 1) {
            double ss = 0;
            for (double v : vals) ss += (v - m) * (v - m);
            double sd = std::sqrt(ss / static_cast<double>(vals.size() - 1));
            stderr_out = sd / std::sqrt(static_cast<double>(vals.size()));
        } else {
            stderr_out = 0.0;
        }
    }
};

std::string fmt(const std::optional<double>& v) {
    if (!v) return "";
    std::ostringstream os;
    os << *v;
    return os.str();
}

}  // namespace

ExperimentResult run(const ExperimentConfig& cfg, std::ostream* csv_out) {
    ExperimentResult res;
    std::vector<int> ks = cfg.k_values;
    if (cfg.system == "louise") ks = {0};  // the baseline never self-generates
    if (csv_out) *csv_out << csv_header() << "\n";
    for (int lc : cfg.labelled_counts) {
        for (int k : ks) {
            SummaryCell cell;
            cell.benchmark = cfg.benchmark;
            cell.system = cfg.system;
            cell.labelled_count = lc;
            cell.k = k;
            Acc tpr, tnr, gen, size, ltpr, ltnr;
            for (int rep = 0; rep < cfg.repetitions; ++rep) {
                MetricsRow row;
                try {
                    row = run_repetition(cfg, lc, k, rep);
                } catch (const std::exception& ex) {
                    row.benchmark = cfg.benchmark;
                    row.system = cfg.system;
                    row.labelled_count = lc;
                    row.k = k;
                    row.repetition = rep;
                    row.flags.push_back(std::string("error: ") + ex.what());
                }
                if (csv_out) *csv_out << csv_row(row) << "\n";
                bool errored = std::any_of(row.flags.begin(), row.flags.end(),
                                           [](const std::string& f) {
                                               return f.rfind("error:", 0) == 0;
                                           });
                if (!errored) {
                    tpr.add(row.tpr);
                    tnr.add(row.tnr);
                    gen.add(row.generative_accuracy);
                    size.add(static_cast<double>(row.hypothesis_size));
                    ltpr.add(row.labelling_tpr);
                    ltnr.add(row.labelling_tnr);
                    ++cell.n;
                }
                res.rows.push_back(std::move(row));
            }
            tpr.finish(cell.tpr_mean, cell.tpr_stderr);
            tnr.finish(cell.tnr_mean, cell.tnr_stderr);
            gen.finish(cell.generative_accuracy_mean, cell.generative_accuracy_stderr);
            size.finish(cell.hypothesis_size_mean, cell.hypothesis_size_stderr);
            ltpr.finish(cell.labelling_tpr_mean, cell.labelling_tpr_stderr);
            ltnr.finish(cell.labelling_tnr_mean, cell.labelling_tnr_stderr);
            res.summary.push_back(std::move(cell));
        }
    }
    return res;
}

std::string csv_header() {
    return "benchmark,system,labelled_count,k,repetition,tpr,tnr,"
           "generative_accuracy,hypothesis_size,labelling_tpr,labelling_tnr,"
           "runtime_ms,flags";
}

std::string csv_row(const MetricsRow& r) {
    std::ostringstream os;
    os << r.benchmark << ',' << r.system << ',' << r.labelled_count << ',' << r.k
       << ',' << r.repetition << ',' << fmt(r.tpr) << ',' << fmt(r.tnr) << ','
       << fmt(r.generative_accuracy) << ',' << r.hypothesis_size << ','
       << fmt(r.labelling_tpr) << ',' << fmt(r.labelling_tnr) << ','
       << r.runtime_ms << ',';
    for (size_t i = 0; i < r.flags.size(); ++i) os << (i ? ";" : "") << r.flags[i];
    return os.str();
}

std::string summary_csv(const std::vector<SummaryCell>& cells) {
    std::ostringstream os;
    os << "benchmark,system,labelled_count,k,n,tpr_mean,tpr_stderr,tnr_mean,"
          "tnr_stderr,generative_accuracy_mean,generative_accuracy_stderr,"
          "hypothesis_size_mean,hypothesis_size_stderr,labelling_tpr_mean,"
          "labelling_tpr_stderr,labelling_tnr_mean,labelling_tnr_stderr\n";
    for (const auto& c : cells) {
        os << c.benchmark << ',' << c.system << ',' << c.labelled_count << ','
           << c.k << ',' << c.n << ',' << fmt(c.tpr_mean) << ',' << fmt(c.tpr_stderr)
           << ',' << fmt(c.tnr_mean) << ',' << fmt(c.tnr_stderr) << ','
           << fmt(c.generative_accuracy_mean) << ','
           << fmt(c.generative_accuracy_stderr) << ',' << fmt(c.hypothesis_size_mean)
           << ',' << fmt(c.hypothesis_size_stderr) << ',' << fmt(c.labelling_tpr_mean)
           << ',' << fmt(c.labelling_tpr_stderr) << ',' << fmt(c.labelling_tnr_mean)
           << ',' << fmt(c.labelling_tnr_stderr) << '\n';
    }
    return os.str();
}

ExperimentConfig parse_expcfg(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto ints = [](const std::string& v) {
        std::vector<int> out;
        std::istringstream is(v);
        std::string item;
        while (std::getline(is, item, ',')) out.push_back(std::stoi(item));
        return out;
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto cut = line.find('%');
        if (cut != std::string::npos) line.resize(cut);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expcfg line " + std::to_string(lineno) +
                              ": expected key=value");
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        try {
            if (key == "benchmark") cfg.benchmark = val;
            else if (key == "system") cfg.system = val;
            else if (key == "labelled_counts") cfg.labelled_counts = ints(val);
            else if (key == "k_values") cfg.k_values = ints(val);
            else if (key == "repetitions") cfg.repetitions = std::stoi(val);
            else if (key == "test_pos") cfg.test_pos = std::stoi(val);
            else if (key == "test_neg") cfg.test_neg = std::stoi(val);
            else if (key == "train_max_len") cfg.train_max_len = std::stoi(val);
            else if (key == "test_max_len") cfg.test_max_len = std::stoi(val);
            else if (key == "max_gen_len") cfg.max_gen_len = std::stoi(val);
            else if (key == "l") cfg.l = std::stoi(val);
            else if (key == "max_invented") cfg.max_invented = std::stoi(val);
            else if (key == "depth_coeff") cfg.depth_coeff = std::stoi(val);
            else if (key == "probe_cap") cfg.probe_cap = std::stoi(val);
            else if (key == "gen_eval_strings") cfg.gen_eval_strings = std::stoi(val);
            else if (key == "seed") cfg.seed = std::stoull(val);
            else throw ConfigError("unknown key: " + key);
        } catch (const std::invalid_argument&) {
            throw ConfigError("expcfg line " + std::to_string(lineno) +
                              ": bad value for " + key);
        }
    }
    if (cfg.benchmark.empty()) throw ConfigError("expcfg: missing benchmark");
    if (cfg.repetitions < 1) throw ConfigError("expcfg: repetitions must be >= 1");
    return cfg;
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    size_t n = xs.size();
    if (n != ys.size() || n < 2) return 0.0;
    auto ranks = [n](const std::vector<double>& v) {
        std::vector<size_t> idx(n);
        std::iota(idx.begin(), idx.end(), size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](size_t a, size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        size_t i = 0;
        while (i < n) {
            size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (size_t t = i; t <= j; ++t) r[idx[t]] = avg;
            i = j + 1;
        }
        return r;
    };
    auto rx = ranks(xs), ry = ranks(ys);
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(n);
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(n);
    double num = 0, dx = 0, dy = 0;
    for (size_t i = 0; i < n; ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    if (dx == 0 || dy == 0) return 0.0;
    return num / std::sqrt(dx * dy);
}

}  // namespace poker
