#pragma once

#include <iosfwd>

#include "poker/bench.hpp"
#include "poker/learner.hpp"

namespace poker {

struct ExperimentConfig {
    std::string benchmark;         // a language or L-system name
    std::string system = "poker";  // poker | louise
    std::vector<int> labelled_counts{3};
    std::vector<int> k_values{0, 10, 50, 100};
    int repetitions = 30;
    int test_pos = 50;
    int test_neg = 50;
    int train_max_len = 10;   // training-sample length cap (CFL) / source cap (L-system)
    int test_max_len = 14;
    int max_gen_len = 18;
    int l = 3;
    int max_invented = 1;
    int depth_coeff = 4;
    int probe_cap = 512;
    int gen_eval_strings = 20;
    uint64_t seed = 0;
};

struct MetricsRow {
    std::string benchmark;
    std::string system;
    int labelled_count = 0;
    int k = 0;
    int repetition = 0;
    std::optional<double> tpr, tnr, generative_accuracy;
    int hypothesis_size = 0;
    std::optional<double> labelling_tpr, labelling_tnr;
    long runtime_ms = 0;
    std::vector<std::string> flags;  // undefined-rate and error markers
};

struct SummaryCell {
    std::string benchmark;
    std::string system;
    int labelled_count = 0;
    int k = 0;
    int n = 0;
    // mean and standard error per metric, over defined values only
    std::optional<double> tpr_mean, tpr_stderr;
    std::optional<double> tnr_mean, tnr_stderr;
    std::optional<double> generative_accuracy_mean, generative_accuracy_stderr;
    std::optional<double> hypothesis_size_mean, hypothesis_size_stderr;
    std::optional<double> labelling_tpr_mean, labelling_tpr_stderr;
    std::optional<double> labelling_tnr_mean, labelling_tnr_stderr;
};

struct ExperimentResult {
    std::vector<MetricsRow> rows;
    std::vector<SummaryCell> summary;
};

struct RatePair {
    std::optional<double> tpr, tnr;
    std::vector<std::string> flags;
};

// Acceptance rates of a learned program (with its background theory) against
// disjoint ground test sets. Empty sides give an undefined rate plus a flag.
RatePair eval_acceptor(const Program& program, const Program& background,
                       const std::vector<Atom>& test_pos,
                       const std::vector<Atom>& test_neg);

// Fraction of labelled positives the ground truth accepts / labelled
// negatives it rejects.
RatePair eval_labelling(const Labelling& labelling,
                        const std::function<bool(const Atom&)>& truth);

// Fraction of the first n enumerated strings the oracle accepts.
double eval_generator(const Program& program, const Program& background,
                      const LanguageOracle& o, int n_strings, int max_len,
                      const std::vector<Sym>& alphabet,
                      std::vector<std::string>* diagnostics = nullptr);

// Fraction of sampled source strings whose first derived rewrite equals the
// L-system's one-step rewrite.
double eval_generator_lsystem(const Program& program, const Program& background,
                              const LSystem& ls, const std::vector<Atom>& sources,
                              std::vector<std::string>* diagnostics = nullptr);

// Benchmark wiring shared with the CLI and tests.
bool is_lsystem_benchmark(const std::string& name);
const Sonf& benchmark_sonf(const std::string& name);
std::function<bool(const Atom&)> benchmark_truth(const std::string& name);

// One repetition; exposed so tests can probe single cells cheaply.
MetricsRow run_repetition(const ExperimentConfig& cfg, int labelled_count, int k,
                          int repetition);

// Full sweep: labelled_counts x k_values x repetitions, reproducible per
// seed; per-repetition failures become flagged rows. Rows stream to csv_out
// as produced when given.
ExperimentResult run(const ExperimentConfig& cfg, std::ostream* csv_out = nullptr);

std::string csv_header();
std::string csv_row(const MetricsRow& row);
std::string summary_csv(const std::vector<SummaryCell>& cells);

ExperimentConfig parse_expcfg(const std::string& text);  // key=value lines

// Spearman rank correlation with average ranks for ties; 0 for degenerate input.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0);

}  // namespace poker
