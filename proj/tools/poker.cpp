#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "poker/harness.hpp"
#include "poker/spec.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw poker::ConfigError("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Overrides {
    std::optional<uint64_t> seed;
    std::optional<int> k, l, max_len, reps;
    bool unfold = false;
    std::string out_dir;
};

poker::ProblemSpec load_spec(const std::string& path, const Overrides& ov) {
    poker::ProblemSpec spec = poker::parse_spec(read_file(path));
    if (ov.seed) spec.seed = *ov.seed;
    if (ov.k) spec.params.k = *ov.k;
    if (ov.l) spec.params.l = *ov.l;
    if (ov.max_len) spec.params.max_gen_len = *ov.max_len;
    if (ov.unfold) spec.params.unfold_output = true;
    return spec;
}

void add_overrides(CLI::App* cmd, Overrides& ov, bool with_unfold = true) {
    cmd->add_option("--seed", ov.seed, "random seed override");
    cmd->add_option("--k", ov.k, "max generated examples override");
    cmd->add_option("--l", ov.l, "max clauses per hypothesis override");
    cmd->add_option("--max-len", ov.max_len, "generation length cap override");
    if (with_unfold)
        cmd->add_flag("--unfold", ov.unfold, "print the unfolded program");
}

void print_labelling(const poker::Labelling& lab) {
    std::cout << "% positive\n";
    for (const auto& a : lab.positives) std::cout << poker::to_string(a) << ".\n";
    std::cout << "% negative\n";
    for (const auto& a : lab.negatives) std::cout << poker::to_string(a) << ".\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-supervised grammar induction from positive examples"};
    app.require_subcommand(1);

    Overrides ov;
    std::string spec_path, program_path, cfg_path;
    int gen_count = 10;

    auto* learn_cmd = app.add_subcommand("learn", "learn a program from a problem spec");
    learn_cmd->add_option("spec", spec_path, "problem spec file")->required();
    add_overrides(learn_cmd, ov);

    auto* label_cmd = app.add_subcommand("label", "learn and print the labelling");
    label_cmd->add_option("spec", spec_path, "problem spec file")->required();
    add_overrides(label_cmd, ov, false);

    auto* gen_cmd = app.add_subcommand("generate", "print generated candidate examples");
    gen_cmd->add_option("spec", spec_path, "problem spec file")->required();
    gen_cmd->add_option("-n", gen_count, "number of atoms to generate");
    add_overrides(gen_cmd, ov, false);

    auto* exp_cmd = app.add_subcommand("experiment", "run an experiment sweep");
    exp_cmd->add_option("config", cfg_path, "experiment config file (key=value)")
        ->required();
    exp_cmd->add_option("--seed", ov.seed, "random seed override");
    exp_cmd->add_option("--reps", ov.reps, "repetition count override");
    exp_cmd->add_option("--out", ov.out_dir, "output directory for CSV files");

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a program file on a spec's examples");
    eval_cmd->add_option("spec", spec_path, "problem spec file")->required();
    eval_cmd->add_option("--program", program_path, "program file (definite clauses)")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*learn_cmd) {
            poker::ProblemSpec spec = load_spec(spec_path, ov);
            poker::LearnProblem problem = spec.to_problem();
            poker::LearnResult res = poker::learn(problem);
            std::cout << poker::to_string(res.program);
            for (const auto& d : res.diagnostics) std::cerr << "% " << d << "\n";
        } else if (*label_cmd) {
            poker::ProblemSpec spec = load_spec(spec_path, ov);
            poker::LearnProblem problem = spec.to_problem();
            poker::LearnResult res = poker::learn(problem);
            print_labelling(res.labelling);
            for (const auto& d : res.diagnostics) std::cerr << "% " << d << "\n";
        } else if (*gen_cmd) {
            poker::ProblemSpec spec = load_spec(spec_path, ov);
            spec.params.k = gen_count;
            poker::LearnProblem problem = spec.to_problem();
            poker::SignatureSet sigs = problem.sigs;
            poker::InducerConfig icfg;
            icfg.l = problem.params.l;
            icfg.depth_coeff = problem.params.depth_coeff;
            icfg.max_invented = problem.params.max_invented;
            poker::TopProgram top = poker::generalise(
                problem.background, *problem.sonf, problem.labelled, icfg, sigs);
            auto atoms = poker::generate(problem.background, top, problem.target,
                                         problem.target_arity, problem.labelled,
                                         problem.unlabelled, problem.params,
                                         problem.alphabet);
            if (static_cast<int>(atoms.size()) > gen_count)
                atoms.resize(static_cast<size_t>(gen_count));
            for (const auto& a : atoms) std::cout << poker::to_string(a) << ".\n";
        } else if (*exp_cmd) {
            poker::ExperimentConfig cfg = poker::parse_expcfg(read_file(cfg_path));
            if (ov.seed) cfg.seed = *ov.seed;
            if (ov.reps) cfg.repetitions = *ov.reps;
            if (ov.out_dir.empty()) {
                poker::ExperimentResult res = poker::run(cfg, &std::cout);
                std::cout << "\n" << poker::summary_csv(res.summary);
            } else {
                std::filesystem::create_directories(ov.out_dir);
                std::string stem = cfg.benchmark + "_" + cfg.system;
                std::ofstream rows(ov.out_dir + "/" + stem + ".csv");
                poker::ExperimentResult res = poker::run(cfg, &rows);
                std::ofstream summary(ov.out_dir + "/" + stem + "_summary.csv");
                summary << poker::summary_csv(res.summary);
                std::cout << "wrote " << ov.out_dir << "/" << stem << ".csv and "
                          << stem << "_summary.csv\n";
            }
        } else if (*eval_cmd) {
            poker::ProblemSpec spec = poker::parse_spec(read_file(spec_path));
            poker::LearnProblem problem = spec.to_problem();
            poker::Program prog = poker::parse_program_text(read_file(program_path));
            prog.depth_coeff = problem.params.depth_coeff;
            // pos atoms are the positive test set; unlabelled atoms, if any,
            // are treated as the negative test set.
            poker::RatePair r = poker::eval_acceptor(prog, problem.background,
                                                     problem.labelled,
                                                     problem.unlabelled);
            std::cout << "tpr=" << (r.tpr ? std::to_string(*r.tpr) : "undefined")
                      << " tnr=" << (r.tnr ? std::to_string(*r.tnr) : "undefined")
                      << "\n";
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
