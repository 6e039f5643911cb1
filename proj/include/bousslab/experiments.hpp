// experiments.hpp
// The canonical experiments behind the CLI subcommands. Each one runs from an
// ExperimentConfig, writes versioned CSV reports plus a JSON summary into the
// output directory, and reports whether its acceptance assertions held (only
// enforced when the caller passes check = true).

#pragma once

#include "bousslab/config.hpp"
#include "bousslab/report.hpp"

namespace bousslab {

struct ExperimentOptions {
    std::string out_dir = ".";
    bool check = false;
    std::uint64_t seed = 0; // 0: keep config seed
    int threads = 0;        // 0: keep config threads
};

struct ExperimentResult {
    bool check_passed = true;
    RunSummary summary;
};

ExperimentResult run_linear_verify(ExperimentConfig cfg, const ExperimentOptions& opt);
ExperimentResult run_kernel_bounds(ExperimentConfig cfg, const ExperimentOptions& opt);
ExperimentResult run_decay_rates(ExperimentConfig cfg, const ExperimentOptions& opt);
ExperimentResult run_exp_decay(ExperimentConfig cfg, const ExperimentOptions& opt);
ExperimentResult run_stability_sweep(ExperimentConfig cfg, const ExperimentOptions& opt);
ExperimentResult run_energy_balance(ExperimentConfig cfg, const ExperimentOptions& opt);

// Dispatch by subcommand name; throws ConfigError for unknown names.
ExperimentResult run_experiment(const std::string& name, ExperimentConfig cfg,
                                const ExperimentOptions& opt);

} // namespace bousslab
