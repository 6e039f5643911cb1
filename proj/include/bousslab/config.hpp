// config.hpp
// Run configuration: an INI-style file with [section] headers and key = value
// lines, parsed strictly (unknown sections or keys are hard errors, so a typo
// in nu/eta cannot pass silently). Sections: physical, grid, time, scheme,
// filter, functional, diagnostics, plus one optional section per experiment.

#pragma once

#include "bousslab/nonlinear_solver.hpp"

#include <string>
#include <vector>

namespace bousslab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    SimConfig sim;

    // [linear_verify]
    std::vector<double> lv_times{0.1, 1.0, 10.0};
    std::vector<double> lv_nus{0.1, 1.0, 10.0};
    std::vector<double> lv_etas{0.1, 1.0, 10.0};
    int lv_n = 32;
    int lv_band_lo = 1, lv_band_hi = 8;
    double lv_tol = 1e-8;

    // [kernel_bounds]
    int kb_n_xi = 50, kb_n_t = 20;
    int kb_n_xi_valid = 101, kb_n_t_valid = 41;
    double kb_xi_min = 0.2, kb_xi_max = 10.0, kb_t_max = 10.0;
    double kb_c_cap = 1e3, kb_c0_floor = 1e-3;
    int kb_n_random = 10000;

    // [decay_rates]
    double dr_t_lo = 10.0, dr_t_hi = 1000.0;
    int dr_n_times = 25;
    double dr_rel_tol = 1e-6;
    double dr_slope_cap = -0.85;

    // [exp_decay]
    int ed_samples = 400;
    double ed_fit_lo = 1.0;
    double ed_fit_frac_hi = 0.9;
    double ed_rate_frac = 0.8;
    int ed_band_lo = 1, ed_band_hi = 8;

    // [stability_sweep]
    std::vector<double> sw_eps{1e-3, 1e-2};
    int sw_seeds = 5;
    double sw_growth_cap = 4.0;
    int sw_band_lo = 1, sw_band_hi = 4;

    // [energy_balance]
    double eb_drift_cap = 1e-6;
    double eb_eps = 1e-2;
    int eb_band_lo = 1, eb_band_hi = 1;
};

// Parses a config file; throws ConfigError naming the offending line/key.
ExperimentConfig load_config(const std::string& path);

// Parses from text (exposed for tests).
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>");

// Canonical serialization of every key (defaults included); basis of the
// reproducibility hash.
std::string canonical_config(const ExperimentConfig& cfg);

// FNV-1a 64-bit over the canonical serialization.
std::uint64_t config_hash(const ExperimentConfig& cfg);

} // namespace bousslab
