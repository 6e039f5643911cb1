// diagnostics.hpp
// The functionals the theory quantifies: the frequency cutoff filter, the
// Lyapunov pair (A, B) with its constant C0, the H2 energy functional E(t),
// the anisotropic triple-product ratio, decay-rate fits, the exact discrete
// cancellations I1/J1, and the L2 energy-identity drift.

#pragma once

#include "bousslab/nonlinear_solver.hpp"

#include <optional>

namespace bousslab {

struct CutoffFilter {
    double a1 = 1.0, a2 = 1.0; // both > 0

    void validate() const;
};

// Zeroes coefficients with |k1| <= a1 or |k2| <= a2 (wavenumbers, not
// indices). Idempotent; commutes with derivative and with propagate_exact.
SpectralField apply_cutoff(const SpectralField& f, const CutoffFilter& filt);
VectorField apply_cutoff(const VectorField& v, const CutoffFilter& filt);
LinearState apply_cutoff(const LinearState& s, const CutoffFilter& filt);

struct LyapunovConfig {
    kernels::Params phys;
    CutoffFilter filt;
    double lambda = 0.5;

    // admissibility: lambda <= (nu a2^2 + eta a1^2)/2 and <= sqrt(nu eta) a1 a2 / 2
    void validate() const;
};

// C0 = (1/4) min{ nu a2^2 + eta a1^2, lambda, eta a1^2, nu a2^2,
//                 sqrt((nu a2^2 + eta a1^2) * eta nu a1^2 a2^2 / lambda) }.
double lyapunov_c0(const LyapunovConfig& cfg);

struct LyapunovReport {
    double t = 0.0;
    double A = 0.0, B = 0.0;
    double C0 = 0.0;
    double lambda = 0.0;
    double ratio = 0.0;        // B/A (0 when A = 0)
    bool exact_dt = true;      // time derivative from the governing equations
};

enum class TimeDerivMode { exact, central_diff };

// A(t), B(t) of the filtered velocity at the middle of three consecutive
// uniformly spaced states. In exact mode d_t(phi*u) comes from the per-mode
// right-hand side (needs theta); central_diff is the flagged fallback.
LyapunovReport lyapunov_AB(const LinearState& prev, const LinearState& mid,
                           const LinearState& next, const LyapunovConfig& cfg,
                           TimeDerivMode mode = TimeDerivMode::exact);

// d_t (phi*u) of a filtered state from the governing equations.
VectorField exact_time_derivative(const LinearState& filtered, const kernels::Params& p);

struct EnergyReport {
    double t = 0.0;
    double h2sq_u = 0.0, h2sq_th = 0.0; // instantaneous squared H2 norms
    double run_max = 0.0;               // running max of the H2 energy
    double int_d2u_h2sq = 0.0;          // trapezoid of ||d2 u||_H2^2
    double int_d1th_h2sq = 0.0;         // trapezoid of ||d1 th||_H2^2
    double int_d1u2_l2sq = 0.0;         // trapezoid of ||d1 u2||_L2^2
    double E = 0.0;
    double E0 = 0.0;
};

// E(t) = max_{tau<=t}(||u||_H2^2 + ||th||_H2^2) + 2 nu int ||d2 u||_H2^2
//        + 2 eta int ||d1 th||_H2^2 + delta int ||d1 u2||_L2^2,
// running max and trapezoid integrals over the record series.
std::vector<EnergyReport> energy_functional(const std::vector<DiagnosticsRecord>& records,
                                            double delta, const kernels::Params& p);

struct TripleProductResult {
    bool applicable = false;
    double ratio = 0.0; // integral |f g h| / (||f|| ||g||^1/2 ||d2 g||^1/2 ||h||^1/2 ||d1 h||^1/2)
};

TripleProductResult triple_product_check(const SpectralField& f, const SpectralField& g,
                                         const SpectralField& h);

enum class FitMode { algebraic, exponential };

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int n = 0;
};

// Least squares of log(value) against log(t) (algebraic) or t (exponential)
// inside [t_lo, t_hi]. Needs >= 10 samples; nonpositive values are an error.
DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values,
                        double t_lo, double t_hi, FitMode mode);

// Discrete I1 = <d1 th, om> - <grad u2, grad th> and
// J1 = <grad d1 th, grad om> - <lap u2, lap th>, returned relative to the
// magnitudes of their two terms. Both vanish identically for divergence-free
// u (checked spectrally, exact to roundoff).
double cancellation_i1_rel(const VectorField& u, const SpectralField& theta);
double cancellation_j1_rel(const VectorField& u, const SpectralField& theta);

// Max relative drift of the L2 energy identity
//   ||u||^2 + ||th||^2 + 2 nu int ||d2 u||^2 + 2 eta int ||d1 th||^2 = const
// over the record series (trapezoid time integrals).
double energy_identity_drift(const std::vector<DiagnosticsRecord>& records,
                             const kernels::Params& p);

} // namespace bousslab
