// linear_propagator.hpp
// Exact mode-wise evolution of the linearized system via the kernel symbols,
// a per-mode RK4 oracle for cross-validation, the Duhamel forcing integral,
// and the second-order wave-equation residual of sampled trajectories.
//
// Per mode the linearized system reads
//   u1' = -nu k2^2 u1 - (k1 k2/|k|^2) th
//   u2' = -nu k2^2 u2 + (k1^2 /|k|^2) th
//   th' = -eta k1^2 th - u2
// and the exact solution is u1 = K1 u10 + K2 th0, u2 = K1 u20 + K3 th0,
// th = K4 u20 + K5 th0. The k = 0 mode is held constant.

#pragma once

#include "bousslab/kernels.hpp"
#include "bousslab/spectral_field.hpp"

#include <iosfwd>

namespace bousslab {

struct LinearState {
    VectorField u;
    SpectralField theta;
    double t = 0.0;

    LinearState() = default;
    explicit LinearState(const FrequencyGrid& g) : u(g), theta(g) {}
    const FrequencyGrid& grid() const { return u.grid(); }
};

// Exact propagation by time t >= 0. Mode-parallel when threads > 1; results
// are identical for any width (independent per-mode writes, no reductions).
LinearState propagate_exact(const LinearState& s0, double t, const kernels::Params& p,
                            int threads = 1);

// Classical RK4 with a uniform step on every mode. Stability requires
// dt * max(eta k1^2 + nu k2^2) <= 1 (warned via exception).
LinearState ode_oracle(const LinearState& s0, double t, const kernels::Params& p, double dt);

// Default oracle step from the stability bound with safety factor 0.5.
double oracle_stable_dt(const FrequencyGrid& g, const kernels::Params& p);

// Same classical RK4 kernel, but with per-mode step selection (stiff
// transient resolved at S*dt <= 5.5e-3, tail at the accuracy step of the
// surviving root) and early exit once a mode is provably below
// rel_floor * max|initial amplitude|. Returns states at each checkpoint
// (checkpoints must be increasing, > 0). Mode-parallel; width does not
// affect the result.
std::vector<LinearState> ode_oracle_auto(const LinearState& s0,
                                         const std::vector<double>& checkpoints,
                                         const kernels::Params& p, double rel_floor = 1e-25,
                                         int threads = 1);

// Max mode-wise relative difference; modes below floor_abs on both sides
// compare equal. Used by the oracle cross-checks.
double max_mode_rel_error(const LinearState& a, const LinearState& b, double floor_abs);
double max_abs_coeff(const LinearState& s);

// Duhamel convolution term: integral over [0, t] of G1(t - tau) F(tau) dtau
// per mode, composite Simpson on the uniform sample mesh (3/8 tail when the
// interval count is odd). Fewer than 3 samples is an error.
SpectralField duhamel_apply(const std::vector<SpectralField>& forcing, double t,
                            const kernels::Params& p);

// Max over interior snapshots of the L2 norm of
//   f'' + S f' + P f   (central differences in time, exact symbols in space)
// for a uniformly sampled scalar trajectory. O(dt^2) for exact solutions.
double wave_residual(const std::vector<SpectralField>& snaps, const std::vector<double>& times,
                     const kernels::Params& p);

// CSV dump of a state: t, m1, m2, re_u1, im_u1, re_u2, im_u2, re_th, im_th.
void write_snapshot(std::ostream& os, const LinearState& s);

} // namespace bousslab
