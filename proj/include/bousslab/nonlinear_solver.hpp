// nonlinear_solver.hpp
// Time stepping of the full nonlinear perturbation system on the torus:
//   u_t + u.grad u = -grad p + nu d22 u + theta e2,   div u = 0,
//   th_t + u.grad th + u2 = eta d11 th,
// with the anisotropic dissipation handled exactly (integrating factor) or
// implicitly (Crank-Nicolson) and everything else explicit. Pressure is
// eliminated by the Leray projection.

#pragma once

#include "bousslab/kernels.hpp"
#include "bousslab/linear_propagator.hpp"
#include "bousslab/spectral_field.hpp"

#include <memory>
#include <stdexcept>
#include <vector>

namespace bousslab {

struct NonlinearState {
    VectorField u;
    SpectralField theta;
    double t = 0.0;

    NonlinearState() = default;
    explicit NonlinearState(const FrequencyGrid& g) : u(g), theta(g) {}
    explicit NonlinearState(const LinearState& s) : u(s.u), theta(s.theta), t(s.t) {}
    const FrequencyGrid& grid() const { return u.grid(); }
    LinearState as_linear() const;
};

enum class Scheme { if_rk4, imex_cn };

// All physical/numerical parameters of a run.
struct SimConfig {
    kernels::Params phys;
    int n1 = 128, n2 = 128;
    double L1 = 1.0, L2 = 1.0;
    double dt = 1e-3;
    double T = 10.0;
    Scheme scheme = Scheme::if_rk4;
    bool linear_only = false; // verification mode: advection terms off
    double a1 = 1.0, a2 = 1.0;      // frequency cutoff thresholds
    double delta = 0.1;             // energy-functional weight
    double lyap_lambda = 0.5;       // Lyapunov combination weight
    int cadence = 1;                // record every this many steps
    std::uint64_t seed = 1;
    int threads = 1;

    void validate() const;
};

// CFL violation; carries a workable step suggestion.
struct CflError : std::runtime_error {
    double suggested_dt;
    CflError(const std::string& msg, double dt) : std::runtime_error(msg), suggested_dt(dt) {}
};

// NaN/Inf encountered while stepping.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One row of run diagnostics (CSV schema diag-v1, fixed column order).
struct DiagnosticsRecord {
    double t = 0.0;
    double l2_u = 0.0, l2_th = 0.0;
    double h1_u = 0.0, h1_th = 0.0;
    double h2_u = 0.0, h2_th = 0.0;
    double d2u_l2 = 0.0, d1th_l2 = 0.0;   // ||d2 u||_L2, ||d1 th||_L2
    double d2u_h2 = 0.0, d1th_h2 = 0.0;   // same derivatives in H2
    double d1u2_l2 = 0.0;                 // ||d1 u2||_L2
    double omega_l2 = 0.0, grad_omega_l2 = 0.0;
    double div_rel = 0.0;
};

DiagnosticsRecord make_record(const NonlinearState& s);

struct Tendency {
    VectorField du;     // P(-u.grad u + theta e2)
    SpectralField dth;  // -u.grad th - u2
    double umax = 0.0;  // max pointwise speed, for the CFL check
};

// Non-stiff part of the right-hand side; products in physical space,
// dealiased, velocity part Leray-projected. NaN/Inf aborts with diagnostic.
Tendency nonlinear_tendency(const NonlinearState& s, bool linear_only = false,
                            int threads = 1);

// One-step integrator; holds the per-mode dissipation multipliers and, for
// CN-AB2, the previous tendency. A run owns its stepper exclusively.
class Stepper {
  public:
    Stepper(const FrequencyGrid& g, const SimConfig& cfg);

    // Advances by cfg.dt. Checks the advective CFL dt*max|u|*max|xi| <= 0.5.
    NonlinearState step(const NonlinearState& s);

    void reset(); // forget CN-AB2 history

  private:
    NonlinearState step_ifrk4(const NonlinearState& s, const Tendency& t0);
    NonlinearState step_imex_cn(const NonlinearState& s, const Tendency& t0);

    FrequencyGrid grid_;
    SimConfig cfg_;
    double kmax_ = 0.0; // largest retained |xi|
    std::vector<double> eu_h_, eu_h2_, eth_h_, eth_h2_; // IF multipliers
    std::vector<double> cn_den_u_, cn_num_u_, cn_den_th_, cn_num_th_;
    bool have_prev_ = false;
    Tendency prev_;
};

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    NonlinearState final_state;
    bool instability = false; // H2 energy exceeded 1e3 x initial, or NaN
    double e0 = 0.0;          // initial H2 energy (squared)
};

// Advances to cfg.T emitting records every cfg.cadence steps (initial and
// final states always recorded). Deterministic given (cfg, init).
RunResult run(const SimConfig& cfg, const NonlinearState& init);

struct VorticityRecord {
    double omega_l2 = 0.0;
    double grad_omega_l2 = 0.0;
    double residual_l2 = 0.0; // instantaneous tendency residual (roundoff level)
};

// omega = d1 u2 - d2 u1, its norms, and the vorticity-equation residual of
// the current tendency. The solver evolves u, so the instantaneous residual
// vanishes to roundoff here; the trajectory variant below carries the O(dt^2)
// central-difference error instead.
VorticityRecord vorticity_diagnostics(const NonlinearState& s);

// Central-difference residual of d_t om + u.grad om - nu d22 om - d1 th = 0
// over uniformly sampled snapshots; max interior L2 norm.
double vorticity_residual_traj(const std::vector<NonlinearState>& snaps,
                               const std::vector<double>& times, const kernels::Params& p);

SpectralField vorticity(const VectorField& u);

} // namespace bousslab
