// kernels.hpp
// Characteristic roots, scalar wave kernels G1/G2 and the five solution
// kernels K1..K5 of the linearized system, frequency-region classification,
// and verification/fitting of the per-region kernel envelopes.
//
// Per frequency k = (k1, k2) != 0 the characteristic quadratic is
//   lambda^2 + S*lambda + P = 0,  S = eta*k1^2 + nu*k2^2,
//                                 P = nu*eta*k1^2*k2^2 + k1^2/|k|^2,
// with roots lambda1 (fast) and lambda2 (slow), Re l1 <= Re l2 <= 0.

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bousslab::kernels {

using cplx = std::complex<double>;

struct Params {
    double nu = 1.0;  // kinematic viscosity, > 0
    double eta = 1.0; // thermal diffusivity, > 0
};

void validate(const Params& p);

enum class Region : std::uint8_t { S11, S12, S21, S22, AXIS1, ZERO };

std::string region_name(Region r);

struct RootPair {
    cplx lambda1, lambda2;
};

struct GPair {
    cplx g1, g2;
};

struct KernelEval {
    double xi1 = 0.0, xi2 = 0.0, t = 0.0;
    cplx lambda1, lambda2;
    cplx g1, g2;
    cplx k1, k2, k3, k4, k5;
    Region region = Region::ZERO;
};

// S and P of the characteristic quadratic.
double char_s(double xi1, double xi2, const Params& p);
double char_p(double xi1, double xi2, const Params& p);

// Roots per the closed form; the sqrt of a negative discriminant is taken
// pure imaginary, and the slow real root uses the product form
// -2P/(S + sqrt(S^2-4P)) so lambda1*lambda2 = P holds to roundoff.
RootPair char_roots(double xi1, double xi2, const Params& p);

// Relative threshold below which |l1 - l2| counts as degenerate and the
// series branch is used; divided differences lose ~|dl*t|^{-1} digits there.
inline constexpr double kDegenerateRelTol = 1e-6;

// G1 = (e^{l1 t} - e^{l2 t})/(l1 - l2), G2 = (l1 e^{l2 t} - l2 e^{l1 t})/(l1 - l2),
// switching to the degenerate-limit form G1 = t e^{l t}, G2 = e^{l t}(1 - l t)
// (evaluated via sinh/cosh of the half-difference) near coincident roots.
GPair g_functions(cplx lambda1, cplx lambda2, double t);

// Branch-forced variants for seam tests.
GPair g_divided_difference(cplx lambda1, cplx lambda2, double t);
GPair g_limit_series(cplx lambda1, cplx lambda2, double t);

// Full kernel evaluation at one (xi, t). xi must be nonzero, t >= 0.
KernelEval kernel_symbols(double xi1, double xi2, double t, const Params& p);

// S1 iff P >= (3/16) S^2; S11 iff S^2 >= 4P within S1; S21 iff |xi1| >= |xi2|
// within S2. Ties resolve to the first-listed tag. xi must be nonzero.
Region classify_region(double xi1, double xi2, const Params& p);

// Region-appropriate root inequalities with 1e-10 absolute slack:
//   S1: Re l1 <= -S/2 and Re l2 <= -S/4;
//   S2: l1 <= -(3/4) S and l2 <= -P/S.
bool verify_root_bounds(double xi1, double xi2, const Params& p);

// Envelope families of the kernel bounds. The constants (C, c0) are supplied
// or fitted; the paper leaves them generic.
enum class EnvelopeFamily : std::uint8_t {
    s1_k1k5, // |K1|,|K5| <= C exp(-c0 |xi|^2 t)            on S1
    s1_k2k3k4, // |K2|,|K3|,|K4| <= C t exp(-c0 |xi|^2 t)   on S1
    s2_k1k5, // |K1|,|K5| <= C(exp(-3/4 S t) + exp(-P/S t)) on S2 (rates pinned)
    s2_k2,   // C |xi1||xi2|/|xi|^4 * (exp(-c0|xi|^2 t) + exp(-c0 xi1^2 xi2^2/|xi|^2 t) exp(-c0 xi1^2/|xi|^4 t))
    s2_k3,   // same bracket with |xi1|^2/|xi|^4
    s2_k4,   // same bracket with 1/|xi|^2
};

std::string envelope_name(EnvelopeFamily f);

// Envelope value at (xi, t) for given constants.
double envelope_value(EnvelopeFamily f, double xi1, double xi2, double t, const Params& p,
                      double C, double c0);

struct EnvelopeReport {
    bool k1 = true, k2 = true, k3 = true, k4 = true, k5 = true;
    Region region = Region::ZERO;
};

// Checks each kernel at (xi, t) against the envelope of its region with the
// supplied constants.
EnvelopeReport verify_kernel_envelopes(double xi1, double xi2, double t, const Params& p,
                                       double C, double c0);

struct EnvelopeFit {
    EnvelopeFamily family{};
    double C = 0.0;        // sup-ratio over the fit lattice, +10% headroom
    double c0 = 0.0;       // largest candidate rate with C below the cap
    double max_ratio = 0.0; // raw sup ratio at the chosen c0 (before headroom)
    long samples = 0;
    bool finite = false;
};

struct Lattice3 {
    std::vector<double> xi1, xi2, t;
};

// Regular evaluation lattice over (0, xi_max]^2 x [0, t_max].
Lattice3 make_lattice(int n_xi, int n_t, double xi_min, double xi_max, double t_max);

// Fits the smallest workable (C, c0) for one family over the lattice:
// scans c0 candidates from 1 downwards, C(c0) = sup |K|/shape, keeps the
// largest c0 whose C stays under the cap, inflates C by 10% for off-lattice
// robustness. finite = false if no candidate works.
EnvelopeFit fit_envelope(EnvelopeFamily f, const Lattice3& lat, const Params& p,
                         double c_cap = 1e3);

// True if every lattice point of the family's region satisfies the fitted
// envelope.
bool validate_envelope(const EnvelopeFit& fit, const Lattice3& lat, const Params& p);

// CSV table: xi1, xi2, t, region, re_l1, im_l1, re_l2, im_l2, K1..K5.
// Header row carries the schema version.
void write_kernel_table(std::ostream& os, const std::vector<KernelEval>& rows);

} // namespace bousslab::kernels
