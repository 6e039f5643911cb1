// continuum_quadrature.hpp
// Plane-domain verification of the algebraic decay rates: Sobolev norms of
// the exact kernel representation against closed-form initial spectra, by
// adaptive tensor Gauss quadrature. The torus cannot exhibit these rates;
// this module works directly on R^2.

#pragma once

#include "bousslab/diagnostics.hpp" // DecayFit
#include "bousslab/kernels.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace bousslab::quadrature {

enum class SpectrumKind { gaussian, xi1_weighted_gaussian, xi1sq_weighted_gaussian };

// amplitude * xi1^p * exp(-|xi|^2 / width^2), p = 0, 1, 2 per kind.
struct ClosedFormSpectrum {
    SpectrumKind kind = SpectrumKind::gaussian;
    double width = 1.0;
    double amplitude = 1.0;

    double operator()(double xi1, double xi2) const;
    int xi1_power() const; // the sigma the kind supports: finite H^{0,-sigma} for sigma <= p
};

struct InitSpectra {
    std::optional<ClosedFormSpectrum> u10, u20, theta0;
};

enum class FieldSel { u1, u2, theta };

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = true;
    long evals = 0;
};

// ( integral over R^2 of |xi|^{2s} |sum_i K_i(xi,t) spectrum_i(xi)|^2 dxi )^{1/2}
// at relative tolerance rel_tol. Exploits the evenness of the integrand
// (quadrant when all active spectra share xi1-parity, half-plane otherwise).
QuadResult norm_by_quadrature(FieldSel which, const InitSpectra& init, double s, double t,
                              const kernels::Params& p, double rel_tol = 1e-6);

struct EnvelopeTerm {
    double exponent = 0.0; // power of t in the theorem bound
    double coeff = 0.0;    // fitted amplitude (includes the data norm)
};

struct DecayEnvelopeCase {
    double s = 0.0;
    double sigma = 2.0;
    FieldSel which = FieldSel::theta;
    InitSpectra init;
};

struct DecayEnvelopeReport {
    std::vector<double> times;
    std::vector<double> measured;
    std::vector<double> envelope;
    std::vector<EnvelopeTerm> terms;
    double dominant_exponent = 0.0;   // largest contribution at the window end
    bool no_decay_guaranteed = false; // a data-active term has exponent >= 0
    bool envelope_ok = false;          // measured <= envelope on the validation half
    bool quadrature_ok = true;
    DecayFit measured_fit;             // log-log slope over the full window
};

// Measures the norm along the time series, fits the predicted power terms
// (nonnegative least squares on the first half, sup-calibrated there), and
// validates the one-sided envelope on the second half. Requires s >= 0,
// sigma >= 0, s + sigma >= 2.
DecayEnvelopeReport decay_envelope_report(const DecayEnvelopeCase& c,
                                          const std::vector<double>& times,
                                          const kernels::Params& p, double rel_tol = 1e-6,
                                          int threads = 1);

// Generic adaptive 2D quadrature over [x0,x1]x[y0,y1] (exposed for tests).
QuadResult adapt2d(const std::function<double(double, double)>& f, double x0, double x1,
                   double y0, double y1, double rel_tol, long max_panels = 20000);

} // namespace bousslab::quadrature
