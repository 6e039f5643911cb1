// Continuum quadrature: adaptive integrator, plane-domain norms of the kernel
// representation, decay-envelope reports.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bousslab/continuum_quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace bousslab;
using namespace bousslab::quadrature;
using kernels::Params;

TEST_CASE("adapt2d integrates a Gaussian to tolerance")
{
    const auto f = [](double x, double y) { return std::exp(-(x * x + y * y)); };
    const QuadResult r = adapt2d(f, 0.0, 6.0, 0.0, 6.0, 1e-8);
    CHECK(r.converged);
    const double quarter = std::numbers::pi / 4.0; // erf(6) is 1 to 1e-16
    CHECK(r.value == doctest::Approx(quarter).epsilon(1e-8));
}

TEST_CASE("norm at t -> 0+ matches the closed-form data norms")
{
    const Params p{1.0, 1.0};

    // plain Gaussian theta0: ||theta0||^2 = integral e^{-2|xi|^2} = pi/2
    InitSpectra init;
    init.theta0 = ClosedFormSpectrum{SpectrumKind::gaussian, 1.0, 1.0};
    const QuadResult r = norm_by_quadrature(FieldSel::theta, init, 0.0, 1e-7, p);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-4));

    // xi1^2-weighted Gaussian: ||theta0||^2 = 3 pi / 32
    InitSpectra init2;
    init2.theta0 = ClosedFormSpectrum{SpectrumKind::xi1sq_weighted_gaussian, 1.0, 1.0};
    const QuadResult r2 = norm_by_quadrature(FieldSel::theta, init2, 0.0, 1e-7, p);
    CHECK(r2.value == doctest::Approx(std::sqrt(3.0 * std::numbers::pi / 32.0)).epsilon(1e-4));

    // no data for the selected component: zero
    InitSpectra init3;
    init3.u10 = ClosedFormSpectrum{SpectrumKind::gaussian, 1.0, 1.0};
    CHECK(norm_by_quadrature(FieldSel::theta, init3, 0.0, 1.0, p).value == 0.0);
}

TEST_CASE("quadrature self-consistency under tolerance halving")
{
    const Params p{1.0, 1.0};
    InitSpectra init;
    init.theta0 = ClosedFormSpectrum{SpectrumKind::xi1sq_weighted_gaussian, 1.0, 1.0};

    for (double t : {1.0, 30.0}) {
        const double a = norm_by_quadrature(FieldSel::theta, init, 0.0, t, p, 1e-6).value;
        const double b = norm_by_quadrature(FieldSel::theta, init, 0.0, t, p, 5e-7).value;
        CHECK(std::abs(a - b) <= 5.0 * 1e-6 * std::abs(b));
    }
}

TEST_CASE("theorem hypothesis gate")
{
    const Params p{1.0, 1.0};
    DecayEnvelopeCase c;
    c.s = 0.0;
    c.sigma = 1.0; // s + sigma < 2
    c.init.theta0 = ClosedFormSpectrum{SpectrumKind::xi1sq_weighted_gaussian, 1.0, 1.0};
    std::vector<double> times{10.0, 20.0, 40.0, 80.0};
    CHECK_THROWS_AS(decay_envelope_report(c, times, p), std::invalid_argument);
}

TEST_CASE("theta decay report over a short window")
{
    const Params p{1.0, 1.0};
    DecayEnvelopeCase c;
    c.s = 0.0;
    c.sigma = 2.0;
    c.which = FieldSel::theta;
    c.init.theta0 = ClosedFormSpectrum{SpectrumKind::xi1sq_weighted_gaussian, 1.0, 1.0};

    std::vector<double> times;
    for (int i = 0; i < 12; ++i) times.push_back(10.0 * std::pow(10.0, i / 11.0));
    const DecayEnvelopeReport rep = decay_envelope_report(c, times, p);

    CHECK(rep.quadrature_ok);
    CHECK(rep.measured_fit.slope <= -0.85);
    CHECK(rep.envelope_ok);
    CHECK_FALSE(rep.no_decay_guaranteed);
    CHECK(rep.dominant_exponent == doctest::Approx(-1.0));
    for (std::size_t i = 0; i + 1 < rep.measured.size(); ++i)
        CHECK(rep.measured[i + 1] < rep.measured[i]); // monotone decay
    // one-sided envelope holds across the whole window, fit half included
    for (std::size_t i = 0; i < rep.measured.size(); ++i)
        CHECK(rep.measured[i] <= rep.envelope[i] * (1.0 + 1e-12));
}

TEST_CASE("u2 decay report flags the non-decaying theorem term")
{
    const Params p{1.0, 1.0};
    DecayEnvelopeCase c;
    c.s = 0.0;
    c.sigma = 2.0;
    c.which = FieldSel::u2;
    c.init.theta0 = ClosedFormSpectrum{SpectrumKind::xi1sq_weighted_gaussian, 1.0, 1.0};

    std::vector<double> times;
    for (int i = 0; i < 12; ++i) times.push_back(10.0 * std::pow(10.0, i / 11.0));
    const DecayEnvelopeReport rep = decay_envelope_report(c, times, p);

    CHECK(rep.quadrature_ok);
    CHECK(rep.measured_fit.slope <= -0.85);
    CHECK(rep.envelope_ok);
    CHECK(rep.no_decay_guaranteed); // theta-data term t^0 present in the bound
}

TEST_CASE("u1 report with sigma = 0 includes a flat envelope term")
{
    const Params p{1.0, 1.0};
    DecayEnvelopeCase c;
    c.s = 2.0;
    c.sigma = 0.0;
    c.which = FieldSel::u1;
    c.init.u10 = ClosedFormSpectrum{SpectrumKind::gaussian, 1.0, 1.0};

    std::vector<double> times;
    for (int i = 0; i < 10; ++i) times.push_back(5.0 * std::pow(8.0, i / 9.0));
    const DecayEnvelopeReport rep = decay_envelope_report(c, times, p);
    CHECK(rep.no_decay_guaranteed); // t^{-sigma/2} = t^0 on the u10 norm
}
