// Diagnostics: cutoff filter, Lyapunov pair and its constant, energy
// functional, triple product, decay fits, exact cancellations.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bousslab/diagnostics.hpp"
#include "bousslab/initial_data.hpp"
#include "bousslab/spectral_ops.hpp"

#include <cmath>

using namespace bousslab;
using kernels::Params;

namespace {

int pos(int m, int n) { return (m % n + n) % n; }

LyapunovConfig default_lyap()
{
    LyapunovConfig cfg;
    cfg.phys = Params{1.0, 1.0};
    cfg.filt = CutoffFilter{1.0, 1.0};
    cfg.lambda = 0.5;
    return cfg;
}

} // namespace

TEST_CASE("cutoff filter: kept and zeroed modes, idempotence, commutation")
{
    // L1 = 10/3 puts wavenumber 0.3 on the lattice
    const FrequencyGrid g = make_grid(12, 12, 10.0 / 3.0, 1.0);
    SpectralField f(g);
    f(pos(1, 12), pos(1, 12)) = cplx{1.0, 0.0};  // k = (0.3, 1)
    f(pos(-1, 12), pos(-1, 12)) = cplx{1.0, 0.0};
    f(pos(4, 12), pos(1, 12)) = cplx{2.0, 0.0};  // k = (1.2, 1)
    f(pos(-4, 12), pos(-1, 12)) = cplx{2.0, 0.0};

    const CutoffFilter filt{0.5, 0.5};
    const SpectralField c = apply_cutoff(f, filt);
    CHECK(std::abs(c(pos(1, 12), pos(1, 12))) == 0.0);          // |k1| = 0.3 <= 0.5
    CHECK(c(pos(4, 12), pos(1, 12)).real() == doctest::Approx(2.0)); // both above

    // boundary is inclusive: |k1| <= a1 zeroed
    const FrequencyGrid h = make_grid(12, 12, 1.0, 1.0);
    SpectralField b(h);
    b(pos(1, 12), pos(2, 12)) = cplx{1.0, 0.0};
    b(pos(-1, 12), pos(-2, 12)) = cplx{1.0, 0.0};
    CHECK(std::abs(apply_cutoff(b, CutoffFilter{1.0, 1.0})(pos(1, 12), pos(2, 12))) == 0.0);

    // idempotent
    const SpectralField cc = apply_cutoff(c, filt);
    for (std::size_t i = 0; i < c.c.size(); ++i) CHECK(c.c[i] == cc.c[i]);

    // commutes with derivative
    const SpectralField a1 = derivative(apply_cutoff(f, filt), 1, 1);
    const SpectralField a2 = apply_cutoff(derivative(f, 1, 1), filt);
    for (std::size_t i = 0; i < a1.c.size(); ++i) CHECK(a1.c[i] == a2.c[i]);
}

TEST_CASE("cutoff commutes with the exact propagator")
{
    const FrequencyGrid g = make_grid(16, 16, 1.0, 1.0);
    SplitMix64 rng(3);
    const LinearState s0 = random_solenoidal(g, 1, 5, 1.0, rng);
    const Params p{1.0, 1.0};
    const CutoffFilter filt{1.0, 1.0};

    const LinearState a = apply_cutoff(propagate_exact(s0, 0.7, p), filt);
    const LinearState b = propagate_exact(apply_cutoff(s0, filt), 0.7, p);
    CHECK(max_mode_rel_error(a, b, 1e-14) <= 1e-13);
}

TEST_CASE("lyapunov constant: the default case gives C0 = 1/8")
{
    const LyapunovConfig cfg = default_lyap();
    CHECK(lyapunov_c0(cfg) == doctest::Approx(0.125).epsilon(1e-15));

    // lambda above either admissibility cap is rejected
    LyapunovConfig bad = cfg;
    bad.lambda = 0.75; // > min(1, 1/2)
    CHECK_THROWS_AS(lyapunov_c0(bad), std::invalid_argument);
}

TEST_CASE("lyapunov A, B on the zero state")
{
    const FrequencyGrid g = make_grid(16, 16, 1.0, 1.0);
    LinearState z(g);
    LinearState z1 = z, z2 = z;
    z1.t = 0.1;
    z2.t = 0.2;
    const LyapunovReport rep = lyapunov_AB(z, z1, z2, default_lyap());
    CHECK(rep.A == 0.0);
    CHECK(rep.B == 0.0);
}

TEST_CASE("B >= C0 A along exact trajectories, dA/dt + 2B -> 0 at order 2")
{
    const FrequencyGrid g = make_grid(32, 32, 1.0, 1.0);
    const Params p{1.0, 1.0};
    SplitMix64 rng(17);
    const LinearState s0 = random_solenoidal(g, 1, 6, 1.0, rng);
    const LyapunovConfig cfg = default_lyap();
    const double c0 = lyapunov_c0(cfg);

    const int n = 80;
    const double T = 2.0, half = T / (2 * n);
    std::vector<double> a_vals(2 * n + 1), b_vals(2 * n + 1), h1sq(2 * n + 1);
    std::vector<LinearState> fine;
    for (int k = 0; k <= 2 * n; ++k) fine.push_back(propagate_exact(s0, half * k, p));
    for (int k = 0; k <= 2 * n; ++k) {
        const int km = std::max(0, k - 1), kp = std::min(2 * n, k + 1);
        const LyapunovReport rep = lyapunov_AB(fine[km], fine[k], fine[kp], cfg);
        a_vals[k] = rep.A;
        b_vals[k] = rep.B;
        CHECK(rep.A >= -1e-12 * std::abs(rep.B)); // admissible lambda keeps A >= 0
        CHECK(rep.B >= c0 * rep.A - 1e-10 * std::max(1.0, rep.A));
        const VectorField fu = apply_cutoff(fine[k].u, cfg.filt);
        const double h1 = h1_norm(fu);
        h1sq[k] = h1 * h1;
    }

    auto residual_at = [&](int stride) {
        std::vector<double> r;
        for (int k = stride; k + stride <= 2 * n; k += stride) {
            const double d =
                (a_vals[k + stride] - a_vals[k - stride]) / (2.0 * stride * half);
            r.push_back(std::abs(d + 2.0 * b_vals[k]));
        }
        std::sort(r.begin(), r.end());
        return r[r.size() / 2];
    };
    const double order = std::log2(residual_at(2) / residual_at(1));
    CHECK(order >= 1.6);
    CHECK(order <= 2.6);

    // (lww)-type lower bound with the explicit coefficient minimum
    const double c_low = std::min({0.5, 0.5, cfg.lambda, cfg.lambda}); // nu=eta=a=1
    for (int k = 0; k <= 2 * n; k += 16) {
        const LinearState fs = apply_cutoff(fine[k], cfg.filt);
        const VectorField ut = exact_time_derivative(fs, p);
        const double lhs = a_vals[k];
        const double h1u = h1_norm(fs.u);
        const double rhs = c_low * (std::pow(l2_norm(ut), 2) + h1u * h1u);
        CHECK(lhs >= rhs - 1e-10 * std::max(1.0, rhs));
    }

    // filtered H1 energy decays at least at the guaranteed exponential rate
    std::vector<double> times(2 * n + 1);
    for (int k = 0; k <= 2 * n; ++k) times[k] = half * k;
    const DecayFit fit = fit_decay_rate(times, h1sq, 0.2, 1.8, FitMode::exponential);
    CHECK(-fit.slope >= 0.8 * c0);
}

TEST_CASE("central-difference fallback approaches the exact derivative")
{
    const FrequencyGrid g = make_grid(16, 16, 1.0, 1.0);
    const Params p{1.0, 1.0};
    SplitMix64 rng(23);
    const LinearState s0 = random_solenoidal(g, 1, 4, 1.0, rng);
    const LyapunovConfig cfg = default_lyap();

    auto diff_at = [&](double h) {
        const LinearState a = propagate_exact(s0, 0.5 - h, p);
        const LinearState b = propagate_exact(s0, 0.5, p);
        const LinearState c = propagate_exact(s0, 0.5 + h, p);
        const LyapunovReport ex = lyapunov_AB(a, b, c, cfg, TimeDerivMode::exact);
        const LyapunovReport cd = lyapunov_AB(a, b, c, cfg, TimeDerivMode::central_diff);
        CHECK(ex.exact_dt);
        CHECK_FALSE(cd.exact_dt);
        return std::abs(ex.A - cd.A);
    };
    const double d1 = diff_at(0.02), d2 = diff_at(0.01);
    CHECK(d1 / d2 >= 3.0); // second-order difference error
    CHECK(d1 / d2 <= 5.0);
}

TEST_CASE("energy functional: base cases and monotonicity")
{
    const Params p{1.0, 1.0};

    DiagnosticsRecord r0;
    r0.t = 0.0;
    r0.h2_u = 0.3;
    r0.h2_th = 0.4;
    const auto single = energy_functional({r0}, 0.1, p);
    REQUIRE(single.size() == 1);
    CHECK(single[0].E == doctest::Approx(0.25)); // 0.09 + 0.16, empty integrals
    CHECK(single[0].E0 == single[0].E);

    // zero trajectory
    std::vector<DiagnosticsRecord> zs(4);
    for (int k = 0; k < 4; ++k) zs[k].t = 0.1 * k;
    for (const auto& e : energy_functional(zs, 0.1, p)) CHECK(e.E == 0.0);

    // monotone E and nondecreasing integrals on a decaying series
    std::vector<DiagnosticsRecord> rs(20);
    for (int k = 0; k < 20; ++k) {
        rs[k].t = 0.05 * k;
        rs[k].h2_u = std::exp(-rs[k].t);
        rs[k].h2_th = 0.5 * std::exp(-rs[k].t);
        rs[k].d2u_h2 = std::exp(-rs[k].t);
        rs[k].d1th_h2 = std::exp(-rs[k].t);
        rs[k].d1u2_l2 = std::exp(-rs[k].t);
    }
    const auto es = energy_functional(rs, 0.1, p);
    for (std::size_t k = 1; k < es.size(); ++k) {
        CHECK(es[k].E >= es[k - 1].E);
        CHECK(es[k].int_d2u_h2sq >= es[k - 1].int_d2u_h2sq);
    }
}

TEST_CASE("triple product: applicability and seed stability")
{
    const FrequencyGrid g = make_grid(16, 16, 1.0, 1.0);

    // single mode: finite ratio
    SpectralField m(g);
    m(pos(1, 16), pos(1, 16)) = cplx{1.0, 0.0};
    m(pos(-1, 16), pos(-1, 16)) = cplx{1.0, 0.0};
    const TripleProductResult one = triple_product_check(m, m, m);
    CHECK(one.applicable);
    CHECK(one.ratio > 0.0);
    CHECK(std::isfinite(one.ratio));

    // g constant in x2 (d2 g = 0) is inapplicable
    SpectralField gx(g);
    gx(pos(1, 16), 0) = cplx{1.0, 0.0};
    gx(pos(-1, 16), 0) = cplx{1.0, 0.0};
    CHECK_FALSE(triple_product_check(m, gx, m).applicable);

    // max ratio over random band-limited triples is stable across seeds
    auto max_ratio = [&](std::uint64_t seed) {
        SplitMix64 rng(seed);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            auto mk = [&]() {
                SpectralField f(g);
                for (int i = 0; i < g.n1; ++i)
                    for (int j = 0; j < g.n2; ++j)
                        if (std::max(std::abs(g.m1[i]), std::abs(g.m2[j])) <= 4 &&
                            (g.m1[i] != 0 || g.m2[j] != 0))
                            f(i, j) = cplx{rng.normal(), rng.normal()};
                enforce_hermitian(f);
                return f;
            };
            const TripleProductResult r = triple_product_check(mk(), mk(), mk());
            if (r.applicable) worst = std::max(worst, r.ratio);
        }
        return worst;
    };
    const double w1 = max_ratio(100), w2 = max_ratio(200);
    CHECK(std::abs(w1 - w2) <= 0.2 * std::max(w1, w2));
    // recorded empirical bound for this sampling family (measured ~0.042
    // across seeds; the lemma's universal constant is not published)
    CHECK(w1 <= 0.085);
    CHECK(w2 <= 0.085);
}

TEST_CASE("decay fit on synthetic series")
{
    std::vector<double> times, alg, expo;
    for (int k = 0; k < 60; ++k) {
        const double t = 1.0 + 0.5 * k;
        times.push_back(t);
        alg.push_back(1.0 / t);
        expo.push_back(std::exp(-t / 8.0));
    }
    const DecayFit f1 = fit_decay_rate(times, alg, 1.0, 40.0, FitMode::algebraic);
    CHECK(f1.slope == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(f1.r2 == doctest::Approx(1.0).epsilon(1e-9));

    const DecayFit f2 = fit_decay_rate(times, expo, 1.0, 40.0, FitMode::exponential);
    CHECK(f2.slope == doctest::Approx(-0.125).epsilon(1e-6));

    // error paths: nonpositive values, too few samples
    std::vector<double> bad = alg;
    bad[5] = 0.0;
    CHECK_THROWS_AS(fit_decay_rate(times, bad, 1.0, 40.0, FitMode::algebraic),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_decay_rate(times, alg, 1.0, 3.0, FitMode::algebraic),
                    std::invalid_argument);
}

TEST_CASE("exact cancellations I1 and J1 on random solenoidal states")
{
    const FrequencyGrid g = make_grid(32, 32, 1.0, 1.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SplitMix64 rng(900 + seed);
        const LinearState s = random_solenoidal(g, 1, 8, 1.0, rng);
        CHECK(cancellation_i1_rel(s.u, s.theta) <= 1e-10);
        CHECK(cancellation_j1_rel(s.u, s.theta) <= 1e-10);
    }
}
