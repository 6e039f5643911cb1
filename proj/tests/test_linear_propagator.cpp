// Linear propagator: exact kernel evolution vs the per-mode RK4 oracle,
// semigroup and divergence preservation, Duhamel quadrature, wave residual.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bousslab/initial_data.hpp"
#include "bousslab/linear_propagator.hpp"
#include "bousslab/spectral_ops.hpp"

#include <cmath>
#include <sstream>

using namespace bousslab;
using kernels::Params;

namespace {

int pos(int m, int n) { return (m % n + n) % n; }

} // namespace

TEST_CASE("propagate_exact at t = 0 is the identity")
{
    const FrequencyGrid g = make_grid(8, 8, 1.0, 1.0);
    SplitMix64 rng(1);
    const LinearState s0 = random_solenoidal(g, 1, 2, 1.0, rng);
    const LinearState s1 = propagate_exact(s0, 0.0, Params{1.0, 1.0});
    CHECK(max_mode_rel_error(s0, s1, 1e-14) <= 1e-14);
}

TEST_CASE("axis mode: theta frozen, u2 decays like e^{-t}")
{
    const FrequencyGrid g = make_grid(8, 8, 1.0, 1.0);
    const Params p{1.0, 1.0};

    // theta-only data at k = (0, 1): u2 stays 0, theta stays put (K3 = 0, K5 = 1)
    LinearState s0(g);
    s0.theta(0, pos(1, 8)) = cplx{1.0, 0.0};
    s0.theta(0, pos(-1, 8)) = cplx{1.0, 0.0};
    const LinearState s1 = propagate_exact(s0, 2.0, p);
    CHECK(std::abs(s1.u.u2(0, pos(1, 8))) == 0.0);
    CHECK(s1.theta(0, pos(1, 8)).real() == doctest::Approx(1.0).epsilon(1e-14));

    // u2-only data at the same mode: u2(t) = e^{-t} u20, th(t) = (e^{-t}-1) u20
    LinearState w0(g);
    w0.u.u2(0, pos(1, 8)) = cplx{1.0, 0.0};
    w0.u.u2(0, pos(-1, 8)) = cplx{1.0, 0.0};
    const double t = 1.3;
    const LinearState w1 = propagate_exact(w0, t, p);
    CHECK(w1.u.u2(0, pos(1, 8)).real() == doctest::Approx(std::exp(-t)).epsilon(1e-12));
    CHECK(w1.theta(0, pos(1, 8)).real() == doctest::Approx(std::exp(-t) - 1.0).epsilon(1e-12));

    // the same closed form out of the RK4 oracle
    const LinearState w2 = ode_oracle(w0, t, p, 1e-3);
    CHECK(w2.u.u2(0, pos(1, 8)).real() == doctest::Approx(std::exp(-t)).epsilon(1e-10));
    CHECK(w2.theta(0, pos(1, 8)).real() == doctest::Approx(std::exp(-t) - 1.0).epsilon(1e-10));
}

TEST_CASE("propagate_exact matches the RK4 oracle on random data")
{
    const FrequencyGrid g = make_grid(8, 8, 1.0, 1.0);
    const Params p{1.0, 1.0};
    SplitMix64 rng(42);
    const LinearState s0 = random_solenoidal(g, 1, 4, 1.0, rng);
    const double floor_abs = 1e-13 * max_abs_coeff(s0);

    const double t = 0.7;
    const LinearState exact = propagate_exact(s0, t, p);
    const LinearState orc = ode_oracle(s0, t, p, 2e-4);
    CHECK(max_mode_rel_error(exact, orc, floor_abs) <= 1e-8);

    // divergence-free preservation
    CHECK(divergence_rel(exact.u) <= 1e-10);
}

TEST_CASE("ode_oracle_auto agrees with propagate_exact across stiffness")
{
    const FrequencyGrid g = make_grid(16, 16, 1.0, 1.0);
    const Params p{10.0, 0.1};
    SplitMix64 rng(43);
    const LinearState s0 = random_solenoidal(g, 1, 5, 1.0, rng);
    const double floor_abs = 1e-25 * max_abs_coeff(s0);

    const std::vector<double> ts{0.1, 1.0, 10.0};
    const auto orc = ode_oracle_auto(s0, ts, p);
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const LinearState exact = propagate_exact(s0, ts[k], p);
        CHECK(max_mode_rel_error(exact, orc[k], floor_abs) <= 1e-8);
    }
}

TEST_CASE("parallel width does not change the result")
{
    const FrequencyGrid g = make_grid(16, 16, 1.0, 1.0);
    const Params p{1.0, 2.0};
    SplitMix64 rng(55);
    const LinearState s0 = random_solenoidal(g, 1, 5, 1.0, rng);
    const LinearState a = propagate_exact(s0, 0.9, p, 1);
    const LinearState b = propagate_exact(s0, 0.9, p, 3);
    for (std::size_t i = 0; i < a.theta.c.size(); ++i) {
        CHECK(a.theta.c[i] == b.theta.c[i]);
        CHECK(a.u.u1.c[i] == b.u.u1.c[i]);
        CHECK(a.u.u2.c[i] == b.u.u2.c[i]);
    }
    const auto o1 = ode_oracle_auto(s0, {0.5}, p, 1e-25, 1);
    const auto o2 = ode_oracle_auto(s0, {0.5}, p, 1e-25, 4);
    for (std::size_t i = 0; i < o1[0].theta.c.size(); ++i)
        CHECK(o1[0].theta.c[i] == o2[0].theta.c[i]);
}

TEST_CASE("semigroup property")
{
    const FrequencyGrid g = make_grid(16, 16, 1.0, 1.0);
    const Params p{0.5, 2.0};
    SplitMix64 rng(7);
    const LinearState s0 = random_solenoidal(g, 1, 5, 1.0, rng);
    const double floor_abs = 1e-13 * max_abs_coeff(s0);

    const LinearState ab = propagate_exact(propagate_exact(s0, 1.1, p), 0.6, p);
    const LinearState c = propagate_exact(s0, 1.7, p);
    CHECK(max_mode_rel_error(ab, c, floor_abs) <= 1e-8);
}

TEST_CASE("RK4 oracle refines at fourth order")
{
    const FrequencyGrid g = make_grid(8, 8, 1.0, 1.0);
    const Params p{1.0, 1.0};
    SplitMix64 rng(3);
    const LinearState s0 = random_solenoidal(g, 1, 3, 1.0, rng);
    const double floor_abs = 1e-10 * max_abs_coeff(s0);

    const double t = 0.5;
    const LinearState exact = propagate_exact(s0, t, p);
    const double e1 = max_mode_rel_error(exact, ode_oracle(s0, t, p, 0.01), floor_abs);
    const double e2 = max_mode_rel_error(exact, ode_oracle(s0, t, p, 0.005), floor_abs);
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("ode_oracle rejects unstable steps")
{
    const FrequencyGrid g = make_grid(16, 16, 1.0, 1.0);
    LinearState s0(g);
    s0.theta(pos(1, 16), pos(1, 16)) = cplx{1.0, 0.0};
    s0.theta(pos(-1, 16), pos(-1, 16)) = cplx{1.0, 0.0};
    // max stiffness = 2 * 8^2 = 128; dt = 0.05 violates dt * S <= 1
    CHECK_THROWS_AS(ode_oracle(s0, 1.0, Params{1.0, 1.0}, 0.05), std::runtime_error);
    CHECK(oracle_stable_dt(g, Params{1.0, 1.0}) == doctest::Approx(0.5 / 128.0));
}

TEST_CASE("duhamel: zero forcing and the frozen scalar value")
{
    // grid scaled so mode (1,1) has S = 3, P = 2, i.e. roots (-2, -1)
    const double a = (10.0 - std::sqrt(28.0)) / 6.0; // xi1^2
    const double b = 3.0 - a;                        // xi2^2
    const FrequencyGrid g = make_grid(8, 8, 1.0 / std::sqrt(a), 1.0 / std::sqrt(b));
    const Params p{1.0, 1.0};

    {
        std::vector<SpectralField> zero(5, SpectralField(g));
        const SpectralField out = duhamel_apply(zero, 1.0, p);
        for (const auto& z : out.c) CHECK(std::abs(z) == 0.0);
    }

    // F == 1 on the (1,1) mode pair, t = 1:
    // integral of G1(1 - tau) dtau = 1/2 - e^{-1} + e^{-2}/2
    const int nsamp = 401;
    std::vector<SpectralField> forcing(nsamp, SpectralField(g));
    for (auto& f : forcing) {
        f(pos(1, 8), pos(1, 8)) = cplx{1.0, 0.0};
        f(pos(-1, 8), pos(-1, 8)) = cplx{1.0, 0.0};
    }
    const SpectralField out = duhamel_apply(forcing, 1.0, p);
    const double expected = 0.5 - std::exp(-1.0) + 0.5 * std::exp(-2.0);
    CHECK(out(pos(1, 8), pos(1, 8)).real() == doctest::Approx(expected).epsilon(1e-10));

    // mesh too coarse
    std::vector<SpectralField> two(2, SpectralField(g));
    CHECK_THROWS_AS(duhamel_apply(two, 1.0, p), std::invalid_argument);
}

TEST_CASE("duhamel reconstructs a manufactured solution")
{
    // f(t) = e^{-t} f0 solves f'' + S f' + P f = (1 - S + P) e^{-t} f0 per
    // mode; rebuild f from G1 f1 + G2 f0 + Duhamel(F) and compare.
    const FrequencyGrid g = make_grid(8, 8, 1.0, 1.0);
    const Params p{1.0, 1.0};
    SplitMix64 rng(19);
    SpectralField f0(g);
    for (auto& z : f0.c) z = cplx{rng.normal(), rng.normal()};
    enforce_hermitian(f0);
    f0 = dealias(f0);
    remove_mean(f0);

    const double t = 1.0;
    const int nsamp = 201;
    std::vector<SpectralField> forcing(nsamp, SpectralField(g));
    for (int s = 0; s < nsamp; ++s) {
        const double tau = t * s / (nsamp - 1);
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j) {
                const double kx = g.k1[i], ky = g.k2[j];
                if (kx == 0.0 && ky == 0.0) continue;
                const double S = kernels::char_s(kx, ky, p);
                const double P = kernels::char_p(kx, ky, p);
                forcing[s](i, j) = (1.0 - S + P) * std::exp(-tau) * f0(i, j);
            }
    }
    SpectralField rebuilt = duhamel_apply(forcing, t, p);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            const double kx = g.k1[i], ky = g.k2[j];
            if (kx == 0.0 && ky == 0.0) continue;
            const auto roots = kernels::char_roots(kx, ky, p);
            const auto gp = kernels::g_functions(roots.lambda1, roots.lambda2, t);
            rebuilt(i, j) += gp.g1 * (-f0(i, j)) + gp.g2 * f0(i, j); // f1 = -f0
        }

    double scale = 0.0;
    for (const auto& z : f0.c) scale = std::max(scale, std::abs(z));
    double worst = 0.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j) {
            if (g.k1[i] == 0.0 && g.k2[j] == 0.0) continue;
            worst = std::max(worst,
                             std::abs(rebuilt(i, j) - std::exp(-t) * f0(i, j)) / scale);
        }
    CHECK(worst <= 1e-6);
}

TEST_CASE("wave residual: convergence order, zero, and a negative control")
{
    const FrequencyGrid g = make_grid(8, 8, 1.0, 1.0);
    const Params p{1.0, 1.0};
    SplitMix64 rng(29);
    const LinearState s0 = random_solenoidal(g, 1, 3, 1.0, rng);

    auto sample = [&](double dt, int n, bool theta) {
        std::vector<SpectralField> snaps;
        std::vector<double> times;
        for (int k = 0; k <= n; ++k) {
            const LinearState s = propagate_exact(s0, k * dt, p);
            snaps.push_back(theta ? s.theta : s.u.u2);
            times.push_back(k * dt);
        }
        return std::pair{snaps, times};
    };

    auto [th_h, t_h] = sample(0.02, 10, true);
    auto [th_h2, t_h2] = sample(0.01, 20, true);
    const double r_h = wave_residual(th_h, t_h, p);
    const double r_h2 = wave_residual(th_h2, t_h2, p);
    CHECK(r_h / r_h2 == doctest::Approx(4.0).epsilon(0.15));

    auto [u2_h, s_h] = sample(0.02, 10, false);
    auto [u2_h2, s_h2] = sample(0.01, 20, false);
    CHECK(wave_residual(u2_h, s_h, p) / wave_residual(u2_h2, s_h2, p) ==
          doctest::Approx(4.0).epsilon(0.15));

    // zero trajectory
    std::vector<SpectralField> zeros(5, SpectralField(g));
    std::vector<double> zt{0.0, 0.1, 0.2, 0.3, 0.4};
    CHECK(wave_residual(zeros, zt, p) == 0.0);

    // heat-only decay (coupling removed) does NOT satisfy the wave equation
    std::vector<SpectralField> heat;
    std::vector<double> ht;
    for (int k = 0; k <= 10; ++k) {
        const double t = 0.02 * k;
        SpectralField f(g);
        for (int i = 0; i < g.n1; ++i)
            for (int j = 0; j < g.n2; ++j)
                f(i, j) = s0.theta(i, j) * std::exp(-p.nu * g.k2[j] * g.k2[j] * t);
        heat.push_back(f);
        ht.push_back(t);
    }
    // residual symbol for the decoupled decay is k1^2/|k|^2: order-one floor
    CHECK(wave_residual(heat, ht, p) > 1e-2);
    CHECK(wave_residual(heat, ht, p) > 50.0 * r_h2);

    // nonuniform spacing rejected
    std::vector<double> bad{0.0, 0.1, 0.25, 0.3, 0.4};
    CHECK_THROWS_AS(wave_residual(zeros, bad, p), std::invalid_argument);
}

TEST_CASE("snapshot writer emits the documented layout")
{
    const FrequencyGrid g = make_grid(4, 4, 1.0, 1.0);
    LinearState s(g);
    s.t = 0.5;
    std::ostringstream os;
    write_snapshot(os, s);
    const std::string text = os.str();
    CHECK(text.rfind("# schema: snapshot-v1\n", 0) == 0);
    CHECK(text.find("t,m1,m2,re_u1,im_u1,re_u2,im_u2,re_th,im_th") != std::string::npos);
}
