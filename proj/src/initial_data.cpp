#include "bousslab/initial_data.hpp"

#include "bousslab/spectral_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace bousslab {

void rescale_h2(LinearState& s, double eps_h2)
{
    const double hu = h2_norm(s.u), ht = h2_norm(s.theta);
    const double total = std::sqrt(hu * hu + ht * ht);
    if (total == 0.0) throw std::runtime_error("rescale_h2: zero field cannot be rescaled");
    const double a = eps_h2 / total;
    s.u.u1 *= a;
    s.u.u2 *= a;
    s.theta *= a;
}

LinearState random_solenoidal(const FrequencyGrid& g, int band_lo, int band_hi, double eps_h2,
                              SplitMix64& rng)
{
    if (band_lo < 1 || band_hi < band_lo)
        throw std::invalid_argument("random_solenoidal: need 1 <= band_lo <= band_hi");

    LinearState s(g);
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const int band = std::max(std::abs(g.m1[i]), std::abs(g.m2[j]));
            if (band < band_lo || band > band_hi) continue;
            s.u.u1(i, j) = cplx{rng.normal(), rng.normal()};
            s.u.u2(i, j) = cplx{rng.normal(), rng.normal()};
            s.theta(i, j) = cplx{rng.normal(), rng.normal()};
        }
    }
    enforce_hermitian(s.u.u1);
    enforce_hermitian(s.u.u2);
    enforce_hermitian(s.theta);
    s.u.u1 = dealias(s.u.u1);
    s.u.u2 = dealias(s.u.u2);
    s.theta = dealias(s.theta);
    s.u = leray_project(s.u);
    remove_mean(s.u.u1);
    remove_mean(s.u.u2);
    remove_mean(s.theta);
    rescale_h2(s, eps_h2);
    return s;
}

LinearState taylor_green(const FrequencyGrid& g, double eps_h2)
{
    // sin x1 cos x2 = (e^{ix1} - e^{-ix1})(e^{ix2} + e^{-ix2}) / (4i)
    // four modes at (m1, m2) = (+-1, +-1), with L-scaled wavenumbers this
    // needs index +-1 on each axis.
    LinearState s(g);
    auto idx = [&](int m, int n) { return (m + n) % n; };
    const int ip = idx(1, g.n1), im = idx(-1, g.n1);
    const int jp = idx(1, g.n2), jm = idx(-1, g.n2);

    const cplx quarter{0.25, 0.0};
    const cplx iq{0.0, 0.25};
    // u1 = sin x1 cos x2: coeff(s1, s2) = s1/(4i) = -s1*i/4
    s.u.u1(ip, jp) = -iq;
    s.u.u1(ip, jm) = -iq;
    s.u.u1(im, jp) = iq;
    s.u.u1(im, jm) = iq;
    // u2 = -cos x1 sin x2: coeff = -s2/(4i) = s2*i/4
    s.u.u2(ip, jp) = iq;
    s.u.u2(ip, jm) = -iq;
    s.u.u2(im, jp) = iq;
    s.u.u2(im, jm) = -iq;
    // theta = sin x1 sin x2: coeff = -s1*s2/4
    s.theta(ip, jp) = -quarter;
    s.theta(ip, jm) = quarter;
    s.theta(im, jp) = quarter;
    s.theta(im, jm) = -quarter;

    s.u = leray_project(s.u); // exactly divergence-free when L1 = L2
    rescale_h2(s, eps_h2);
    return s;
}

} // namespace bousslab
