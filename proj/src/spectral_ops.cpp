#include "bousslab/spectral_ops.hpp"

#include "bousslab/transform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bousslab {

SpectralField derivative(const SpectralField& f, int axis, int order)
{
    if (axis != 1 && axis != 2) throw std::invalid_argument("derivative: axis must be 1 or 2");
    if (order < 1) throw std::invalid_argument("derivative: order must be >= 1");

    const auto& g = f.grid;
    SpectralField out(g);
    const bool odd = (order % 2) != 0;
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const double k = (axis == 1) ? g.k1[i] : g.k2[j];
            const int m = (axis == 1) ? g.m1[i] : g.m2[j];
            const int n = (axis == 1) ? g.n1 : g.n2;
            if (odd && m == -n / 2) continue; // unpaired Nyquist mode
            cplx mult{1.0, 0.0};
            const cplx ik{0.0, k};
            for (int p = 0; p < order; ++p) mult *= ik;
            out(i, j) = mult * f(i, j);
        }
    }
    return out;
}

SpectralField inverse_laplacian(const SpectralField& f)
{
    const auto& g = f.grid;
    SpectralField out(g);
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const double k2 = g.k1[i] * g.k1[i] + g.k2[j] * g.k2[j];
            out(i, j) = (k2 == 0.0) ? cplx{0.0, 0.0} : -f(i, j) / k2;
        }
    }
    return out;
}

VectorField leray_project(const VectorField& v)
{
    if (!(v.u1.grid == v.u2.grid))
        throw std::invalid_argument("leray_project: components on different grids");
    const auto& g = v.grid();
    VectorField out(g);
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const double kx = g.k1[i], ky = g.k2[j];
            const double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) continue; // zero-mode convention: P acts as 0
            // exact on the axes: the annihilated component must be a hard
            // zero, not a roundoff residue (the kernel representation and the
            // per-mode equations only agree on the divergence-free manifold)
            if (kx == 0.0) {
                out.u1(i, j) = v.u1(i, j);
            } else if (ky == 0.0) {
                out.u2(i, j) = v.u2(i, j);
            } else {
                const cplx dot = (kx * v.u1(i, j) + ky * v.u2(i, j)) / k2;
                out.u1(i, j) = v.u1(i, j) - kx * dot;
                out.u2(i, j) = v.u2(i, j) - ky * dot;
            }
        }
    }
    return out;
}

SpectralField divergence(const VectorField& v)
{
    if (!(v.u1.grid == v.u2.grid))
        throw std::invalid_argument("divergence: components on different grids");
    const auto& g = v.grid();
    SpectralField out(g);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            out(i, j) = cplx{0.0, g.k1[i]} * v.u1(i, j) + cplx{0.0, g.k2[j]} * v.u2(i, j);
    return out;
}

SpectralField dealias(const SpectralField& f)
{
    const auto& g = f.grid;
    SpectralField out = f;
    const double c1 = g.n1 / 3.0, c2 = g.n2 / 3.0;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            if (std::abs(g.m1[i]) > c1 || std::abs(g.m2[j]) > c2) out(i, j) = cplx{0.0, 0.0};
    return out;
}

VectorField dealias(const VectorField& v)
{
    VectorField out;
    out.u1 = dealias(v.u1);
    out.u2 = dealias(v.u2);
    return out;
}

double aniso_norm(const SpectralField& f, double s, double sigma, int axis)
{
    if (axis != 1 && axis != 2) throw std::invalid_argument("aniso_norm: axis must be 1 or 2");
    const auto& g = f.grid;

    double cmax = 0.0;
    for (const auto& z : f.c) cmax = std::max(cmax, std::abs(z));
    const double singular_tol = 1e-14 * cmax;

    double acc = 0.0;
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const double kx = g.k1[i], ky = g.k2[j];
            const double k2 = kx * kx + ky * ky;
            const double ka = (axis == 1) ? kx : ky;
            const double amp = std::abs(f(i, j));

            const bool singular = (sigma > 0.0 && ka == 0.0) || (s < 0.0 && k2 == 0.0);
            if (singular) {
                if (amp > singular_tol)
                    throw std::invalid_argument(
                        "aniso_norm: nonzero amplitude on the singular weight set");
                continue;
            }
            if (k2 == 0.0) {
                if (s == 0.0 && sigma == 0.0) acc += amp * amp; // plain L2 keeps the mean
                continue;                                       // |k|^{2s} = 0 for s > 0
            }
            double w = 1.0;
            if (s != 0.0) w *= std::pow(k2, s);
            if (sigma != 0.0) w *= std::pow(ka * ka, -sigma);
            acc += w * amp * amp;
        }
    }
    return std::sqrt(acc * g.cellweight());
}

double l2_norm(const SpectralField& f) { return aniso_norm(f, 0.0, 0.0, 1); }

double l2_norm(const VectorField& v)
{
    const double a = l2_norm(v.u1), b = l2_norm(v.u2);
    return std::sqrt(a * a + b * b);
}

double hs_seminorm(const SpectralField& f, double s) { return aniso_norm(f, s, 0.0, 1); }

// Weighted sum helper: sqrt(cellweight * sum w(|k|^2, k1, k2) |c|^2).
template <typename W> static double weighted_norm(const SpectralField& f, W w)
{
    const auto& g = f.grid;
    double acc = 0.0;
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const double kx = g.k1[i], ky = g.k2[j];
            const double a = std::abs(f(i, j));
            acc += w(kx * kx + ky * ky, kx, ky) * a * a;
        }
    }
    return std::sqrt(acc * g.cellweight());
}

double h1_norm(const SpectralField& f)
{
    return weighted_norm(f, [](double k2, double, double) { return 1.0 + k2; });
}

double h2_norm(const SpectralField& f)
{
    return weighted_norm(f, [](double k2, double, double) { return 1.0 + k2 + k2 * k2; });
}

double h1_norm(const VectorField& v)
{
    const double a = h1_norm(v.u1), b = h1_norm(v.u2);
    return std::sqrt(a * a + b * b);
}

double h2_norm(const VectorField& v)
{
    const double a = h2_norm(v.u1), b = h2_norm(v.u2);
    return std::sqrt(a * a + b * b);
}

double deriv_l2_norm(const SpectralField& f, int axis)
{
    return weighted_norm(f, [axis](double, double kx, double ky) {
        const double ka = (axis == 1) ? kx : ky;
        return ka * ka;
    });
}

double deriv_h2_norm(const SpectralField& f, int axis)
{
    return weighted_norm(f, [axis](double k2, double kx, double ky) {
        const double ka = (axis == 1) ? kx : ky;
        return ka * ka * (1.0 + k2 + k2 * k2);
    });
}

double deriv_l2_norm(const VectorField& v, int axis)
{
    const double a = deriv_l2_norm(v.u1, axis), b = deriv_l2_norm(v.u2, axis);
    return std::sqrt(a * a + b * b);
}

double deriv_h2_norm(const VectorField& v, int axis)
{
    const double a = deriv_h2_norm(v.u1, axis), b = deriv_h2_norm(v.u2, axis);
    return std::sqrt(a * a + b * b);
}

double inner(const SpectralField& f, const SpectralField& g)
{
    if (!(f.grid == g.grid)) throw std::invalid_argument("inner: grid mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.c.size(); ++i)
        acc += (f.c[i] * std::conj(g.c[i])).real();
    return acc * f.grid.cellweight();
}

double inner(const VectorField& a, const VectorField& b)
{
    return inner(a.u1, b.u1) + inner(a.u2, b.u2);
}

SpectralField riesz1(const SpectralField& f)
{
    const auto& g = f.grid;
    SpectralField out(g);
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const double kx = g.k1[i], ky = g.k2[j];
            const double kn = std::sqrt(kx * kx + ky * ky);
            out(i, j) = (kn == 0.0) ? cplx{0.0, 0.0} : f(i, j) * (std::abs(kx) / kn);
        }
    }
    return out;
}

SpectralField pointwise_product(const SpectralField& f, const SpectralField& g)
{
    if (!(f.grid == g.grid)) throw std::invalid_argument("pointwise_product: grid mismatch");
    PhysicalField pf = to_physical(f), pg = to_physical(g);
    PhysicalField prod(f.grid);
    for (std::size_t i = 0; i < prod.v.size(); ++i) prod.v[i] = pf.v[i] * pg.v[i];
    return dealias(to_spectral(prod));
}

double divergence_rel(const VectorField& v)
{
    const auto& g = v.grid();
    double worst = 0.0;
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const double kx = g.k1[i], ky = g.k2[j];
            const double kn = std::sqrt(kx * kx + ky * ky);
            const double vn = std::hypot(std::abs(v.u1(i, j)), std::abs(v.u2(i, j)));
            if (kn == 0.0 || vn == 0.0) continue;
            const double d = std::abs(cplx{0.0, kx} * v.u1(i, j) + cplx{0.0, ky} * v.u2(i, j));
            worst = std::max(worst, d / (kn * vn));
        }
    }
    return worst;
}

void remove_mean(SpectralField& f) { f(0, 0) = cplx{0.0, 0.0}; }

} // namespace bousslab
