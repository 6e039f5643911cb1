#include "bousslab/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace bousslab::kernels {

void validate(const Params& p)
{
    if (!(p.nu > 0.0) || !(p.eta > 0.0))
        throw std::invalid_argument("Params: nu and eta must be strictly positive");
}

std::string region_name(Region r)
{
    switch (r) {
    case Region::S11: return "S11";
    case Region::S12: return "S12";
    case Region::S21: return "S21";
    case Region::S22: return "S22";
    case Region::AXIS1: return "AXIS1";
    case Region::ZERO: return "ZERO";
    }
    return "?";
}

static void require_nonzero(double xi1, double xi2)
{
    if (xi1 == 0.0 && xi2 == 0.0)
        throw std::invalid_argument("kernels: zero frequency rejected");
}

double char_s(double xi1, double xi2, const Params& p)
{
    return p.eta * xi1 * xi1 + p.nu * xi2 * xi2;
}

double char_p(double xi1, double xi2, const Params& p)
{
    const double q2 = xi1 * xi1 + xi2 * xi2;
    return p.nu * p.eta * xi1 * xi1 * xi2 * xi2 + xi1 * xi1 / q2;
}

RootPair char_roots(double xi1, double xi2, const Params& p)
{
    require_nonzero(xi1, xi2);
    validate(p);
    const double S = char_s(xi1, xi2, p);
    const double P = char_p(xi1, xi2, p);
    const double disc = S * S - 4.0 * P;

    if (disc < 0.0) {
        const double mu = 0.5 * std::sqrt(-disc);
        return {cplx{-0.5 * S, -mu}, cplx{-0.5 * S, mu}};
    }
    const double root = std::sqrt(disc);
    const double l1 = -0.5 * (S + root);
    // product form avoids the S - root cancellation when P << S^2
    const double l2 = (P == 0.0) ? 0.0 : -2.0 * P / (S + root);
    return {cplx{l1, 0.0}, cplx{l2, 0.0}};
}

// sinh(z)/z, series below |z| = 0.5 (plain evaluation has no cancellation
// either; the series just avoids 0/0 at z = 0).
static cplx sinhc(cplx z)
{
    if (std::abs(z) < 0.5) {
        const cplx z2 = z * z;
        return 1.0 + z2 / 6.0 * (1.0 + z2 / 20.0 * (1.0 + z2 / 42.0));
    }
    return std::sinh(z) / z;
}

GPair g_divided_difference(cplx l1, cplx l2, double t)
{
    const cplx e1 = std::exp(l1 * t), e2 = std::exp(l2 * t);
    const cplx dl = l1 - l2;
    return {(e1 - e2) / dl, (l1 * e2 - l2 * e1) / dl};
}

GPair g_limit_series(cplx l1, cplx l2, double t)
{
    const cplx lm = 0.5 * (l1 + l2);
    const cplx z = 0.5 * (l1 - l2) * t;
    const cplx em = std::exp(lm * t);
    const cplx g1 = em * t * sinhc(z);
    const cplx g2 = em * std::cosh(z) - lm * g1;
    return {g1, g2};
}

GPair g_functions(cplx l1, cplx l2, double t)
{
    if (t < 0.0) throw std::invalid_argument("g_functions: t must be >= 0");
    if (t == 0.0) return {cplx{0.0, 0.0}, cplx{1.0, 0.0}};
    const double scale = std::max({1.0, std::abs(l1), std::abs(l2)});
    if (std::abs(l1 - l2) > kDegenerateRelTol * scale)
        return g_divided_difference(l1, l2, t);
    return g_limit_series(l1, l2, t);
}

Region classify_region(double xi1, double xi2, const Params& p)
{
    require_nonzero(xi1, xi2);
    const double S = char_s(xi1, xi2, p);
    const double P = char_p(xi1, xi2, p);
    if (P >= (3.0 / 16.0) * S * S)
        return (S * S >= 4.0 * P) ? Region::S11 : Region::S12;
    return (std::abs(xi1) >= std::abs(xi2)) ? Region::S21 : Region::S22;
}

KernelEval kernel_symbols(double xi1, double xi2, double t, const Params& p)
{
    require_nonzero(xi1, xi2);
    if (t < 0.0) throw std::invalid_argument("kernel_symbols: t must be >= 0");

    KernelEval e;
    e.xi1 = xi1;
    e.xi2 = xi2;
    e.t = t;
    const RootPair r = char_roots(xi1, xi2, p);
    e.lambda1 = r.lambda1;
    e.lambda2 = r.lambda2;
    const GPair g = g_functions(r.lambda1, r.lambda2, t);
    e.g1 = g.g1;
    e.g2 = g.g2;

    const double q2 = xi1 * xi1 + xi2 * xi2;
    const double a = p.nu * xi2 * xi2, b = p.eta * xi1 * xi1;
    const double scale = std::max({1.0, std::abs(r.lambda1), std::abs(r.lambda2)});
    if (std::abs(r.lambda1 - r.lambda2) > kDegenerateRelTol * scale) {
        // G2 - a G1 written as a divided difference of (l + b) e^{l t} (via
        // Vieta l1 + l2 = -(a + b)); avoids the near-axis cancellation where
        // G2 -> 1 and a G1 -> 1 while K1 = e^{l1 t} is tiny.
        const cplx dl = r.lambda1 - r.lambda2;
        const cplx e1 = std::exp(r.lambda1 * t), e2 = std::exp(r.lambda2 * t);
        e.k1 = ((r.lambda1 + b) * e1 - (r.lambda2 + b) * e2) / dl;
        e.k5 = ((r.lambda1 + a) * e1 - (r.lambda2 + a) * e2) / dl;
    } else {
        e.k1 = g.g2 - a * g.g1;
        e.k5 = g.g2 - b * g.g1;
    }
    e.k2 = -(xi1 * xi2 / q2) * g.g1;
    e.k3 = (xi1 * xi1 / q2) * g.g1;
    e.k4 = -g.g1;
    e.region = classify_region(xi1, xi2, p);
    return e;
}

bool verify_root_bounds(double xi1, double xi2, const Params& p)
{
    constexpr double slack = 1e-10;
    const RootPair r = char_roots(xi1, xi2, p);
    const double S = char_s(xi1, xi2, p);
    const double P = char_p(xi1, xi2, p);
    const Region reg = classify_region(xi1, xi2, p);
    if (reg == Region::S11 || reg == Region::S12)
        return r.lambda1.real() <= -0.5 * S + slack && r.lambda2.real() <= -0.25 * S + slack;
    return r.lambda1.real() <= -0.75 * S + slack && r.lambda2.real() <= -P / S + slack;
}

std::string envelope_name(EnvelopeFamily f)
{
    switch (f) {
    case EnvelopeFamily::s1_k1k5: return "s1_k1k5";
    case EnvelopeFamily::s1_k2k3k4: return "s1_k2k3k4";
    case EnvelopeFamily::s2_k1k5: return "s2_k1k5";
    case EnvelopeFamily::s2_k2: return "s2_k2";
    case EnvelopeFamily::s2_k3: return "s2_k3";
    case EnvelopeFamily::s2_k4: return "s2_k4";
    }
    return "?";
}

static bool family_in_s1(EnvelopeFamily f)
{
    return f == EnvelopeFamily::s1_k1k5 || f == EnvelopeFamily::s1_k2k3k4;
}

// S2 bracket shared by K2/K3/K4: exp(-c0|xi|^2 t) + exp(-c0 a t) exp(-c0 b t),
// a = xi1^2 xi2^2/|xi|^2, b = xi1^2/|xi|^4.
static double s2_bracket(double xi1, double xi2, double t, double c0)
{
    const double q2 = xi1 * xi1 + xi2 * xi2;
    const double a = xi1 * xi1 * xi2 * xi2 / q2;
    const double b = xi1 * xi1 / (q2 * q2);
    return std::exp(-c0 * q2 * t) + std::exp(-c0 * (a + b) * t);
}

double envelope_value(EnvelopeFamily f, double xi1, double xi2, double t, const Params& p,
                      double C, double c0)
{
    const double q2 = xi1 * xi1 + xi2 * xi2;
    switch (f) {
    case EnvelopeFamily::s1_k1k5:
        return C * std::exp(-c0 * q2 * t);
    case EnvelopeFamily::s1_k2k3k4:
        return C * t * std::exp(-c0 * q2 * t);
    case EnvelopeFamily::s2_k1k5: {
        const double S = char_s(xi1, xi2, p);
        const double P = char_p(xi1, xi2, p);
        return C * (std::exp(-0.75 * S * t) + std::exp(-(P / S) * t));
    }
    case EnvelopeFamily::s2_k2:
        return C * (std::abs(xi1) * std::abs(xi2) / (q2 * q2)) * s2_bracket(xi1, xi2, t, c0);
    case EnvelopeFamily::s2_k3:
        return C * (xi1 * xi1 / (q2 * q2)) * s2_bracket(xi1, xi2, t, c0);
    case EnvelopeFamily::s2_k4:
        return C * (1.0 / q2) * s2_bracket(xi1, xi2, t, c0);
    }
    return 0.0;
}

EnvelopeReport verify_kernel_envelopes(double xi1, double xi2, double t, const Params& p,
                                       double C, double c0)
{
    if (!(C > 0.0) || !(c0 > 0.0))
        throw std::invalid_argument("verify_kernel_envelopes: C and c0 must be positive");
    const KernelEval e = kernel_symbols(xi1, xi2, t, p);
    EnvelopeReport rep;
    rep.region = e.region;
    if (e.region == Region::S11 || e.region == Region::S12) {
        const double env15 = envelope_value(EnvelopeFamily::s1_k1k5, xi1, xi2, t, p, C, c0);
        const double env234 = envelope_value(EnvelopeFamily::s1_k2k3k4, xi1, xi2, t, p, C, c0);
        rep.k1 = std::abs(e.k1) <= env15;
        rep.k5 = std::abs(e.k5) <= env15;
        rep.k2 = std::abs(e.k2) <= env234;
        rep.k3 = std::abs(e.k3) <= env234;
        rep.k4 = std::abs(e.k4) <= env234;
    } else {
        const double env15 = envelope_value(EnvelopeFamily::s2_k1k5, xi1, xi2, t, p, C, c0);
        rep.k1 = std::abs(e.k1) <= env15;
        rep.k5 = std::abs(e.k5) <= env15;
        rep.k2 = std::abs(e.k2) <= envelope_value(EnvelopeFamily::s2_k2, xi1, xi2, t, p, C, c0);
        rep.k3 = std::abs(e.k3) <= envelope_value(EnvelopeFamily::s2_k3, xi1, xi2, t, p, C, c0);
        rep.k4 = std::abs(e.k4) <= envelope_value(EnvelopeFamily::s2_k4, xi1, xi2, t, p, C, c0);
    }
    return rep;
}

Lattice3 make_lattice(int n_xi, int n_t, double xi_min, double xi_max, double t_max)
{
    Lattice3 lat;
    lat.xi1.resize(n_xi);
    lat.xi2.resize(n_xi);
    for (int i = 0; i < n_xi; ++i) {
        const double x = xi_min + (xi_max - xi_min) * i / (n_xi - 1);
        lat.xi1[i] = x;
        lat.xi2[i] = x;
    }
    lat.t.resize(n_t);
    for (int i = 0; i < n_t; ++i) lat.t[i] = t_max * i / (n_t - 1);
    return lat;
}

// |K| of the family's kernels at one point; K2/K3/K4 share a family in S1.
static double family_kernel_mag(EnvelopeFamily f, const KernelEval& e)
{
    switch (f) {
    case EnvelopeFamily::s1_k1k5:
    case EnvelopeFamily::s2_k1k5:
        return std::max(std::abs(e.k1), std::abs(e.k5));
    case EnvelopeFamily::s1_k2k3k4:
        return std::max({std::abs(e.k2), std::abs(e.k3), std::abs(e.k4)});
    case EnvelopeFamily::s2_k2: return std::abs(e.k2);
    case EnvelopeFamily::s2_k3: return std::abs(e.k3);
    case EnvelopeFamily::s2_k4: return std::abs(e.k4);
    }
    return 0.0;
}

// |K|/shape at one point, or 0 when the point is outside the family's region
// (or at the removable t = 0 limit of the t-weighted family).
static double point_ratio(EnvelopeFamily f, const Params& p, double c0, double x1, double x2,
                          double t)
{
    if (x1 == 0.0 && x2 == 0.0) return 0.0;
    if (t < 0.0) return 0.0;
    if (f == EnvelopeFamily::s1_k2k3k4 && t == 0.0) return 0.0;
    const Region reg = classify_region(x1, x2, p);
    const bool in_s1 = (reg == Region::S11 || reg == Region::S12);
    if (in_s1 != family_in_s1(f)) return 0.0;
    const double env = envelope_value(f, x1, x2, t, p, 1.0, c0);
    if (env <= 0.0) return 0.0;
    return family_kernel_mag(f, kernel_symbols(x1, x2, t, p)) / env;
}

struct SupInfo {
    double ratio = 0.0;
    long samples = 0;
    std::vector<std::array<double, 3>> top; // best lattice points, best first
};

// Sup of |K|/shape over the lattice restricted to the family's region, with
// the top candidate points kept for local refinement.
static SupInfo sup_ratio(EnvelopeFamily f, const Lattice3& lat, const Params& p, double c0,
                         std::size_t keep = 8)
{
    SupInfo info;
    std::vector<std::pair<double, std::array<double, 3>>> best;
    for (double x1 : lat.xi1) {
        for (double x2 : lat.xi2) {
            for (double t : lat.t) {
                const double r = point_ratio(f, p, c0, x1, x2, t);
                if (r <= 0.0) continue;
                ++info.samples;
                info.ratio = std::max(info.ratio, r);
                best.emplace_back(r, std::array<double, 3>{x1, x2, t});
                std::push_heap(best.begin(), best.end(),
                               [](const auto& a, const auto& b) { return a.first > b.first; });
                if (best.size() > keep) {
                    std::pop_heap(best.begin(), best.end(),
                                  [](const auto& a, const auto& b) { return a.first > b.first; });
                    best.pop_back();
                }
            }
        }
    }
    std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [r, pt] : best) info.top.push_back(pt);
    return info;
}

// The lattice only localizes the sup; ridges near the axes are sharper than
// the pinned mesh. Refine around a candidate with shrinking sub-grids.
static double polish_sup(EnvelopeFamily f, const Params& p, double c0,
                         const std::array<double, 3>& at, double dx1, double dx2, double dt)
{
    double cx1 = at[0], cx2 = at[1], ct = at[2];
    double best = point_ratio(f, p, c0, cx1, cx2, ct);
    double h1 = dx1, h2 = dx2, ht = dt;
    for (int round = 0; round < 4; ++round) {
        double bx1 = cx1, bx2 = cx2, bt = ct;
        for (int i = -2; i <= 2; ++i)
            for (int j = -2; j <= 2; ++j)
                for (int k = -2; k <= 2; ++k) {
                    const double x1 = cx1 + 0.5 * h1 * i, x2 = cx2 + 0.5 * h2 * j,
                                 t = ct + 0.5 * ht * k;
                    const double r = point_ratio(f, p, c0, x1, x2, t);
                    if (r > best) {
                        best = r;
                        bx1 = x1;
                        bx2 = x2;
                        bt = t;
                    }
                }
        cx1 = bx1;
        cx2 = bx2;
        ct = bt;
        h1 *= 0.4;
        h2 *= 0.4;
        ht *= 0.4;
    }
    return best;
}

static double refined_sup(EnvelopeFamily f, const Lattice3& lat, const Params& p, double c0,
                          const SupInfo& info)
{
    const double dx1 = (lat.xi1.size() > 1) ? lat.xi1[1] - lat.xi1[0] : 1.0;
    const double dx2 = (lat.xi2.size() > 1) ? lat.xi2[1] - lat.xi2[0] : 1.0;
    const double dt = (lat.t.size() > 1) ? lat.t[1] - lat.t[0] : 1.0;
    double sup = info.ratio;
    for (const auto& pt : info.top) sup = std::max(sup, polish_sup(f, p, c0, pt, dx1, dx2, dt));
    return sup;
}

EnvelopeFit fit_envelope(EnvelopeFamily f, const Lattice3& lat, const Params& p, double c_cap)
{
    EnvelopeFit fit;
    fit.family = f;

    if (f == EnvelopeFamily::s2_k1k5) {
        // rates pinned by the bound itself; only C is free
        const SupInfo info = sup_ratio(f, lat, p, 1.0);
        const double sup = refined_sup(f, lat, p, 1.0, info);
        fit.c0 = 1.0;
        fit.max_ratio = sup;
        fit.C = 1.1 * sup;
        fit.samples = info.samples;
        fit.finite = std::isfinite(sup) && fit.C <= c_cap && sup > 0.0;
        return fit;
    }

    // scan decay rates from strong to weak; keep the strongest that fits
    for (double c0 : {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.01, 3e-3, 1e-3}) {
        const SupInfo info = sup_ratio(f, lat, p, c0);
        if (info.samples == 0) break;
        if (!std::isfinite(info.ratio) || info.ratio <= 0.0 || 1.1 * info.ratio > c_cap)
            continue;
        const double sup = refined_sup(f, lat, p, c0, info);
        if (1.1 * sup > c_cap) continue;
        fit.c0 = c0;
        fit.max_ratio = sup;
        fit.C = 1.1 * sup;
        fit.samples = info.samples;
        fit.finite = true;
        return fit;
    }
    return fit;
}

bool validate_envelope(const EnvelopeFit& fit, const Lattice3& lat, const Params& p)
{
    if (!fit.finite) return false;
    const SupInfo info = sup_ratio(fit.family, lat, p, fit.c0);
    return info.ratio <= fit.C;
}

void write_kernel_table(std::ostream& os, const std::vector<KernelEval>& rows)
{
    os << "# schema: kerneval-v1\n";
    os << "xi1,xi2,t,region,re_l1,im_l1,re_l2,im_l2,K1,K2,K3,K4,K5\n";
    os.precision(17);
    for (const auto& e : rows) {
        os << e.xi1 << ',' << e.xi2 << ',' << e.t << ',' << region_name(e.region) << ','
           << e.lambda1.real() << ',' << e.lambda1.imag() << ',' << e.lambda2.real() << ','
           << e.lambda2.imag() << ',' << e.k1.real() << ',' << e.k2.real() << ',' << e.k3.real()
           << ',' << e.k4.real() << ',' << e.k5.real() << '\n';
    }
}

} // namespace bousslab::kernels
