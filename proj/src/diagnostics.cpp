#include "bousslab/diagnostics.hpp"

#include "bousslab/spectral_ops.hpp"
#include "bousslab/transform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bousslab {

using kernels::Params;

void CutoffFilter::validate() const
{
    if (!(a1 > 0.0) || !(a2 > 0.0))
        throw std::invalid_argument("CutoffFilter: thresholds must be positive");
}

SpectralField apply_cutoff(const SpectralField& f, const CutoffFilter& filt)
{
    filt.validate();
    const auto& g = f.grid;
    SpectralField out = f;
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < g.n2; ++j)
            if (std::abs(g.k1[i]) <= filt.a1 || std::abs(g.k2[j]) <= filt.a2)
                out(i, j) = cplx{0.0, 0.0};
    return out;
}

VectorField apply_cutoff(const VectorField& v, const CutoffFilter& filt)
{
    VectorField out;
    out.u1 = apply_cutoff(v.u1, filt);
    out.u2 = apply_cutoff(v.u2, filt);
    return out;
}

LinearState apply_cutoff(const LinearState& s, const CutoffFilter& filt)
{
    LinearState out(s.grid());
    out.t = s.t;
    out.u = apply_cutoff(s.u, filt);
    out.theta = apply_cutoff(s.theta, filt);
    return out;
}

void LyapunovConfig::validate() const
{
    kernels::validate(phys);
    filt.validate();
    const double cap1 = 0.5 * (phys.nu * filt.a2 * filt.a2 + phys.eta * filt.a1 * filt.a1);
    const double cap2 = 0.5 * std::sqrt(phys.nu * phys.eta) * filt.a1 * filt.a2;
    if (!(lambda > 0.0) || lambda > cap1 + 1e-15 || lambda > cap2 + 1e-15)
        throw std::invalid_argument("LyapunovConfig: lambda outside the admissible range");
}

double lyapunov_c0(const LyapunovConfig& cfg)
{
    cfg.validate();
    const double nu = cfg.phys.nu, eta = cfg.phys.eta;
    const double a1sq = cfg.filt.a1 * cfg.filt.a1, a2sq = cfg.filt.a2 * cfg.filt.a2;
    const double s = nu * a2sq + eta * a1sq;
    const double last = std::sqrt(s * eta * nu * a1sq * a2sq / cfg.lambda);
    return 0.25 * std::min({s, cfg.lambda, eta * a1sq, nu * a2sq, last});
}

VectorField exact_time_derivative(const LinearState& filtered, const Params& p)
{
    const auto& g = filtered.grid();
    VectorField ut(g);
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const double kx = g.k1[i], ky = g.k2[j];
            const double q2 = kx * kx + ky * ky;
            const cplx u1 = filtered.u.u1(i, j), u2 = filtered.u.u2(i, j);
            const cplx th = filtered.theta(i, j);
            if (q2 == 0.0) continue;
            ut.u1(i, j) = -p.nu * ky * ky * u1 - (kx * ky / q2) * th;
            ut.u2(i, j) = -p.nu * ky * ky * u2 + (kx * kx / q2) * th;
        }
    }
    return ut;
}

namespace {

double sq(double x) { return x * x; }

// || d1 d2 f || for a vector field
double d12_norm(const VectorField& v)
{
    const SpectralField a = derivative(derivative(v.u1, 1, 1), 2, 1);
    const SpectralField b = derivative(derivative(v.u2, 1, 1), 2, 1);
    return std::sqrt(sq(l2_norm(a)) + sq(l2_norm(b)));
}

double riesz1_norm(const VectorField& v)
{
    return std::sqrt(sq(l2_norm(riesz1(v.u1))) + sq(l2_norm(riesz1(v.u2))));
}

VectorField deriv(const VectorField& v, int axis)
{
    VectorField out;
    out.u1 = derivative(v.u1, axis, 1);
    out.u2 = derivative(v.u2, axis, 1);
    return out;
}

} // namespace

LyapunovReport lyapunov_AB(const LinearState& prev, const LinearState& mid,
                           const LinearState& next, const LyapunovConfig& cfg,
                           TimeDerivMode mode)
{
    cfg.validate();
    const LinearState fm = apply_cutoff(mid, cfg.filt);
    VectorField ut;
    if (mode == TimeDerivMode::exact) {
        ut = exact_time_derivative(fm, cfg.phys);
    } else {
        const double dt_fwd = mid.t - prev.t, dt_bwd = next.t - mid.t;
        if (!(dt_fwd > 0.0) || std::abs(dt_fwd - dt_bwd) > 1e-9 * dt_fwd)
            throw std::invalid_argument("lyapunov_AB: states must be uniformly spaced in time");
        const VectorField up = apply_cutoff(prev.u, cfg.filt);
        const VectorField un = apply_cutoff(next.u, cfg.filt);
        ut = (1.0 / (2.0 * dt_fwd)) * (un - up);
    }

    const double l = cfg.lambda;
    const double nu = cfg.phys.nu, eta = cfg.phys.eta;
    const double ut_sq = sq(l2_norm(ut));
    const double r1_sq = sq(riesz1_norm(fm.u));
    const double d12_sq = sq(d12_norm(fm.u));
    const double d1_sq = sq(l2_norm(deriv(fm.u, 1)));
    const double d2_sq = sq(l2_norm(deriv(fm.u, 2)));
    const double cross = inner(ut, fm.u);
    const double d2ut_sq = sq(l2_norm(deriv(ut, 2)));
    const double d1ut_sq = sq(l2_norm(deriv(ut, 1)));

    LyapunovReport rep;
    rep.t = mid.t;
    rep.lambda = l;
    rep.exact_dt = (mode == TimeDerivMode::exact);
    rep.A = ut_sq + r1_sq + eta * nu * d12_sq + l * nu * d2_sq + l * eta * d1_sq + 2.0 * l * cross;
    rep.B = nu * d2ut_sq + eta * d1ut_sq + l * eta * nu * d12_sq - l * ut_sq + l * r1_sq;
    rep.C0 = lyapunov_c0(cfg);
    rep.ratio = (rep.A != 0.0) ? rep.B / rep.A : 0.0;
    return rep;
}

std::vector<EnergyReport> energy_functional(const std::vector<DiagnosticsRecord>& records,
                                            double delta, const Params& p)
{
    if (!(delta > 0.0)) throw std::invalid_argument("energy_functional: delta must be positive");
    std::vector<EnergyReport> out;
    out.reserve(records.size());
    double run_max = 0.0, i_d2u = 0.0, i_d1th = 0.0, i_d1u2 = 0.0, e0 = 0.0;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        EnergyReport e;
        e.t = r.t;
        e.h2sq_u = sq(r.h2_u);
        e.h2sq_th = sq(r.h2_th);
        run_max = std::max(run_max, e.h2sq_u + e.h2sq_th);
        if (k > 0) {
            const auto& q = records[k - 1];
            const double h = r.t - q.t;
            i_d2u += 0.5 * h * (sq(q.d2u_h2) + sq(r.d2u_h2));
            i_d1th += 0.5 * h * (sq(q.d1th_h2) + sq(r.d1th_h2));
            i_d1u2 += 0.5 * h * (sq(q.d1u2_l2) + sq(r.d1u2_l2));
        }
        e.run_max = run_max;
        e.int_d2u_h2sq = i_d2u;
        e.int_d1th_h2sq = i_d1th;
        e.int_d1u2_l2sq = i_d1u2;
        e.E = run_max + 2.0 * p.nu * i_d2u + 2.0 * p.eta * i_d1th + delta * i_d1u2;
        if (k == 0) e0 = e.E;
        e.E0 = e0;
        out.push_back(e);
    }
    return out;
}

TripleProductResult triple_product_check(const SpectralField& f, const SpectralField& g,
                                         const SpectralField& h)
{
    TripleProductResult res;
    const double nf = l2_norm(f);
    const double ng = l2_norm(g), nd2g = deriv_l2_norm(g, 2);
    const double nh = l2_norm(h), nd1h = deriv_l2_norm(h, 1);
    if (nf == 0.0 || ng == 0.0 || nd2g == 0.0 || nh == 0.0 || nd1h == 0.0) return res;

    // integral of |f g h| by the collocation Riemann sum
    const PhysicalField pf = to_physical(f), pg = to_physical(g), ph = to_physical(h);
    double acc = 0.0;
    for (std::size_t i = 0; i < pf.v.size(); ++i)
        acc += std::abs(pf.v[i] * pg.v[i] * ph.v[i]);
    const auto& grid = f.grid;
    const double lhs = acc * grid.cellweight() / static_cast<double>(grid.size());

    res.applicable = true;
    res.ratio = lhs / (nf * std::sqrt(ng * nd2g) * std::sqrt(nh * nd1h));
    return res;
}

DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values,
                        double t_lo, double t_hi, FitMode mode)
{
    if (times.size() != values.size())
        throw std::invalid_argument("fit_decay_rate: series size mismatch");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        if (!(values[i] > 0.0))
            throw std::invalid_argument("fit_decay_rate: nonpositive value inside the window");
        x.push_back(mode == FitMode::algebraic ? std::log(times[i]) : times[i]);
        y.push_back(std::log(values[i]));
    }
    if (x.size() < 10)
        throw std::invalid_argument("fit_decay_rate: need at least 10 samples in the window");

    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("fit_decay_rate: degenerate abscissae");

    DecayFit fit;
    fit.n = static_cast<int>(x.size());
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    const double ybar = sy / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ss_res += sq(y[i] - (fit.intercept + fit.slope * x[i]));
        ss_tot += sq(y[i] - ybar);
    }
    fit.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double cancellation_i1_rel(const VectorField& u, const SpectralField& theta)
{
    const SpectralField om = vorticity(u);
    const double t1 = inner(derivative(theta, 1, 1), om);
    const double t2 = inner(derivative(u.u2, 1, 1), derivative(theta, 1, 1)) +
                      inner(derivative(u.u2, 2, 1), derivative(theta, 2, 1));
    const double scale = std::abs(t1) + std::abs(t2);
    return (scale > 0.0) ? std::abs(t1 - t2) / scale : 0.0;
}

double cancellation_j1_rel(const VectorField& u, const SpectralField& theta)
{
    const SpectralField om = vorticity(u);
    const SpectralField d1th = derivative(theta, 1, 1);
    const double t1 = inner(derivative(d1th, 1, 1), derivative(om, 1, 1)) +
                      inner(derivative(d1th, 2, 1), derivative(om, 2, 1));
    const SpectralField lap_u2 = derivative(u.u2, 1, 2) + derivative(u.u2, 2, 2);
    const SpectralField lap_th = derivative(theta, 1, 2) + derivative(theta, 2, 2);
    const double t2 = inner(lap_u2, lap_th);
    const double scale = std::abs(t1) + std::abs(t2);
    return (scale > 0.0) ? std::abs(t1 - t2) / scale : 0.0;
}

double energy_identity_drift(const std::vector<DiagnosticsRecord>& records, const Params& p)
{
    if (records.size() < 2)
        throw std::invalid_argument("energy_identity_drift: need at least 2 records");
    const double q0 = sq(records.front().l2_u) + sq(records.front().l2_th);
    if (!(q0 > 0.0)) throw std::invalid_argument("energy_identity_drift: zero initial energy");

    double i_d2u = 0.0, i_d1th = 0.0, worst = 0.0;
    for (std::size_t k = 1; k < records.size(); ++k) {
        const auto& a = records[k - 1];
        const auto& b = records[k];
        const double h = b.t - a.t;
        i_d2u += 0.5 * h * (sq(a.d2u_l2) + sq(b.d2u_l2));
        i_d1th += 0.5 * h * (sq(a.d1th_l2) + sq(b.d1th_l2));
        const double q = sq(b.l2_u) + sq(b.l2_th) + 2.0 * p.nu * i_d2u + 2.0 * p.eta * i_d1th;
        worst = std::max(worst, std::abs(q - q0) / q0);
    }
    return worst;
}

} // namespace bousslab
