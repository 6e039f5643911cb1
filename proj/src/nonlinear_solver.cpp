#include "bousslab/nonlinear_solver.hpp"

#include "bousslab/parallel.hpp"
#include "bousslab/spectral_ops.hpp"
#include "bousslab/transform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bousslab {

using kernels::Params;

LinearState NonlinearState::as_linear() const
{
    LinearState s(grid());
    s.u = u;
    s.theta = theta;
    s.t = t;
    return s;
}

void SimConfig::validate() const
{
    kernels::validate(phys);
    if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be positive");
    if (!(T >= dt) && T != 0.0) throw std::invalid_argument("SimConfig: T must be >= dt or 0");
    if (!(delta > 0.0)) throw std::invalid_argument("SimConfig: delta must be positive");
    if (!(lyap_lambda > 0.0)) throw std::invalid_argument("SimConfig: lambda must be positive");
    if (!(a1 > 0.0) || !(a2 > 0.0)) throw std::invalid_argument("SimConfig: a1, a2 must be positive");
    if (cadence < 1) throw std::invalid_argument("SimConfig: cadence must be >= 1");
    if (threads < 1) throw std::invalid_argument("SimConfig: threads must be >= 1");
}

// One fused pass over the lattice; records are emitted every step on fine
// cadences, so the fifteen norms share a single loop.
DiagnosticsRecord make_record(const NonlinearState& s)
{
    const auto& g = s.grid();
    double su = 0, sth = 0, h1u = 0, h1th = 0, h2u = 0, h2th = 0;
    double d2u = 0, d1th = 0, d2uh2 = 0, d1thh2 = 0, d1u2 = 0;
    double om2 = 0, gom2 = 0, div_worst = 0;
    for (int i = 0; i < g.n1; ++i) {
        const double kx = g.k1[i];
        for (int j = 0; j < g.n2; ++j) {
            const double ky = g.k2[j];
            const double k2 = kx * kx + ky * ky;
            const double w2 = 1.0 + k2 + k2 * k2;
            const cplx u1 = s.u.u1(i, j), u2 = s.u.u2(i, j), th = s.theta(i, j);
            const double a1 = std::norm(u1), a2 = std::norm(u2), at = std::norm(th);
            const double au = a1 + a2;
            su += au;
            sth += at;
            h1u += (1.0 + k2) * au;
            h1th += (1.0 + k2) * at;
            h2u += w2 * au;
            h2th += w2 * at;
            d2u += ky * ky * au;
            d1th += kx * kx * at;
            d2uh2 += ky * ky * w2 * au;
            d1thh2 += kx * kx * w2 * at;
            d1u2 += kx * kx * a2;
            const cplx om = cplx{0.0, kx} * u2 - cplx{0.0, ky} * u1;
            om2 += std::norm(om);
            gom2 += k2 * std::norm(om);
            if (k2 > 0.0 && au > 0.0) {
                const double d = std::abs(cplx{0.0, kx} * u1 + cplx{0.0, ky} * u2);
                div_worst = std::max(div_worst, d / std::sqrt(k2 * au));
            }
        }
    }
    const double cw = g.cellweight();
    DiagnosticsRecord r;
    r.t = s.t;
    r.l2_u = std::sqrt(su * cw);
    r.l2_th = std::sqrt(sth * cw);
    r.h1_u = std::sqrt(h1u * cw);
    r.h1_th = std::sqrt(h1th * cw);
    r.h2_u = std::sqrt(h2u * cw);
    r.h2_th = std::sqrt(h2th * cw);
    r.d2u_l2 = std::sqrt(d2u * cw);
    r.d1th_l2 = std::sqrt(d1th * cw);
    r.d2u_h2 = std::sqrt(d2uh2 * cw);
    r.d1th_h2 = std::sqrt(d1thh2 * cw);
    r.d1u2_l2 = std::sqrt(d1u2 * cw);
    r.omega_l2 = std::sqrt(om2 * cw);
    r.grad_omega_l2 = std::sqrt(gom2 * cw);
    r.div_rel = div_worst;
    return r;
}

SpectralField vorticity(const VectorField& u)
{
    SpectralField om = derivative(u.u2, 1, 1);
    om -= derivative(u.u1, 2, 1);
    return om;
}

namespace {

bool finite_field(const SpectralField& f)
{
    for (const auto& z : f.c)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

} // namespace

Tendency nonlinear_tendency(const NonlinearState& s, bool linear_only, int threads)
{
    const auto& g = s.grid();
    Tendency out;
    out.du = VectorField(g);
    out.dth = SpectralField(g);

    SpectralField prods[5];
    if (!linear_only) {
        // divergence form u.grad f = div(u f) for solenoidal u: five products,
        // eight transforms per tendency; independent transforms run in
        // parallel on disjoint buffers (bit-identical for any width)
        PhysicalField phys[3];
        {
            const SpectralField* in[3] = {&s.u.u1, &s.u.u2, &s.theta};
            parallel_for(3, threads, [&](int k) { phys[k] = to_physical(*in[k]); });
        }
        const PhysicalField& u1p = phys[0];
        const PhysicalField& u2p = phys[1];
        const PhysicalField& thp = phys[2];
        double speed_sq = 0.0;
        for (std::size_t i = 0; i < u1p.v.size(); ++i)
            speed_sq = std::max(speed_sq,
                                u1p.v[i] * u1p.v[i] + u2p.v[i] * u2p.v[i]);
        out.umax = std::sqrt(speed_sq);

        const PhysicalField* pairs[5][2] = {
            {&u1p, &u1p}, {&u1p, &u2p}, {&u2p, &u2p}, {&u1p, &thp}, {&u2p, &thp}};
        parallel_for(5, threads, [&](int k) {
            PhysicalField r(g);
            for (std::size_t i = 0; i < r.v.size(); ++i)
                r.v[i] = pairs[k][0]->v[i] * pairs[k][1]->v[i];
            prods[k] = to_spectral(r);
        });
    }

    // fused assembly: advection derivatives, buoyancy, Leray projection and
    // the 2/3 dealias mask in one pass (pressure never formed)
    const double band1 = g.n1 / 3.0, band2 = g.n2 / 3.0;
    for (int i = 0; i < g.n1; ++i) {
        if (std::abs(g.m1[i]) > band1) continue;
        const double kx = g.k1[i];
        for (int j = 0; j < g.n2; ++j) {
            if (std::abs(g.m2[j]) > band2) continue;
            const double ky = g.k2[j];
            const double k2 = kx * kx + ky * ky;
            const std::size_t ix = g.at(i, j);

            cplx v1{0.0, 0.0}, v2 = s.theta.c[ix], vt{0.0, 0.0};
            if (!linear_only) {
                const cplx ikx{0.0, kx}, iky{0.0, ky};
                v1 -= ikx * prods[0].c[ix] + iky * prods[1].c[ix];
                v2 -= ikx * prods[1].c[ix] + iky * prods[2].c[ix];
                vt -= ikx * prods[3].c[ix] + iky * prods[4].c[ix];
            }
            if (k2 == 0.0) {
                out.dth.c[ix] = cplx{0.0, 0.0}; // mean-free preservation
                continue;                        // projection acts as 0
            }
            if (kx == 0.0) {
                v2 = cplx{0.0, 0.0};
            } else if (ky == 0.0) {
                v1 = cplx{0.0, 0.0};
            } else {
                const cplx dot = (kx * v1 + ky * v2) / k2;
                v1 -= kx * dot;
                v2 -= ky * dot;
            }
            out.du.u1.c[ix] = v1;
            out.du.u2.c[ix] = v2;
            out.dth.c[ix] = vt - s.u.u2.c[ix];
        }
    }

    if (!finite_field(out.du.u1) || !finite_field(out.du.u2) || !finite_field(out.dth)) {
        std::ostringstream msg;
        msg << "nonlinear_tendency: NaN/Inf at t = " << s.t;
        throw NumericalError(msg.str());
    }
    return out;
}

Stepper::Stepper(const FrequencyGrid& g, const SimConfig& cfg) : grid_(g), cfg_(cfg)
{
    cfg_.validate();
    const std::size_t n = g.size();
    eu_h_.resize(n);
    eu_h2_.resize(n);
    eth_h_.resize(n);
    eth_h2_.resize(n);
    cn_den_u_.resize(n);
    cn_num_u_.resize(n);
    cn_den_th_.resize(n);
    cn_num_th_.resize(n);

    const double h = cfg.dt, nu = cfg.phys.nu, eta = cfg.phys.eta;
    const double band1 = g.n1 / 3.0, band2 = g.n2 / 3.0;
    for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
            const std::size_t ix = g.at(i, j);
            const double lu = -nu * g.k2[j] * g.k2[j];  // velocity dissipation symbol
            const double lt = -eta * g.k1[i] * g.k1[i]; // temperature dissipation symbol
            eu_h_[ix] = std::exp(lu * h);
            eu_h2_[ix] = std::exp(0.5 * lu * h);
            eth_h_[ix] = std::exp(lt * h);
            eth_h2_[ix] = std::exp(0.5 * lt * h);
            cn_den_u_[ix] = 1.0 / (1.0 - 0.5 * h * lu);
            cn_num_u_[ix] = 1.0 + 0.5 * h * lu;
            cn_den_th_[ix] = 1.0 / (1.0 - 0.5 * h * lt);
            cn_num_th_[ix] = 1.0 + 0.5 * h * lt;
            if (std::abs(g.m1[i]) <= band1 && std::abs(g.m2[j]) <= band2)
                kmax_ = std::max(kmax_, std::hypot(g.k1[i], g.k2[j]));
        }
    }
}

void Stepper::reset() { have_prev_ = false; }

namespace {

// y += a * x
void axpy(SpectralField& y, double a, const SpectralField& x)
{
    for (std::size_t i = 0; i < y.c.size(); ++i) y.c[i] += a * x.c[i];
}

// y = diag(e) * x  (per-mode real multiplier)
void apply_mult(SpectralField& y, const std::vector<double>& e)
{
    for (std::size_t i = 0; i < y.c.size(); ++i) y.c[i] *= e[i];
}

} // namespace

NonlinearState Stepper::step(const NonlinearState& s)
{
    const Tendency t0 = nonlinear_tendency(s, cfg_.linear_only, cfg_.threads);
    if (!cfg_.linear_only && t0.umax * kmax_ * cfg_.dt > 0.5) {
        const double sug = 0.45 / (t0.umax * kmax_);
        std::ostringstream msg;
        msg << "CFL violation at t = " << s.t << ": dt*max|u|*max|xi| = "
            << t0.umax * kmax_ * cfg_.dt << " > 0.5; try dt <= " << sug;
        throw CflError(msg.str(), sug);
    }
    return (cfg_.scheme == Scheme::if_rk4) ? step_ifrk4(s, t0) : step_imex_cn(s, t0);
}

NonlinearState Stepper::step_ifrk4(const NonlinearState& s, const Tendency& t0)
{
    const double h = cfg_.dt;
    auto stage = [&](const NonlinearState& base, const Tendency& k, double coef,
                     bool half_base, bool half_k) {
        NonlinearState r = base;
        if (half_base) {
            apply_mult(r.u.u1, eu_h2_);
            apply_mult(r.u.u2, eu_h2_);
            apply_mult(r.theta, eth_h2_);
        } else {
            apply_mult(r.u.u1, eu_h_);
            apply_mult(r.u.u2, eu_h_);
            apply_mult(r.theta, eth_h_);
        }
        SpectralField k1 = k.du.u1, k2 = k.du.u2, kt = k.dth;
        if (half_k) {
            apply_mult(k1, eu_h2_);
            apply_mult(k2, eu_h2_);
            apply_mult(kt, eth_h2_);
        }
        axpy(r.u.u1, coef, k1);
        axpy(r.u.u2, coef, k2);
        axpy(r.theta, coef, kt);
        return r;
    };

    // u_a = E_(h/2) (u + (h/2) k1)
    NonlinearState ua = stage(s, t0, 0.5 * h, true, true);
    ua.t = s.t + 0.5 * h;
    const Tendency t1 = nonlinear_tendency(ua, cfg_.linear_only, cfg_.threads);

    // u_b = E_(h/2) u + (h/2) k2
    NonlinearState ub = stage(s, t1, 0.5 * h, true, false);
    ub.t = s.t + 0.5 * h;
    const Tendency t2 = nonlinear_tendency(ub, cfg_.linear_only, cfg_.threads);

    // u_c = E_h u + h E_(h/2) k3
    NonlinearState uc = stage(s, t2, h, false, true);
    uc.t = s.t + h;
    const Tendency t3 = nonlinear_tendency(uc, cfg_.linear_only, cfg_.threads);

    // combine: u+ = E_h u + h/6 (E_h k1 + 2 E_(h/2) (k2 + k3) + k4)
    NonlinearState out(grid_);
    out.t = s.t + h;
    out.u.u1 = s.u.u1;
    out.u.u2 = s.u.u2;
    out.theta = s.theta;
    apply_mult(out.u.u1, eu_h_);
    apply_mult(out.u.u2, eu_h_);
    apply_mult(out.theta, eth_h_);

    SpectralField a1 = t0.du.u1, a2 = t0.du.u2, at = t0.dth;
    apply_mult(a1, eu_h_);
    apply_mult(a2, eu_h_);
    apply_mult(at, eth_h_);
    axpy(out.u.u1, h / 6.0, a1);
    axpy(out.u.u2, h / 6.0, a2);
    axpy(out.theta, h / 6.0, at);

    SpectralField b1 = t1.du.u1 + t2.du.u1, b2 = t1.du.u2 + t2.du.u2, bt = t1.dth + t2.dth;
    apply_mult(b1, eu_h2_);
    apply_mult(b2, eu_h2_);
    apply_mult(bt, eth_h2_);
    axpy(out.u.u1, h / 3.0, b1);
    axpy(out.u.u2, h / 3.0, b2);
    axpy(out.theta, h / 3.0, bt);

    axpy(out.u.u1, h / 6.0, t3.du.u1);
    axpy(out.u.u2, h / 6.0, t3.du.u2);
    axpy(out.theta, h / 6.0, t3.dth);
    return out;
}

NonlinearState Stepper::step_imex_cn(const NonlinearState& s, const Tendency& t0)
{
    const double h = cfg_.dt;
    const Tendency& tp = have_prev_ ? prev_ : t0; // first step falls back to Euler weights

    NonlinearState out(grid_);
    out.t = s.t + h;
    for (std::size_t ix = 0; ix < grid_.size(); ++ix) {
        const cplx nu_expl = 1.5 * t0.du.u1.c[ix] - 0.5 * tp.du.u1.c[ix];
        const cplx nv_expl = 1.5 * t0.du.u2.c[ix] - 0.5 * tp.du.u2.c[ix];
        const cplx nt_expl = 1.5 * t0.dth.c[ix] - 0.5 * tp.dth.c[ix];
        out.u.u1.c[ix] = cn_den_u_[ix] * (cn_num_u_[ix] * s.u.u1.c[ix] + h * nu_expl);
        out.u.u2.c[ix] = cn_den_u_[ix] * (cn_num_u_[ix] * s.u.u2.c[ix] + h * nv_expl);
        out.theta.c[ix] = cn_den_th_[ix] * (cn_num_th_[ix] * s.theta.c[ix] + h * nt_expl);
    }
    prev_ = t0;
    have_prev_ = true;
    return out;
}

RunResult run(const SimConfig& cfg, const NonlinearState& init)
{
    cfg.validate();
    if (init.grid().n1 != cfg.n1 || init.grid().n2 != cfg.n2 || init.grid().L1 != cfg.L1 ||
        init.grid().L2 != cfg.L2)
        throw std::invalid_argument("run: initial state grid does not match config");

    RunResult res;
    res.final_state = init;
    {
        const double hu = h2_norm(init.u), ht = h2_norm(init.theta);
        res.e0 = hu * hu + ht * ht;
    }
    res.records.push_back(make_record(init));
    if (cfg.T == 0.0) return res;

    Stepper stepper(init.grid(), cfg);
    const long nsteps = std::lround(cfg.T / cfg.dt);
    NonlinearState s = init;
    for (long n = 0; n < nsteps; ++n) {
        try {
            s = stepper.step(s);
        } catch (const NumericalError&) {
            res.instability = true;
            res.final_state = s;
            return res;
        }
        if (n % cfg.cadence == cfg.cadence - 1 || n == nsteps - 1) {
            DiagnosticsRecord r = make_record(s);
            res.records.push_back(r);
            const double e = r.h2_u * r.h2_u + r.h2_th * r.h2_th;
            if (!(e <= 1e3 * res.e0)) { // NaN also lands here
                res.instability = true;
                res.final_state = s;
                return res;
            }
        }
    }
    res.final_state = s;
    return res;
}

VorticityRecord vorticity_diagnostics(const NonlinearState& s)
{
    VorticityRecord r;
    const SpectralField om = vorticity(s.u);
    r.omega_l2 = l2_norm(om);
    r.grad_omega_l2 = hs_seminorm(om, 1.0);

    // residual = curl(du) + u.grad om - d1 th; curl of the dissipation term
    // cancels nu d22 om exactly, so only the tendency part appears.
    const Tendency tend = nonlinear_tendency(s);
    SpectralField res = vorticity(tend.du);
    const PhysicalField u1p = to_physical(s.u.u1);
    const PhysicalField u2p = to_physical(s.u.u2);
    {
        const PhysicalField d1om = to_physical(derivative(om, 1, 1));
        const PhysicalField d2om = to_physical(derivative(om, 2, 1));
        PhysicalField prod(s.grid());
        for (std::size_t i = 0; i < prod.v.size(); ++i)
            prod.v[i] = u1p.v[i] * d1om.v[i] + u2p.v[i] * d2om.v[i];
        res += dealias(to_spectral(prod));
    }
    res -= derivative(s.theta, 1, 1);
    r.residual_l2 = l2_norm(res);
    return r;
}

double vorticity_residual_traj(const std::vector<NonlinearState>& snaps,
                               const std::vector<double>& times, const Params& p)
{
    if (snaps.size() < 3 || snaps.size() != times.size())
        throw std::invalid_argument("vorticity_residual_traj: need >= 3 snapshots");
    const double dt = times[1] - times[0];
    for (std::size_t k = 1; k < times.size(); ++k)
        if (std::abs((times[k] - times[k - 1]) - dt) > 1e-9 * std::abs(dt))
            throw std::invalid_argument("vorticity_residual_traj: nonuniform spacing");

    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < snaps.size(); ++k) {
        const SpectralField om_m = vorticity(snaps[k - 1].u);
        const SpectralField om_0 = vorticity(snaps[k].u);
        const SpectralField om_p = vorticity(snaps[k + 1].u);

        SpectralField res = (1.0 / (2.0 * dt)) * (om_p - om_m);
        const PhysicalField u1p = to_physical(snaps[k].u.u1);
        const PhysicalField u2p = to_physical(snaps[k].u.u2);
        const PhysicalField d1om = to_physical(derivative(om_0, 1, 1));
        const PhysicalField d2om = to_physical(derivative(om_0, 2, 1));
        PhysicalField prod(snaps[k].grid());
        for (std::size_t i = 0; i < prod.v.size(); ++i)
            prod.v[i] = u1p.v[i] * d1om.v[i] + u2p.v[i] * d2om.v[i];
        res += dealias(to_spectral(prod));
        res -= p.nu * derivative(om_0, 2, 2);
        res -= derivative(snaps[k].theta, 1, 1);
        worst = std::max(worst, l2_norm(res));
    }
    return worst;
}

} // namespace bousslab
