#include "bousslab/continuum_quadrature.hpp"

#include "bousslab/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

namespace bousslab::quadrature {

using kernels::cplx;
using kernels::Params;

double ClosedFormSpectrum::operator()(double xi1, double xi2) const
{
    const double w = std::exp(-(xi1 * xi1 + xi2 * xi2) / (width * width));
    switch (kind) {
    case SpectrumKind::gaussian: return amplitude * w;
    case SpectrumKind::xi1_weighted_gaussian: return amplitude * xi1 * w;
    case SpectrumKind::xi1sq_weighted_gaussian: return amplitude * xi1 * xi1 * w;
    }
    return 0.0;
}

int ClosedFormSpectrum::xi1_power() const
{
    switch (kind) {
    case SpectrumKind::gaussian: return 0;
    case SpectrumKind::xi1_weighted_gaussian: return 1;
    case SpectrumKind::xi1sq_weighted_gaussian: return 2;
    }
    return 0;
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1]
constexpr double g7x[] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
                          0.4058451513773972, 0.7415311855993945, 0.9491079123427585};
constexpr double g7w[] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                          0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                          0.1294849661688697};
constexpr double g15x[] = {-0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
                           -0.7244177313601700, -0.5709721726085388, -0.3941513470775634,
                           -0.2011940939974345, 0.0, 0.2011940939974345, 0.3941513470775634,
                           0.5709721726085388, 0.7244177313601700, 0.8482065834104272,
                           0.9372733924007060, 0.9879925180204854};
constexpr double g15w[] = {0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
                           0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
                           0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
                           0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
                           0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

struct Panel {
    double x0, x1, y0, y1;
    double i15, err;
    long id; // creation order; deterministic tie-break
};

struct PanelOrder {
    bool operator()(const Panel& a, const Panel& b) const
    {
        if (a.err != b.err) return a.err < b.err;
        return a.id > b.id;
    }
};

template <int N>
double tensor_gauss(const std::function<double(double, double)>& f, const double* xs,
                    const double* ws, const Panel& p)
{
    const double cx = 0.5 * (p.x0 + p.x1), hx = 0.5 * (p.x1 - p.x0);
    const double cy = 0.5 * (p.y0 + p.y1), hy = 0.5 * (p.y1 - p.y0);
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
        const double x = cx + hx * xs[i];
        double row = 0.0;
        for (int j = 0; j < N; ++j) row += ws[j] * f(x, cy + hy * xs[j]);
        acc += ws[i] * row;
    }
    return acc * hx * hy;
}

void evaluate_panel(const std::function<double(double, double)>& f, Panel& p)
{
    const double i7 = tensor_gauss<7>(f, g7x, g7w, p);
    p.i15 = tensor_gauss<15>(f, g15x, g15w, p);
    p.err = std::abs(p.i15 - i7);
}

} // namespace

namespace {

QuadResult adapt2d_seeded(const std::function<double(double, double)>& f,
                          const std::vector<std::array<double, 4>>& seeds, double rel_tol,
                          long max_panels)
{
    long next_id = 0;
    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> queue;
    double total = 0.0, err = 0.0;
    long evals = 0, panels = 0;
    for (const auto& s : seeds) {
        Panel p{s[0], s[1], s[2], s[3], 0.0, 0.0, next_id++};
        evaluate_panel(f, p);
        total += p.i15;
        err += p.err;
        queue.push(p);
        evals += 49 + 225;
        ++panels;
    }

    while (err > rel_tol * std::max(std::abs(total), 1e-300) && panels < max_panels) {
        Panel worst = queue.top();
        queue.pop();
        total -= worst.i15;
        err -= worst.err;

        const double mx = 0.5 * (worst.x0 + worst.x1), my = 0.5 * (worst.y0 + worst.y1);
        const Panel quarters[4] = {
            {worst.x0, mx, worst.y0, my, 0, 0, next_id++},
            {mx, worst.x1, worst.y0, my, 0, 0, next_id++},
            {worst.x0, mx, my, worst.y1, 0, 0, next_id++},
            {mx, worst.x1, my, worst.y1, 0, 0, next_id++},
        };
        for (Panel q : quarters) {
            evaluate_panel(f, q);
            total += q.i15;
            err += q.err;
            queue.push(q);
            evals += 49 + 225;
        }
        panels += 3;
    }

    QuadResult res;
    res.value = total;
    res.abs_error = err;
    res.converged = err <= rel_tol * std::max(std::abs(total), 1e-300);
    res.evals = evals;
    return res;
}

// geometric breakpoints from hi down toward lo (lo may be 0 or negative)
std::vector<double> graded_breaks(double lo, double hi, double scale)
{
    std::vector<double> cuts{hi};
    double x = hi;
    while (x > scale && cuts.size() < 24) {
        x *= 0.5;
        cuts.push_back(x);
    }
    cuts.push_back(lo);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

} // namespace

QuadResult adapt2d(const std::function<double(double, double)>& f, double x0, double x1,
                   double y0, double y1, double rel_tol, long max_panels)
{
    return adapt2d_seeded(f, {{x0, x1, y0, y1}}, rel_tol, max_panels);
}

namespace {

// |xi|^{2s} |K . data|^2 at one frequency
struct NormIntegrand {
    FieldSel which;
    const InitSpectra* init;
    double s, t;
    Params p;

    double operator()(double xi1, double xi2) const
    {
        if (xi1 == 0.0 && xi2 == 0.0) return 0.0;
        const auto e = kernels::kernel_symbols(xi1, xi2, t, p);
        cplx amp{0.0, 0.0};
        switch (which) {
        case FieldSel::u1:
            if (init->u10) amp += e.k1 * (*init->u10)(xi1, xi2);
            if (init->theta0) amp += e.k2 * (*init->theta0)(xi1, xi2);
            break;
        case FieldSel::u2:
            if (init->u20) amp += e.k1 * (*init->u20)(xi1, xi2);
            if (init->theta0) amp += e.k3 * (*init->theta0)(xi1, xi2);
            break;
        case FieldSel::theta:
            if (init->u20) amp += e.k4 * (*init->u20)(xi1, xi2);
            if (init->theta0) amp += e.k5 * (*init->theta0)(xi1, xi2);
            break;
        }
        const double q2 = xi1 * xi1 + xi2 * xi2;
        const double a2 = std::norm(amp);
        return (s == 0.0) ? a2 : std::pow(q2, s) * a2;
    }
};

// active spectra for the selected component
std::vector<const ClosedFormSpectrum*> active_spectra(FieldSel which, const InitSpectra& init)
{
    std::vector<const ClosedFormSpectrum*> v;
    switch (which) {
    case FieldSel::u1:
        if (init.u10) v.push_back(&*init.u10);
        if (init.theta0) v.push_back(&*init.theta0);
        break;
    case FieldSel::u2:
    case FieldSel::theta:
        if (init.u20) v.push_back(&*init.u20);
        if (init.theta0) v.push_back(&*init.theta0);
        break;
    }
    return v;
}

} // namespace

QuadResult norm_by_quadrature(FieldSel which, const InitSpectra& init, double s, double t,
                              const Params& p, double rel_tol)
{
    if (t < 0.0) throw std::invalid_argument("norm_by_quadrature: t must be nonnegative");
    const auto spectra = active_spectra(which, init);
    if (spectra.empty()) return {0.0, 0.0, true, 0};

    double width = 0.0;
    bool all_even = true, all_odd = true;
    for (const auto* sp : spectra) {
        width = std::max(width, sp->width);
        if (sp->xi1_power() % 2 == 0) all_odd = false;
        else all_even = false;
    }
    const double Xi = 7.0 * width;

    NormIntegrand f{which, &init, s, t, p};
    auto fn = [&f](double x, double y) { return f(x, y); };

    // seed panels graded toward the axes: the integrand concentrates at the
    // diffusive scale 1/sqrt(t) near the origin and in a near-axis strip
    const double scale = std::min(Xi, 1.0 / std::sqrt(std::max(t, 1.0)));
    const std::vector<double> xcut = graded_breaks(0.0, Xi, scale);
    const std::vector<double> ycut = graded_breaks(0.0, Xi, scale);
    auto seeds_for = [&](bool negative_x) {
        std::vector<std::array<double, 4>> seeds;
        for (std::size_t i = 0; i + 1 < xcut.size(); ++i)
            for (std::size_t j = 0; j + 1 < ycut.size(); ++j) {
                if (negative_x)
                    seeds.push_back({-xcut[i + 1], -xcut[i], ycut[j], ycut[j + 1]});
                seeds.push_back({xcut[i], xcut[i + 1], ycut[j], ycut[j + 1]});
            }
        return seeds;
    };

    QuadResult r;
    if (all_even || all_odd) {
        r = adapt2d_seeded(fn, seeds_for(false), rel_tol, 60000);
        r.value *= 4.0;
        r.abs_error *= 4.0;
    } else {
        r = adapt2d_seeded(fn, seeds_for(true), rel_tol, 60000);
        r.value *= 2.0;
        r.abs_error *= 2.0;
    }
    r.value = std::sqrt(std::max(r.value, 0.0));
    return r;
}

namespace {

struct TermSpec {
    double exponent;
    bool needs_u0;    // tied to the velocity-component data norm, else theta0
};

std::vector<TermSpec> bound_terms(FieldSel which, double s, double sigma)
{
    switch (which) {
    case FieldSel::u1:
        return {{-0.5 * (s + sigma), true},
                {-0.5 * sigma, true},
                {-0.5 * (s + sigma) + 1.0, false},
                {-0.5 - 0.5 * sigma, false}};
    case FieldSel::u2:
        return {{-0.5 * (s + sigma), true},
                {-0.5 * sigma, true},
                {-0.5 * (s + sigma) + 1.0, false},
                {-1.0 - 0.5 * sigma, false}};
    case FieldSel::theta:
        return {{-0.5 * (s + sigma) + 1.0, true},
                {-0.5 * sigma, true},
                {-0.5 * (s + sigma), false},
                {-0.5 * sigma, false}};
    }
    return {};
}

// least squares with nonnegativity by best feasible subset (few terms)
std::vector<double> nnls_fit(const std::vector<double>& exponents,
                             const std::vector<double>& times,
                             const std::vector<double>& values)
{
    const int m = static_cast<int>(exponents.size());
    const int npts = static_cast<int>(times.size());
    std::vector<double> best(m, 0.0);
    double best_sse = std::numeric_limits<double>::infinity();

    for (int mask = 1; mask < (1 << m); ++mask) {
        std::vector<int> sel;
        for (int k = 0; k < m; ++k)
            if (mask & (1 << k)) sel.push_back(k);
        const int q = static_cast<int>(sel.size());

        // normal equations A^T A c = A^T y
        std::vector<std::vector<double>> ata(q, std::vector<double>(q + 1, 0.0));
        for (int a = 0; a < q; ++a) {
            for (int b = 0; b <= q; ++b) {
                double acc = 0.0;
                for (int i = 0; i < npts; ++i) {
                    const double pa = std::pow(times[i], exponents[sel[a]]);
                    const double pb = (b < q) ? std::pow(times[i], exponents[sel[b]]) : values[i];
                    acc += pa * pb;
                }
                ata[a][b] = acc;
            }
        }
        // Gaussian elimination with partial pivoting
        bool singular = false;
        for (int col = 0; col < q && !singular; ++col) {
            int piv = col;
            for (int r = col + 1; r < q; ++r)
                if (std::abs(ata[r][col]) > std::abs(ata[piv][col])) piv = r;
            if (std::abs(ata[piv][col]) < 1e-300) {
                singular = true;
                break;
            }
            std::swap(ata[col], ata[piv]);
            for (int r = 0; r < q; ++r) {
                if (r == col) continue;
                const double fct = ata[r][col] / ata[col][col];
                for (int cc = col; cc <= q; ++cc) ata[r][cc] -= fct * ata[col][cc];
            }
        }
        if (singular) continue;

        std::vector<double> coef(m, 0.0);
        bool feasible = true;
        for (int a = 0; a < q; ++a) {
            const double c = ata[a][q] / ata[a][a];
            if (c < 0.0) {
                feasible = false;
                break;
            }
            coef[sel[a]] = c;
        }
        if (!feasible) continue;

        double sse = 0.0;
        for (int i = 0; i < npts; ++i) {
            double fitv = 0.0;
            for (int k = 0; k < m; ++k) fitv += coef[k] * std::pow(times[i], exponents[k]);
            sse += (fitv - values[i]) * (fitv - values[i]);
        }
        if (sse < best_sse) {
            best_sse = sse;
            best = coef;
        }
    }
    return best;
}

} // namespace

DecayEnvelopeReport decay_envelope_report(const DecayEnvelopeCase& c,
                                          const std::vector<double>& times, const Params& p,
                                          double rel_tol, int threads)
{
    if (c.s < 0.0 || c.sigma < 0.0 || c.s + c.sigma < 2.0)
        throw std::invalid_argument("decay_envelope_report: hypothesis violated "
                                    "(need s >= 0, sigma >= 0, s + sigma >= 2)");
    if (times.size() < 4) throw std::invalid_argument("decay_envelope_report: need >= 4 times");

    DecayEnvelopeReport rep;
    rep.times = times;
    rep.measured.resize(times.size());
    std::vector<QuadResult> cells(times.size());
    parallel_for(static_cast<int>(times.size()), threads, [&](int i) {
        cells[i] = norm_by_quadrature(c.which, c.init, c.s, times[i], p, rel_tol);
    });
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!cells[i].converged) rep.quadrature_ok = false;
        rep.measured[i] = cells[i].value;
    }

    // data-active envelope terms, deduplicated by exponent
    const bool has_u = (c.which == FieldSel::u1) ? c.init.u10.has_value() : c.init.u20.has_value();
    const bool has_th = c.init.theta0.has_value();
    std::vector<double> exps;
    for (const TermSpec& ts : bound_terms(c.which, c.s, c.sigma)) {
        if (ts.needs_u0 && !has_u) continue;
        if (!ts.needs_u0 && !has_th) continue;
        bool dup = false;
        for (double e : exps) dup = dup || std::abs(e - ts.exponent) < 1e-12;
        if (!dup) exps.push_back(ts.exponent);
        if (ts.exponent >= 0.0) rep.no_decay_guaranteed = true;
    }
    std::sort(exps.rbegin(), exps.rend());

    // fit on the first (log) half, sup-calibrate there, validate on the rest
    const std::size_t n_fit = times.size() / 2;
    std::vector<double> tf(times.begin(), times.begin() + n_fit);
    std::vector<double> mf(rep.measured.begin(), rep.measured.begin() + n_fit);
    std::vector<double> coefs = nnls_fit(exps, tf, mf);

    auto env_at = [&](double t) {
        double v = 0.0;
        for (std::size_t k = 0; k < exps.size(); ++k) v += coefs[k] * std::pow(t, exps[k]);
        return v;
    };
    double cal = 1.0;
    for (std::size_t i = 0; i < n_fit; ++i) {
        const double e = env_at(times[i]);
        if (e > 0.0) cal = std::max(cal, rep.measured[i] / e);
    }
    for (double& cc : coefs) cc *= cal;

    rep.envelope.reserve(times.size());
    rep.envelope_ok = true;
    for (std::size_t i = 0; i < times.size(); ++i) {
        rep.envelope.push_back(env_at(times[i]));
        if (i >= n_fit && rep.measured[i] > rep.envelope[i] * (1.0 + 1e-12))
            rep.envelope_ok = false;
    }

    for (std::size_t k = 0; k < exps.size(); ++k)
        rep.terms.push_back({exps[k], coefs[k]});
    double best_contrib = -1.0;
    for (const auto& term : rep.terms) {
        const double contrib = term.coeff * std::pow(times.back(), term.exponent);
        if (contrib > best_contrib) {
            best_contrib = contrib;
            rep.dominant_exponent = term.exponent;
        }
    }

    rep.measured_fit =
        fit_decay_rate(times, rep.measured, times.front(), times.back(), FitMode::algebraic);
    return rep;
}

} // namespace bousslab::quadrature
