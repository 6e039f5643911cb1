#include "bousslab/experiments.hpp"

#include "bousslab/continuum_quadrature.hpp"
#include "bousslab/diagnostics.hpp"
#include "bousslab/initial_data.hpp"
#include "bousslab/spectral_ops.hpp"

#include <chrono>
#include <fstream>
#include <cmath>
#include <filesystem>

namespace bousslab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void apply_options(ExperimentConfig& cfg, const ExperimentOptions& opt)
{
    if (opt.seed != 0) cfg.sim.seed = opt.seed;
    if (opt.threads != 0) cfg.sim.threads = opt.threads;
    std::filesystem::create_directories(opt.out_dir);
}

std::string out_path(const ExperimentOptions& opt, const std::string& file)
{
    return (std::filesystem::path(opt.out_dir) / file).string();
}

RunSummary base_summary(const std::string& name, const ExperimentConfig& cfg,
                        const ExperimentOptions& opt)
{
    RunSummary s;
    s.experiment = name;
    s.build_id = build_id();
    s.config_hash = config_hash(cfg);
    s.seed = cfg.sim.seed;
    s.check_enabled = opt.check;
    return s;
}

} // namespace

ExperimentResult run_linear_verify(ExperimentConfig cfg, const ExperimentOptions& opt)
{
    const auto t0 = Clock::now();
    apply_options(cfg, opt);
    ExperimentResult res;
    res.summary = base_summary("linear-verify", cfg, opt);

    const FrequencyGrid g = make_grid(cfg.lv_n, cfg.lv_n, cfg.sim.L1, cfg.sim.L2);
    std::vector<double> times = cfg.lv_times;
    std::sort(times.begin(), times.end());

    std::vector<CsvRow> rows;
    double worst = 0.0;
    SplitMix64 root(cfg.sim.seed);
    std::uint64_t combo = 0;
    for (double nu : cfg.lv_nus) {
        for (double eta : cfg.lv_etas) {
            const kernels::Params p{nu, eta};
            SplitMix64 rng = root.split(combo++);
            const LinearState s0 = random_solenoidal(g, cfg.lv_band_lo, cfg.lv_band_hi, 1.0, rng);
            if (combo == 1) {
                const double hu = h2_norm(s0.u), ht = h2_norm(s0.theta);
                res.summary.e0 = hu * hu + ht * ht;
            }
            const double floor_abs = 1e-25 * max_abs_coeff(s0);

            const std::vector<LinearState> oracle = ode_oracle_auto(s0, times, p);
            for (std::size_t k = 0; k < times.size(); ++k) {
                const LinearState exact = propagate_exact(s0, times[k], p, cfg.sim.threads);
                const double err = max_mode_rel_error(exact, oracle[k], floor_abs);
                worst = std::max(worst, err);
                rows.push_back({nu, eta, times[k], err});
            }
        }
    }
    write_csv_file(out_path(opt, "linear_verify.csv"), "linverify-v1",
                   {"nu", "eta", "t", "max_rel_err"}, rows);

    res.summary.metrics.emplace_back("max_rel_err", worst);
    res.summary.outputs.push_back(out_path(opt, "linear_verify.csv"));
    res.check_passed = worst <= cfg.lv_tol;
    res.summary.check_passed = !opt.check || res.check_passed;
    res.summary.wall_seconds = seconds_since(t0);
    write_summary(out_path(opt, "summary.json"), res.summary);
    return res;
}

ExperimentResult run_kernel_bounds(ExperimentConfig cfg, const ExperimentOptions& opt)
{
    using namespace kernels;
    const auto t0 = Clock::now();
    apply_options(cfg, opt);
    ExperimentResult res;
    res.summary = base_summary("kernel-bounds", cfg, opt);

    // Vieta + root bounds on random frequencies and parameters
    SplitMix64 rng(cfg.sim.seed ^ 0x9e3779b97f4a7c15ULL);
    long vieta_fail = 0, bound_fail = 0;
    for (int k = 0; k < cfg.kb_n_random; ++k) {
        double x1 = rng.uniform(-50.0, 50.0), x2 = rng.uniform(-50.0, 50.0);
        if (x1 == 0.0 && x2 == 0.0) x1 = 1.0;
        const Params p{rng.uniform(0.1, 10.0), rng.uniform(0.1, 10.0)};
        const RootPair r = char_roots(x1, x2, p);
        const double S = char_s(x1, x2, p), P = char_p(x1, x2, p);
        const double sum_err = std::abs(r.lambda1 + r.lambda2 + S);
        const double prod_err = std::abs(r.lambda1 * r.lambda2 - P);
        const double sum_scale = std::max(std::abs(r.lambda1) + std::abs(r.lambda2), S);
        if (sum_err > 1e-12 * sum_scale || prod_err > 1e-12 * std::max(P, 1e-300)) ++vieta_fail;
        if (!verify_root_bounds(x1, x2, p)) ++bound_fail;
    }

    // envelope fits at the configured (nu, eta)
    const Params p = cfg.sim.phys;
    const Lattice3 fit_lat =
        make_lattice(cfg.kb_n_xi, cfg.kb_n_t, cfg.kb_xi_min, cfg.kb_xi_max, cfg.kb_t_max);
    const Lattice3 val_lat = make_lattice(cfg.kb_n_xi_valid, cfg.kb_n_t_valid, cfg.kb_xi_min,
                                          cfg.kb_xi_max, cfg.kb_t_max);

    std::vector<CsvRow> rows;
    bool fits_ok = true;
    for (EnvelopeFamily fam :
         {EnvelopeFamily::s1_k1k5, EnvelopeFamily::s1_k2k3k4, EnvelopeFamily::s2_k1k5,
          EnvelopeFamily::s2_k2, EnvelopeFamily::s2_k3, EnvelopeFamily::s2_k4}) {
        const EnvelopeFit fit = fit_envelope(fam, fit_lat, p, cfg.kb_c_cap);
        const bool valid = validate_envelope(fit, val_lat, p);
        fits_ok = fits_ok && fit.finite && valid && fit.C <= cfg.kb_c_cap &&
                  fit.c0 >= cfg.kb_c0_floor;
        rows.push_back({envelope_name(fam), fit.C, fit.c0, fit.max_ratio,
                        static_cast<long>(fit.samples), std::string(valid ? "ok" : "violated")});
    }
    write_csv_file(out_path(opt, "kernel_bounds.csv"), "kernelfit-v1",
                   {"family", "C", "c0", "max_ratio", "samples", "validation"}, rows);

    // evaluation table for plotting / regression baselines
    std::vector<KernelEval> table;
    for (double x1 : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0})
        for (double x2 : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
            if (x1 == 0.0 && x2 == 0.0) continue;
            for (double t : {0.0, 0.1, 1.0, 10.0}) table.push_back(kernel_symbols(x1, x2, t, p));
        }
    {
        std::ofstream table_os(out_path(opt, "kernel_table.csv"));
        if (!table_os) throw ReportError("cannot open for writing: " +
                                         out_path(opt, "kernel_table.csv"));
        write_kernel_table(table_os, table);
    }

    res.summary.metrics.emplace_back("vieta_failures", static_cast<double>(vieta_fail));
    res.summary.metrics.emplace_back("root_bound_failures", static_cast<double>(bound_fail));
    res.summary.outputs.push_back(out_path(opt, "kernel_bounds.csv"));
    res.check_passed = (vieta_fail == 0) && (bound_fail == 0) && fits_ok;
    res.summary.check_passed = !opt.check || res.check_passed;
    res.summary.wall_seconds = seconds_since(t0);
    write_summary(out_path(opt, "summary.json"), res.summary);
    return res;
}

ExperimentResult run_decay_rates(ExperimentConfig cfg, const ExperimentOptions& opt)
{
    using namespace quadrature;
    const auto t0 = Clock::now();
    apply_options(cfg, opt);
    ExperimentResult res;
    res.summary = base_summary("decay-rates", cfg, opt);

    std::vector<double> times(cfg.dr_n_times);
    for (int i = 0; i < cfg.dr_n_times; ++i)
        times[i] = cfg.dr_t_lo * std::pow(cfg.dr_t_hi / cfg.dr_t_lo,
                                          static_cast<double>(i) / (cfg.dr_n_times - 1));

    InitSpectra init;
    init.theta0 = ClosedFormSpectrum{SpectrumKind::xi1sq_weighted_gaussian, 1.0, 1.0};
    {
        const QuadResult q0 =
            norm_by_quadrature(FieldSel::theta, init, 0.0, 1e-9, cfg.sim.phys, cfg.dr_rel_tol);
        res.summary.e0 = q0.value * q0.value;
    }

    std::vector<CsvRow> rows;
    bool ok = true;
    for (FieldSel which : {FieldSel::theta, FieldSel::u2}) {
        DecayEnvelopeCase c;
        c.s = 0.0;
        c.sigma = 2.0;
        c.which = which;
        c.init = init;
        const DecayEnvelopeReport rep =
            decay_envelope_report(c, times, cfg.sim.phys, cfg.dr_rel_tol, cfg.sim.threads);

        const std::string name = (which == FieldSel::theta) ? "theta" : "u2";
        for (std::size_t i = 0; i < times.size(); ++i)
            rows.push_back({name, c.s, c.sigma, times[i], rep.measured[i], rep.envelope[i]});

        res.summary.metrics.emplace_back(name + "_slope", rep.measured_fit.slope);
        res.summary.metrics.emplace_back(name + "_r2", rep.measured_fit.r2);
        res.summary.metrics.emplace_back(name + "_dominant_exponent", rep.dominant_exponent);
        res.summary.metrics.emplace_back(name + "_no_decay_guaranteed",
                                         rep.no_decay_guaranteed ? 1.0 : 0.0);
        ok = ok && rep.quadrature_ok && rep.envelope_ok &&
             rep.measured_fit.slope <= cfg.dr_slope_cap;
    }
    write_csv_file(out_path(opt, "decay_rates.csv"), "decay-v1",
                   {"case", "s", "sigma", "t", "measured_norm", "envelope_value"}, rows);

    res.summary.outputs.push_back(out_path(opt, "decay_rates.csv"));
    res.check_passed = ok;
    res.summary.check_passed = !opt.check || res.check_passed;
    res.summary.wall_seconds = seconds_since(t0);
    write_summary(out_path(opt, "summary.json"), res.summary);
    return res;
}

ExperimentResult run_exp_decay(ExperimentConfig cfg, const ExperimentOptions& opt)
{
    const auto t0 = Clock::now();
    apply_options(cfg, opt);
    ExperimentResult res;
    res.summary = base_summary("exp-decay", cfg, opt);

    const FrequencyGrid g = make_grid(cfg.sim.n1, cfg.sim.n2, cfg.sim.L1, cfg.sim.L2);
    SplitMix64 rng(cfg.sim.seed);
    const LinearState s0 = random_solenoidal(g, cfg.ed_band_lo, cfg.ed_band_hi, 1.0, rng);
    {
        const double hu = h2_norm(s0.u), ht = h2_norm(s0.theta);
        res.summary.e0 = hu * hu + ht * ht;
    }

    LyapunovConfig lcfg;
    lcfg.phys = cfg.sim.phys;
    lcfg.filt = CutoffFilter{cfg.sim.a1, cfg.sim.a2};
    lcfg.lambda = cfg.sim.lyap_lambda;
    const double C0 = lyapunov_c0(lcfg);

    // sample on a half-step grid so the dA/dt + 2B residual can be formed at
    // spacing D and D/2 from the same trajectory
    const double T = cfg.sim.T;
    const int n = cfg.ed_samples;
    const double half = T / (2.0 * n);
    std::vector<LinearState> fine;
    fine.reserve(2 * n + 1);
    for (int k = 0; k <= 2 * n; ++k)
        fine.push_back(propagate_exact(s0, half * k, cfg.sim.phys, cfg.sim.threads));

    std::vector<double> a_vals(2 * n + 1), b_vals(2 * n + 1), h1sq(2 * n + 1),
        tgrid(2 * n + 1);
    bool b_ge_c0a = true;
    std::vector<LyapunovReport> reports;
    reports.reserve(2 * n + 1);
    for (int k = 0; k <= 2 * n; ++k) {
        const int km = std::max(0, k - 1), kp = std::min(2 * n, k + 1);
        const LyapunovReport rep =
            lyapunov_AB(fine[km], fine[k], fine[kp], lcfg, TimeDerivMode::exact);
        a_vals[k] = rep.A;
        b_vals[k] = rep.B;
        tgrid[k] = fine[k].t;
        const VectorField fu = apply_cutoff(fine[k].u, lcfg.filt);
        const double h1 = h1_norm(fu);
        h1sq[k] = h1 * h1;
        if (rep.B < C0 * rep.A - 1e-12 * std::abs(rep.A)) b_ge_c0a = false;
        reports.push_back(rep);
    }
    write_lyapunov_csv(out_path(opt, "lyapunov.csv"), reports);


    // residual of dA/dt + 2B = 0 at spacings D and D/2 (interior points)
    auto residual_at = [&](int stride) {
        std::vector<double> r;
        for (int k = stride; k + stride <= 2 * n; k += stride) {
            const double d = (a_vals[k + stride] - a_vals[k - stride]) /
                             (tgrid[k + stride] - tgrid[k - stride]);
            r.push_back(std::abs(d + 2.0 * b_vals[k]));
        }
        std::sort(r.begin(), r.end());
        return r[r.size() / 2]; // median
    };
    const double res_h = residual_at(2), res_h2 = residual_at(1);
    const double order = std::log2(res_h / res_h2);

    // exponential decay rate of ||phi*u||_H1^2
    const DecayFit fit = fit_decay_rate(tgrid, h1sq, cfg.ed_fit_lo, cfg.ed_fit_frac_hi * T,
                                        FitMode::exponential);
    const double rate = -fit.slope;

    res.summary.metrics.emplace_back("C0", C0);
    res.summary.metrics.emplace_back("residual_order", order);
    res.summary.metrics.emplace_back("b_ge_c0a", b_ge_c0a ? 1.0 : 0.0);
    res.summary.metrics.emplace_back("h1sq_decay_rate", rate);
    res.summary.metrics.emplace_back("r2", fit.r2);
    res.summary.outputs.push_back(out_path(opt, "lyapunov.csv"));

    res.check_passed = (order >= 1.7) && b_ge_c0a && (rate >= cfg.ed_rate_frac * C0);
    res.summary.check_passed = !opt.check || res.check_passed;
    res.summary.wall_seconds = seconds_since(t0);
    write_summary(out_path(opt, "summary.json"), res.summary);
    return res;
}

ExperimentResult run_stability_sweep(ExperimentConfig cfg, const ExperimentOptions& opt)
{
    const auto t0 = Clock::now();
    apply_options(cfg, opt);
    ExperimentResult res;
    res.summary = base_summary("stability-sweep", cfg, opt);

    const FrequencyGrid g = make_grid(cfg.sim.n1, cfg.sim.n2, cfg.sim.L1, cfg.sim.L2);
    SplitMix64 root(cfg.sim.seed);

    std::vector<CsvRow> rows;
    bool all_stable = true, rates_decay = true;
    double worst_ratio = 0.0;
    std::uint64_t stream = 0;
    for (double eps : cfg.sw_eps) {
        for (int sd = 0; sd < cfg.sw_seeds; ++sd) {
            SplitMix64 rng = root.split(stream++);
            const LinearState lin0 = random_solenoidal(g, cfg.sw_band_lo, cfg.sw_band_hi, eps, rng);
            NonlinearState init(lin0);
            const RunResult rr = run(cfg.sim, init);
            if (stream == 1) res.summary.e0 = rr.e0;

            const auto energy = energy_functional(rr.records, cfg.sim.delta, cfg.sim.phys);
            double max_ratio = 0.0;
            for (const auto& e : energy) max_ratio = std::max(max_ratio, e.E / e.E0);

            // growth rate of the d1u2 integral: mean ||d1 u2||^2 early vs late
            double early = 0.0, late = 0.0;
            long n_early = 0, n_late = 0;
            const double T = cfg.sim.T;
            for (const auto& r : rr.records) {
                const double v = r.d1u2_l2 * r.d1u2_l2;
                if (r.t >= 0.02 * T && r.t <= 0.5 * T) {
                    early += v;
                    ++n_early;
                } else if (r.t > 0.5 * T) {
                    late += v;
                    ++n_late;
                }
            }
            early /= std::max(1L, n_early);
            late /= std::max(1L, n_late);

            const bool stable = !rr.instability && max_ratio <= cfg.sw_growth_cap;
            all_stable = all_stable && stable;
            rates_decay = rates_decay && (late <= early);
            worst_ratio = std::max(worst_ratio, max_ratio);
            rows.push_back({eps, cfg.sim.phys.nu, cfg.sim.phys.eta, static_cast<long>(sd),
                            max_ratio, early, late,
                            std::string(stable ? "stable" : "instability observed")});
        }
    }
    write_csv_file(out_path(opt, "stability_sweep.csv"), "stability-v1",
                   {"eps", "nu", "eta", "seed", "max_E_ratio", "d1u2_rate_early",
                    "d1u2_rate_late", "verdict"},
                   rows);

    res.summary.metrics.emplace_back("worst_E_ratio", worst_ratio);
    res.summary.outputs.push_back(out_path(opt, "stability_sweep.csv"));
    res.check_passed = all_stable && rates_decay;
    res.summary.check_passed = !opt.check || res.check_passed;
    res.summary.wall_seconds = seconds_since(t0);
    write_summary(out_path(opt, "summary.json"), res.summary);
    return res;
}

ExperimentResult run_energy_balance(ExperimentConfig cfg, const ExperimentOptions& opt)
{
    const auto t0 = Clock::now();
    apply_options(cfg, opt);
    ExperimentResult res;
    res.summary = base_summary("energy-balance", cfg, opt);

    const FrequencyGrid g = make_grid(cfg.sim.n1, cfg.sim.n2, cfg.sim.L1, cfg.sim.L2);
    SplitMix64 rng(cfg.sim.seed);
    const LinearState lin0 = random_solenoidal(g, cfg.eb_band_lo, cfg.eb_band_hi, cfg.eb_eps, rng);
    NonlinearState init(lin0);
    const RunResult rr = run(cfg.sim, init);
    const double drift = energy_identity_drift(rr.records, cfg.sim.phys);

    write_diagnostics_csv(out_path(opt, "energy_balance.csv"), rr.records);
    write_energy_csv(out_path(opt, "energy_functional.csv"),
                     energy_functional(rr.records, cfg.sim.delta, cfg.sim.phys));
    res.summary.outputs.push_back(out_path(opt, "energy_functional.csv"));
    {
        std::ofstream snap(out_path(opt, "state_final.csv"));
        if (!snap) throw ReportError("cannot open for writing: " +
                                     out_path(opt, "state_final.csv"));
        write_snapshot(snap, rr.final_state.as_linear());
        res.summary.outputs.push_back(out_path(opt, "state_final.csv"));
    }
    res.summary.metrics.emplace_back("energy_identity_drift", drift);
    res.summary.e0 = rr.e0;
    res.summary.outputs.push_back(out_path(opt, "energy_balance.csv"));
    res.check_passed = !rr.instability && drift <= cfg.eb_drift_cap;
    res.summary.check_passed = !opt.check || res.check_passed;
    res.summary.wall_seconds = seconds_since(t0);
    write_summary(out_path(opt, "summary.json"), res.summary);
    return res;
}

ExperimentResult run_experiment(const std::string& name, ExperimentConfig cfg,
                                const ExperimentOptions& opt)
{
    if (name == "linear-verify") return run_linear_verify(std::move(cfg), opt);
    if (name == "kernel-bounds") return run_kernel_bounds(std::move(cfg), opt);
    if (name == "decay-rates") return run_decay_rates(std::move(cfg), opt);
    if (name == "exp-decay") return run_exp_decay(std::move(cfg), opt);
    if (name == "stability-sweep") return run_stability_sweep(std::move(cfg), opt);
    if (name == "energy-balance") return run_energy_balance(std::move(cfg), opt);
    throw ConfigError("unknown experiment '" + name + "'");
}

} // namespace bousslab
