#include "bousslab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace bousslab {

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& where)
{
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config: bad numeric value '" + v + "' for " + where);
    }
}

long parse_int(const std::string& v, const std::string& where)
{
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("config: bad integer value '" + v + "' for " + where);
    }
}

bool parse_bool(const std::string& v, const std::string& where)
{
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean value '" + v + "' for " + where);
}

std::vector<double> parse_list(const std::string& v, const std::string& where)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), where));
    if (out.empty()) throw ConfigError("config: empty list for " + where);
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

// full key table: section.key -> setter
const std::map<std::string, Setter>& key_table()
{
    static const std::map<std::string, Setter> table = {
        {"physical.nu", [](auto& c, auto& v, auto& w) { c.sim.phys.nu = parse_double(v, w); }},
        {"physical.eta", [](auto& c, auto& v, auto& w) { c.sim.phys.eta = parse_double(v, w); }},
        {"grid.n1", [](auto& c, auto& v, auto& w) { c.sim.n1 = (int)parse_int(v, w); }},
        {"grid.n2", [](auto& c, auto& v, auto& w) { c.sim.n2 = (int)parse_int(v, w); }},
        {"grid.L1", [](auto& c, auto& v, auto& w) { c.sim.L1 = parse_double(v, w); }},
        {"grid.L2", [](auto& c, auto& v, auto& w) { c.sim.L2 = parse_double(v, w); }},
        {"time.dt", [](auto& c, auto& v, auto& w) { c.sim.dt = parse_double(v, w); }},
        {"time.T", [](auto& c, auto& v, auto& w) { c.sim.T = parse_double(v, w); }},
        {"scheme.method",
         [](auto& c, auto& v, auto& w) {
             if (v == "if-rk4") c.sim.scheme = Scheme::if_rk4;
             else if (v == "imex-cn") c.sim.scheme = Scheme::imex_cn;
             else throw ConfigError("config: unknown scheme '" + v + "' for " + w);
         }},
        {"scheme.linear_only",
         [](auto& c, auto& v, auto& w) { c.sim.linear_only = parse_bool(v, w); }},
        {"filter.a1", [](auto& c, auto& v, auto& w) { c.sim.a1 = parse_double(v, w); }},
        {"filter.a2", [](auto& c, auto& v, auto& w) { c.sim.a2 = parse_double(v, w); }},
        {"functional.delta", [](auto& c, auto& v, auto& w) { c.sim.delta = parse_double(v, w); }},
        {"functional.lambda",
         [](auto& c, auto& v, auto& w) { c.sim.lyap_lambda = parse_double(v, w); }},
        {"diagnostics.cadence",
         [](auto& c, auto& v, auto& w) { c.sim.cadence = (int)parse_int(v, w); }},
        {"run.seed",
         [](auto& c, auto& v, auto& w) { c.sim.seed = (std::uint64_t)parse_int(v, w); }},
        {"run.threads", [](auto& c, auto& v, auto& w) { c.sim.threads = (int)parse_int(v, w); }},

        {"linear_verify.times", [](auto& c, auto& v, auto& w) { c.lv_times = parse_list(v, w); }},
        {"linear_verify.nus", [](auto& c, auto& v, auto& w) { c.lv_nus = parse_list(v, w); }},
        {"linear_verify.etas", [](auto& c, auto& v, auto& w) { c.lv_etas = parse_list(v, w); }},
        {"linear_verify.n", [](auto& c, auto& v, auto& w) { c.lv_n = (int)parse_int(v, w); }},
        {"linear_verify.band_lo",
         [](auto& c, auto& v, auto& w) { c.lv_band_lo = (int)parse_int(v, w); }},
        {"linear_verify.band_hi",
         [](auto& c, auto& v, auto& w) { c.lv_band_hi = (int)parse_int(v, w); }},
        {"linear_verify.tol", [](auto& c, auto& v, auto& w) { c.lv_tol = parse_double(v, w); }},

        {"kernel_bounds.n_xi", [](auto& c, auto& v, auto& w) { c.kb_n_xi = (int)parse_int(v, w); }},
        {"kernel_bounds.n_t", [](auto& c, auto& v, auto& w) { c.kb_n_t = (int)parse_int(v, w); }},
        {"kernel_bounds.n_xi_valid",
         [](auto& c, auto& v, auto& w) { c.kb_n_xi_valid = (int)parse_int(v, w); }},
        {"kernel_bounds.n_t_valid",
         [](auto& c, auto& v, auto& w) { c.kb_n_t_valid = (int)parse_int(v, w); }},
        {"kernel_bounds.xi_min", [](auto& c, auto& v, auto& w) { c.kb_xi_min = parse_double(v, w); }},
        {"kernel_bounds.xi_max", [](auto& c, auto& v, auto& w) { c.kb_xi_max = parse_double(v, w); }},
        {"kernel_bounds.t_max", [](auto& c, auto& v, auto& w) { c.kb_t_max = parse_double(v, w); }},
        {"kernel_bounds.c_cap", [](auto& c, auto& v, auto& w) { c.kb_c_cap = parse_double(v, w); }},
        {"kernel_bounds.c0_floor",
         [](auto& c, auto& v, auto& w) { c.kb_c0_floor = parse_double(v, w); }},
        {"kernel_bounds.n_random",
         [](auto& c, auto& v, auto& w) { c.kb_n_random = (int)parse_int(v, w); }},

        {"decay_rates.t_lo", [](auto& c, auto& v, auto& w) { c.dr_t_lo = parse_double(v, w); }},
        {"decay_rates.t_hi", [](auto& c, auto& v, auto& w) { c.dr_t_hi = parse_double(v, w); }},
        {"decay_rates.n_times",
         [](auto& c, auto& v, auto& w) { c.dr_n_times = (int)parse_int(v, w); }},
        {"decay_rates.rel_tol",
         [](auto& c, auto& v, auto& w) { c.dr_rel_tol = parse_double(v, w); }},
        {"decay_rates.slope_cap",
         [](auto& c, auto& v, auto& w) { c.dr_slope_cap = parse_double(v, w); }},

        {"exp_decay.samples", [](auto& c, auto& v, auto& w) { c.ed_samples = (int)parse_int(v, w); }},
        {"exp_decay.fit_lo", [](auto& c, auto& v, auto& w) { c.ed_fit_lo = parse_double(v, w); }},
        {"exp_decay.fit_frac_hi",
         [](auto& c, auto& v, auto& w) { c.ed_fit_frac_hi = parse_double(v, w); }},
        {"exp_decay.rate_frac",
         [](auto& c, auto& v, auto& w) { c.ed_rate_frac = parse_double(v, w); }},
        {"exp_decay.band_lo",
         [](auto& c, auto& v, auto& w) { c.ed_band_lo = (int)parse_int(v, w); }},
        {"exp_decay.band_hi",
         [](auto& c, auto& v, auto& w) { c.ed_band_hi = (int)parse_int(v, w); }},

        {"stability_sweep.eps", [](auto& c, auto& v, auto& w) { c.sw_eps = parse_list(v, w); }},
        {"stability_sweep.seeds",
         [](auto& c, auto& v, auto& w) { c.sw_seeds = (int)parse_int(v, w); }},
        {"stability_sweep.growth_cap",
         [](auto& c, auto& v, auto& w) { c.sw_growth_cap = parse_double(v, w); }},
        {"stability_sweep.band_lo",
         [](auto& c, auto& v, auto& w) { c.sw_band_lo = (int)parse_int(v, w); }},
        {"stability_sweep.band_hi",
         [](auto& c, auto& v, auto& w) { c.sw_band_hi = (int)parse_int(v, w); }},

        {"energy_balance.drift_cap",
         [](auto& c, auto& v, auto& w) { c.eb_drift_cap = parse_double(v, w); }},
        {"energy_balance.eps", [](auto& c, auto& v, auto& w) { c.eb_eps = parse_double(v, w); }},
        {"energy_balance.band_lo",
         [](auto& c, auto& v, auto& w) { c.eb_band_lo = (int)parse_int(v, w); }},
        {"energy_balance.band_hi",
         [](auto& c, auto& v, auto& w) { c.eb_band_hi = (int)parse_int(v, w); }},
    };
    return table;
}

} // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin)
{
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section header at " + origin + ":" +
                                  std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at " + origin + ":" +
                              std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string full = section.empty() ? key : section + "." + key;

        const auto& table = key_table();
        const auto it = table.find(full);
        if (it == table.end())
            throw ConfigError("config: unknown key '" + full + "' at " + origin + ":" +
                              std::to_string(lineno));
        it->second(cfg, value, full);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::string canonical_config(const ExperimentConfig& c)
{
    std::ostringstream os;
    os.precision(17);
    auto list = [](const std::vector<double>& v) {
        std::ostringstream s;
        s.precision(17);
        for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
        return s.str();
    };
    os << "physical.nu=" << c.sim.phys.nu << "\nphysical.eta=" << c.sim.phys.eta
       << "\ngrid.n1=" << c.sim.n1 << "\ngrid.n2=" << c.sim.n2 << "\ngrid.L1=" << c.sim.L1
       << "\ngrid.L2=" << c.sim.L2 << "\ntime.dt=" << c.sim.dt << "\ntime.T=" << c.sim.T
       << "\nscheme.method=" << (c.sim.scheme == Scheme::if_rk4 ? "if-rk4" : "imex-cn")
       << "\nscheme.linear_only=" << (c.sim.linear_only ? "true" : "false")
       << "\nfilter.a1=" << c.sim.a1 << "\nfilter.a2=" << c.sim.a2
       << "\nfunctional.delta=" << c.sim.delta << "\nfunctional.lambda=" << c.sim.lyap_lambda
       << "\ndiagnostics.cadence=" << c.sim.cadence << "\nrun.seed=" << c.sim.seed
       << "\nrun.threads=" << c.sim.threads << "\nlinear_verify.times=" << list(c.lv_times)
       << "\nlinear_verify.nus=" << list(c.lv_nus) << "\nlinear_verify.etas=" << list(c.lv_etas)
       << "\nlinear_verify.n=" << c.lv_n << "\nlinear_verify.band_lo=" << c.lv_band_lo
       << "\nlinear_verify.band_hi=" << c.lv_band_hi << "\nlinear_verify.tol=" << c.lv_tol
       << "\nkernel_bounds.n_xi=" << c.kb_n_xi << "\nkernel_bounds.n_t=" << c.kb_n_t
       << "\nkernel_bounds.n_xi_valid=" << c.kb_n_xi_valid
       << "\nkernel_bounds.n_t_valid=" << c.kb_n_t_valid
       << "\nkernel_bounds.xi_min=" << c.kb_xi_min << "\nkernel_bounds.xi_max=" << c.kb_xi_max
       << "\nkernel_bounds.t_max=" << c.kb_t_max << "\nkernel_bounds.c_cap=" << c.kb_c_cap
       << "\nkernel_bounds.c0_floor=" << c.kb_c0_floor
       << "\nkernel_bounds.n_random=" << c.kb_n_random << "\ndecay_rates.t_lo=" << c.dr_t_lo
       << "\ndecay_rates.t_hi=" << c.dr_t_hi << "\ndecay_rates.n_times=" << c.dr_n_times
       << "\ndecay_rates.rel_tol=" << c.dr_rel_tol
       << "\ndecay_rates.slope_cap=" << c.dr_slope_cap << "\nexp_decay.samples=" << c.ed_samples
       << "\nexp_decay.fit_lo=" << c.ed_fit_lo << "\nexp_decay.fit_frac_hi=" << c.ed_fit_frac_hi
       << "\nexp_decay.rate_frac=" << c.ed_rate_frac << "\nexp_decay.band_lo=" << c.ed_band_lo
       << "\nexp_decay.band_hi=" << c.ed_band_hi << "\nstability_sweep.eps=" << list(c.sw_eps)
       << "\nstability_sweep.seeds=" << c.sw_seeds
       << "\nstability_sweep.growth_cap=" << c.sw_growth_cap
       << "\nstability_sweep.band_lo=" << c.sw_band_lo
       << "\nstability_sweep.band_hi=" << c.sw_band_hi
       << "\nenergy_balance.drift_cap=" << c.eb_drift_cap
       << "\nenergy_balance.eps=" << c.eb_eps << "\nenergy_balance.band_lo=" << c.eb_band_lo
       << "\nenergy_balance.band_hi=" << c.eb_band_hi << "\n";
    return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg)
{
    const std::string s = canonical_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace bousslab
