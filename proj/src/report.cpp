#include "bousslab/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace bousslab {

std::string build_id() { return "bousslab-1.0.0"; }

std::string format_cell(const CsvCell& c)
{
    if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
    char buf[40];
    if (std::holds_alternative<long>(c)) {
        std::snprintf(buf, sizeof buf, "%ld", std::get<long>(c));
    } else {
        std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(c));
    }
    return buf;
}

void write_csv(std::ostream& os, const std::string& schema,
               const std::vector<std::string>& columns, const std::vector<CsvRow>& rows)
{
    os << "# schema: " << schema << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != columns.size()) {
            std::ostringstream msg;
            msg << "csv schema '" << schema << "': row " << r << " has " << rows[r].size()
                << " cells, header has " << columns.size() << " (column '"
                << columns[std::min(rows[r].size(), columns.size() - 1)] << "')";
            throw ReportError(msg.str());
        }
        for (std::size_t i = 0; i < rows[r].size(); ++i)
            os << (i ? "," : "") << format_cell(rows[r][i]);
        os << '\n';
    }
}

void write_csv_file(const std::string& path, const std::string& schema,
                    const std::vector<std::string>& columns, const std::vector<CsvRow>& rows)
{
    std::ofstream out(path);
    if (!out) throw ReportError("cannot open for writing: " + path);
    write_csv(out, schema, columns, rows);
    if (!out) throw ReportError("write failed: " + path);
}

void write_summary(const std::string& path, const RunSummary& s)
{
    nlohmann::json j;
    j["experiment"] = s.experiment;
    j["build_id"] = s.build_id;
    j["config_hash"] = s.config_hash;
    j["seed"] = s.seed;
    j["e0"] = s.e0;
    j["wall_seconds"] = s.wall_seconds;
    j["check_enabled"] = s.check_enabled;
    j["check_passed"] = s.check_passed;
    j["outputs"] = s.outputs;
    for (const auto& [k, v] : s.metrics) j["metrics"][k] = v;

    std::ofstream out(path);
    if (!out) throw ReportError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw ReportError("write failed: " + path);
}

void write_energy_csv(const std::string& path, const std::vector<EnergyReport>& reps)
{
    static const std::vector<std::string> cols = {"t",
                                                  "h2sq_u",
                                                  "h2sq_th",
                                                  "run_max",
                                                  "int_d2u_h2sq",
                                                  "int_d1th_h2sq",
                                                  "int_d1u2_l2sq",
                                                  "E",
                                                  "E0"};
    std::vector<CsvRow> rows;
    rows.reserve(reps.size());
    for (const auto& e : reps)
        rows.push_back({e.t, e.h2sq_u, e.h2sq_th, e.run_max, e.int_d2u_h2sq, e.int_d1th_h2sq,
                        e.int_d1u2_l2sq, e.E, e.E0});
    write_csv_file(path, "energy-v1", cols, rows);
}

void write_lyapunov_csv(const std::string& path, const std::vector<LyapunovReport>& reps)
{
    static const std::vector<std::string> cols = {"t", "A", "B", "C0", "lambda", "ratio"};
    std::vector<CsvRow> rows;
    rows.reserve(reps.size());
    for (const auto& r : reps) rows.push_back({r.t, r.A, r.B, r.C0, r.lambda, r.ratio});
    write_csv_file(path, "lyap-v1", cols, rows);
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& recs)
{
    static const std::vector<std::string> cols = {
        "t",      "l2_u",    "l2_th",   "h1_u",    "h1_th",         "h2_u",
        "h2_th",  "d2u_l2",  "d1th_l2", "d2u_h2",  "d1th_h2",       "d1u2_l2",
        "omega_l2", "grad_omega_l2", "div_rel"};
    std::vector<CsvRow> rows;
    rows.reserve(recs.size());
    for (const auto& r : recs)
        rows.push_back({r.t, r.l2_u, r.l2_th, r.h1_u, r.h1_th, r.h2_u, r.h2_th, r.d2u_l2,
                        r.d1th_l2, r.d2u_h2, r.d1th_h2, r.d1u2_l2, r.omega_l2, r.grad_omega_l2,
                        r.div_rel});
    write_csv_file(path, "diag-v1", cols, rows);
}

} // namespace bousslab
