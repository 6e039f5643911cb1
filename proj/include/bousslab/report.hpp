// report.hpp
// Versioned CSV emission and the JSON run summary. CSV layout: one comment
// line "# schema: <name>", one header row, then data rows; doubles printed
// with %.17g so identical runs produce byte-identical files.

#pragma once

#include "bousslab/config.hpp"
#include "bousslab/diagnostics.hpp"

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace bousslab {

using CsvCell = std::variant<double, long, std::string>;
using CsvRow = std::vector<CsvCell>;

struct ReportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Writes schema line + header + rows. A row whose width differs from the
// header is an error naming the schema and the offending column count.
void write_csv(std::ostream& os, const std::string& schema,
               const std::vector<std::string>& columns, const std::vector<CsvRow>& rows);

// Same, to a file; IO failures surface with the path.
void write_csv_file(const std::string& path, const std::string& schema,
                    const std::vector<std::string>& columns, const std::vector<CsvRow>& rows);

std::string format_cell(const CsvCell& c);

struct RunSummary {
    std::string experiment;
    std::string build_id;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    double e0 = 0.0;
    double wall_seconds = 0.0;
    bool check_enabled = false;
    bool check_passed = true;
    std::vector<std::string> outputs;
    std::vector<std::pair<std::string, double>> metrics;
};

// JSON summary with run metadata for reproducibility.
void write_summary(const std::string& path, const RunSummary& s);

std::string build_id();

// DiagnosticsRecord CSV (schema diag-v1).
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& recs);

// EnergyReport CSV (schema energy-v1).
void write_energy_csv(const std::string& path, const std::vector<EnergyReport>& reps);

// LyapunovReport CSV (schema lyap-v1).
void write_lyapunov_csv(const std::string& path, const std::vector<LyapunovReport>& reps);

} // namespace bousslab
