// Config parsing (strict keys), reproducibility hash, CSV/JSON emission.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bousslab/report.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace bousslab;

namespace {

const char* kSample = R"(
# sample configuration
[physical]
nu = 0.5
eta = 2.0

[grid]
n1 = 64
n2 = 32
L1 = 1.0
L2 = 2.0

[time]
dt = 2e-3
T = 5.0

[scheme]
method = imex-cn
linear_only = true

[filter]
a1 = 0.7
a2 = 1.3

[functional]
delta = 0.05
lambda = 0.25

[diagnostics]
cadence = 10

[run]
seed = 99
threads = 2

[stability_sweep]
eps = 1e-3, 1e-2, 1e-1
seeds = 3
)";

} // namespace

TEST_CASE("config parsing: values land in the right fields")
{
    const ExperimentConfig cfg = parse_config(kSample);
    CHECK(cfg.sim.phys.nu == 0.5);
    CHECK(cfg.sim.phys.eta == 2.0);
    CHECK(cfg.sim.n1 == 64);
    CHECK(cfg.sim.n2 == 32);
    CHECK(cfg.sim.L2 == 2.0);
    CHECK(cfg.sim.dt == 2e-3);
    CHECK(cfg.sim.T == 5.0);
    CHECK(cfg.sim.scheme == Scheme::imex_cn);
    CHECK(cfg.sim.linear_only);
    CHECK(cfg.sim.a1 == 0.7);
    CHECK(cfg.sim.delta == 0.05);
    CHECK(cfg.sim.lyap_lambda == 0.25);
    CHECK(cfg.sim.cadence == 10);
    CHECK(cfg.sim.seed == 99);
    CHECK(cfg.sim.threads == 2);
    REQUIRE(cfg.sw_eps.size() == 3);
    CHECK(cfg.sw_eps[2] == 1e-1);
    CHECK(cfg.sw_seeds == 3);
}

TEST_CASE("config parsing: strict errors name the offense")
{
    // unknown key
    try {
        parse_config("[physical]\nnuu = 1.0\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("physical.nuu") != std::string::npos);
    }

    // unknown section
    CHECK_THROWS_AS(parse_config("[psychic]\nnu = 1.0\n"), ConfigError);
    // malformed line
    CHECK_THROWS_AS(parse_config("[physical]\nnu 1.0\n"), ConfigError);
    // bad number / bool / scheme
    CHECK_THROWS_AS(parse_config("[physical]\nnu = soup\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scheme]\nlinear_only = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[scheme]\nmethod = rk9\n"), ConfigError);
    // missing file
    CHECK_THROWS_AS(load_config("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("config hash: stable and sensitive")
{
    const ExperimentConfig a = parse_config(kSample);
    const ExperimentConfig b = parse_config(kSample);
    CHECK(config_hash(a) == config_hash(b));

    ExperimentConfig c = a;
    c.sim.phys.nu = 0.5000001;
    CHECK(config_hash(c) != config_hash(a));
}

TEST_CASE("csv: header-only, determinism, schema mismatch")
{
    const std::vector<std::string> cols{"t", "value"};

    std::ostringstream empty;
    write_csv(empty, "demo-v1", cols, {});
    CHECK(empty.str() == "# schema: demo-v1\nt,value\n");

    std::vector<CsvRow> rows{{0.1, 1.0}, {0.2, std::string("ok")}};
    std::ostringstream a, b;
    write_csv(a, "demo-v1", cols, rows);
    write_csv(b, "demo-v1", cols, rows);
    CHECK(a.str() == b.str()); // byte-identical

    std::vector<CsvRow> bad{{0.1}};
    std::ostringstream sink;
    try {
        write_csv(sink, "demo-v1", cols, bad);
        FAIL("expected ReportError");
    } catch (const ReportError& e) {
        CHECK(std::string(e.what()).find("demo-v1") != std::string::npos);
    }
}

TEST_CASE("summary json carries the reproducibility metadata")
{
    RunSummary s;
    s.experiment = "linear-verify";
    s.build_id = build_id();
    s.config_hash = 12345;
    s.seed = 7;
    s.e0 = 0.25;
    s.wall_seconds = 1.5;
    s.outputs = {"a.csv"};
    s.metrics = {{"max_rel_err", 1e-9}};

    const std::string path = "/tmp/bousslab_summary_test.json";
    write_summary(path, s);

    std::ifstream in(path);
    nlohmann::json j;
    in >> j;
    CHECK(j["experiment"] == "linear-verify");
    CHECK(j["seed"] == 7);
    CHECK(j["config_hash"] == 12345);
    CHECK(j["metrics"]["max_rel_err"] == 1e-9);
    CHECK(j["e0"] == 0.25);
}

TEST_CASE("energy and lyapunov csv schemas")
{
    EnergyReport e;
    e.t = 1.0;
    e.E = 2.0;
    e.E0 = 2.0;
    write_energy_csv("/tmp/bousslab_energy_test.csv", {e});
    std::ifstream in("/tmp/bousslab_energy_test.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "# schema: energy-v1");
    std::getline(in, line);
    CHECK(line ==
          "t,h2sq_u,h2sq_th,run_max,int_d2u_h2sq,int_d1th_h2sq,int_d1u2_l2sq,E,E0");

    LyapunovReport r;
    r.t = 0.5;
    r.A = 1.0;
    r.B = 0.25;
    write_lyapunov_csv("/tmp/bousslab_lyap_test.csv", {r});
    std::ifstream in2("/tmp/bousslab_lyap_test.csv");
    std::getline(in2, line);
    CHECK(line == "# schema: lyap-v1");
    std::getline(in2, line);
    CHECK(line == "t,A,B,C0,lambda,ratio");
}

TEST_CASE("diagnostics csv carries the diag-v1 schema")
{
    DiagnosticsRecord r;
    r.t = 0.5;
    r.l2_u = 0.25;
    const std::string path = "/tmp/bousslab_diag_test.csv";
    write_diagnostics_csv(path, {r});
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# schema: diag-v1");
    std::getline(in, line);
    CHECK(line.rfind("t,l2_u,", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("0.5,0.25,", 0) == 0);
}
