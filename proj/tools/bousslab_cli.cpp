// bousslab_cli.cpp
// Experiment driver. One experiment per invocation:
//   bousslab <experiment> --config <path> [--out <dir>] [--seed <u64>]
//            [--check] [--threads <n>]
// Exit codes: 0 success, 2 config error, 3 numerical failure (NaN/CFL),
// 4 acceptance-check failure under --check.

#include "bousslab/experiments.hpp"
#include "bousslab/nonlinear_solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>

using namespace bousslab;

int main(int argc, char** argv)
{
    CLI::App app{"numerical laboratory for anisotropic buoyancy-driven stability"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::uint64_t seed = 0;
    int threads = 0;
    bool check = false;

    const std::vector<std::string> names = {"linear-verify",  "kernel-bounds", "decay-rates",
                                            "exp-decay",      "stability-sweep",
                                            "energy-balance"};
    for (const auto& n : names) {
        CLI::App* sub = app.add_subcommand(n);
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--threads", threads, "internal parallelism width");
        sub->add_flag("--check", check, "enable acceptance assertions");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string name = app.get_subcommands().front()->get_name();

    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    ExperimentOptions opt;
    opt.out_dir = out_dir;
    opt.check = check;
    opt.seed = seed;
    opt.threads = threads;

    try {
        const ExperimentResult res = run_experiment(name, cfg, opt);
        std::printf("%s: %s (reports in %s)\n", name.c_str(),
                    res.check_passed ? "ok" : "checks failed", out_dir.c_str());
        if (check && !res.check_passed) return 4;
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const CflError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
