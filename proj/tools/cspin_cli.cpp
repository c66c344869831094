// cspin: run central-spin trajectory experiments from the command line.
//
//   cspin run <config> [--seed S] [--samples K] [--workers W] [--method M]
//                      [--out PATH] [--format csv|json] [--timing]
//   cspin preset <fig1|fig2_top|fig2_bottom|fig3> [same flags]
//   cspin validate <config>
//   cspin oracle-check [--seed S]
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "cspin/config.hpp"
#include "cspin/experiment.hpp"
#include "cspin/oracle_check.hpp"
#include "cspin/report.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> workers;
    std::optional<std::string> method;
    std::optional<std::string> out;
    std::optional<std::string> format;
    bool timing = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--samples", samples, "Monte Carlo draws per grid point")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
        cmd->add_option("--method", method, "auto|exact|binomial|sampled|exact-universe");
        cmd->add_option("--out", out, "output file (default: stdout)");
        cmd->add_option("--format", format, "csv|json");
        cmd->add_flag("--timing", timing, "include wall-clock time in JSON output");
    }

    cspin::PresetOverrides overrides() const {
        cspin::PresetOverrides o;
        o.seed = seed;
        o.samples = samples;
        o.workers = workers;
        if (method) {
            o.method = cspin::parse_method(*method);
        }
        return o;
    }
};

void report_perturbations(const std::vector<cspin::ResultRecord>& records) {
    for (const auto& rec : records) {
        for (const auto& p : rec.series.perturbations) {
            std::cerr << "note: degenerate node at t = " << cspin::format_double(p.requested)
                      << ", evaluated at t = " << cspin::format_double(p.used) << '\n';
        }
    }
}

void emit(const std::vector<cspin::ResultRecord>& records, const CommonFlags& flags,
          const std::string& cfg_out, cspin::OutputFormat cfg_format) {
    const std::string path = flags.out.value_or(cfg_out);
    const cspin::OutputFormat format =
        flags.format ? cspin::parse_format(*flags.format) : cfg_format;
    report_perturbations(records);
    cspin::emit_results(records, format, path, flags.timing);
}

int run_config(const std::string& path, const CommonFlags& flags) {
    cspin::ExperimentConfig cfg = cspin::load_config(path);
    const auto o = flags.overrides();
    if (o.seed) cfg.seed = *o.seed;
    if (o.samples) cfg.samples = *o.samples;
    if (o.workers) cfg.workers = *o.workers;
    if (o.method) cfg.method = *o.method;
    cspin::finalize(cfg);
    emit({cspin::run_experiment(cfg)}, flags, cfg.output, cfg.format);
    return 0;
}

int run_preset(const std::string& name, const CommonFlags& flags) {
    const auto records = cspin::run_preset(name, flags.overrides());
    emit(records, flags, "", cspin::OutputFormat::csv);
    return 0;
}

int validate(const std::string& path) {
    const auto cfg = cspin::load_config(path);
    std::cout << cspin::serialize_config(cfg);
    return 0;
}

int oracle_check(std::uint64_t seed) {
    bool all = true;
    for (const auto& r : cspin::run_oracle_check(seed)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " -- " << r.detail << '\n';
        all = all && r.passed;
    }
    return all ? 0 : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic wave-function trajectories in the central spin model"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset_name;
    std::uint64_t oracle_seed = 0;
    CommonFlags run_flags;
    CommonFlags preset_flags;

    auto* run = app.add_subcommand("run", "run the experiment described by a config file");
    run->add_option("config", config_path, "config file")->required();
    run_flags.attach(run);

    auto* preset = app.add_subcommand("preset", "run a figure preset");
    preset->add_option("name", preset_name, "fig1|fig2_top|fig2_bottom|fig3")->required();
    preset_flags.attach(preset);

    auto* val = app.add_subcommand("validate", "parse a config and print it with defaults");
    val->add_option("config", config_path, "config file")->required();

    auto* oracle = app.add_subcommand("oracle-check", "run the oracle-equivalence suite");
    oracle->add_option("--seed", oracle_seed, "seed for random parameter draws");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*run) {
            return run_config(config_path, run_flags);
        }
        if (*preset) {
            return run_preset(preset_name, preset_flags);
        }
        if (*val) {
            return validate(config_path);
        }
        if (*oracle) {
            return oracle_check(oracle_seed);
        }
    } catch (const cspin::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitRuntime;
}
