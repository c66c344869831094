// config.hpp: Flat key-value experiment configuration.
//
// One `key = value` pair per line; `#` starts a comment. Keys:
//
//   N             environment size (required)
//   h             base coupling (required unless `couplings` is given)
//   delta_h       dispersion; h_j = h + (j-1) delta_h / N      [0]
//   couplings     explicit comma-separated h_1..h_N (excludes h/delta_h)
//   delta         mu - nu                                       [0]
//   beta          inverse temperature                           [0]
//   t0            preparation time                              [0]
//   alpha_up_sq   |alpha_up|^2 in [0, 1] (required)
//   alpha_phase   relative phase of alpha_down, radians         [0]
//   epsilon       classicality error in (0, 0.5)                [1e-3]
//   t_start       first grid edge (>= t0)                       [t0]
//   t_end         last grid edge                                [400]
//   steps         grid points, offset half a step from edges    [600]
//   method        auto|exact|binomial|sampled|exact-universe    [auto]
//   samples       Monte Carlo draws per grid point              [100000]
//   seed          64-bit RNG seed                               [0]
//   workers       worker threads                                [1]
//   output        output path (empty = stdout)                  []
//   format        csv|json                                      [csv]
//   histograms    true|false, export P(u) per grid point        [false]
//   preset        preset name this config came from             []
//
// `auto` resolves at parse time: exact for N <= 16, binomial if all h_j are
// equal, sampled otherwise.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cspin/model.hpp"
#include "cspin/observables.hpp"

namespace cspin {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& reason);
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

enum class OutputFormat : std::uint8_t { csv, json };

const char* to_string(OutputFormat f) noexcept;
OutputFormat parse_format(const std::string& name);

struct ExperimentConfig {
    std::size_t n_env = 0;
    double h = 0.0;
    double delta_h = 0.0;
    std::vector<double> couplings;  // explicit list; empty when h/delta_h are used
    double delta = 0.0;
    double beta = 0.0;
    double t0 = 0.0;
    double alpha_up_sq = 0.0;
    double alpha_phase = 0.0;
    double epsilon = kDefaultEpsilon;
    double t_start = 0.0;
    double t_end = 400.0;
    std::size_t steps = 600;
    Method method = Method::automatic;
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::string output;
    OutputFormat format = OutputFormat::csv;
    bool histograms = false;
    std::string preset;

    ModelParams model() const;
    SystemAmplitudes alphas() const;
    std::vector<double> grid() const;
    SamplingBudget budget() const;
    // "h=<h>", "h=<h>;dh=<dh>" or "list=<h1>;<h2>;..."
    std::string h_spec() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Checks every invariant and resolves `auto`. Throws ConfigError.
void finalize(ExperimentConfig& cfg);

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical document; parse_config(serialize_config(c)) == c for finalized c.
std::string serialize_config(const ExperimentConfig& cfg);

// Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

}  // namespace cspin
