// experiment.hpp: Running configured experiments and the figure presets.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cspin/config.hpp"
#include "cspin/observables.hpp"

namespace cspin {

struct HistogramPoint {
    double t;
    ProjectionHistogram histogram;
};

struct ResultRecord {
    ExperimentConfig config;  // finalized, defaults resolved
    ObservableSeries series;
    std::vector<HistogramPoint> histograms;  // only when config.histograms
    std::vector<std::string> notes;          // provenance of preset defaults
    double wall_clock_seconds = 0.0;
};

ResultRecord run_experiment(const ExperimentConfig& cfg);

// Command-line overrides applied on top of preset defaults.
struct PresetOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> workers;
    std::optional<Method> method;
};

const std::vector<std::string>& preset_names();

struct PresetMember {
    ExperimentConfig config;
    std::vector<std::string> notes;
};

// fig1        N in {2, 10, 80}, delta = 0, h = 0.01, |a_up|^2 = 0.4
// fig2_top    N = 10, constant h = 0.01 vs h = 0.01, delta_h = 0.02, t in [0, 2000]
// fig2_bottom N = 10, h in {0.01, 0.5, 10}, delta_h = 0.02
// fig3        N = 10, h = 0.01, delta_h = 0.02, delta in {0.002, 0.01, 0.02, 0.05, 0.1}
// Throws ConfigError for unknown names.
std::vector<PresetMember> preset_members(std::string_view name,
                                         const PresetOverrides& overrides = {});

std::vector<ResultRecord> run_preset(std::string_view name,
                                     const PresetOverrides& overrides = {});

}  // namespace cspin
