#include "cspin/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace cspin {

namespace {

std::string json_scalar_text(const std::string& key, const nlohmann::json& v) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_boolean()) {
        return v.get<bool>() ? "true" : "false";
    }
    if (v.is_number_unsigned()) {
        return std::to_string(v.get<std::uint64_t>());
    }
    if (v.is_number_integer()) {
        return std::to_string(v.get<std::int64_t>());
    }
    if (v.is_number_float()) {
        return format_double(v.get<double>());
    }
    throw ConfigError(key, "unsupported JSON value type");
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRecord>& records) {
    out << kCsvHeader << '\n';
    for (const auto& rec : records) {
        const auto& cfg = rec.config;
        const auto& s = rec.series;
        const std::string tail =
            std::string(to_string(s.method)) + ',' +
            std::to_string(s.method == Method::sampled ? cfg.samples : 0) + ',' +
            std::to_string(cfg.seed) + ',' + std::to_string(cfg.n_env) + ',' +
            format_double(cfg.delta) + ',' + cfg.h_spec() + ',' + format_double(s.epsilon);
        for (std::size_t i = 0; i < s.size(); ++i) {
            out << format_double(s.times[i]) << ',' << format_double(s.p_up[i]) << ','
                << format_double(s.p_down[i]) << ',' << format_double(s.p_q[i]) << ',' << tail
                << '\n';
        }
    }
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["N"] = cfg.n_env;
    if (cfg.couplings.empty()) {
        j["h"] = cfg.h;
        j["delta_h"] = cfg.delta_h;
    } else {
        j["couplings"] = cfg.couplings;
    }
    j["delta"] = cfg.delta;
    j["beta"] = cfg.beta;
    j["t0"] = cfg.t0;
    j["alpha_up_sq"] = cfg.alpha_up_sq;
    j["alpha_phase"] = cfg.alpha_phase;
    j["epsilon"] = cfg.epsilon;
    j["t_start"] = cfg.t_start;
    j["t_end"] = cfg.t_end;
    j["steps"] = cfg.steps;
    j["method"] = to_string(cfg.method);
    j["samples"] = cfg.samples;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    if (!cfg.output.empty()) {
        j["output"] = cfg.output;
    }
    j["format"] = to_string(cfg.format);
    j["histograms"] = cfg.histograms;
    if (!cfg.preset.empty()) {
        j["preset"] = cfg.preset;
    }
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ConfigError("<json>", "config must be a JSON object");
    }
    std::string text;
    for (const auto& [key, value] : j.items()) {
        std::string rendered;
        if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i) {
                rendered += (i ? ", " : "") + json_scalar_text(key, value[i]);
            }
        } else {
            rendered = json_scalar_text(key, value);
        }
        text += key + " = " + rendered + "\n";
    }
    return parse_config(text);
}

nlohmann::json to_json(const ResultRecord& record, bool include_timing) {
    const auto& s = record.series;
    nlohmann::json j;
    j["config"] = config_to_json(record.config);
    j["notes"] = record.notes;
    j["series"] = {{"method", to_string(s.method)},
                   {"epsilon", s.epsilon},
                   {"t", s.times},
                   {"p_up", s.p_up},
                   {"p_down", s.p_down},
                   {"p_q", s.p_q}};
    nlohmann::json perturbations = nlohmann::json::array();
    for (const auto& p : s.perturbations) {
        perturbations.push_back({{"index", p.index}, {"requested", p.requested}, {"used", p.used}});
    }
    j["diagnostics"] = {{"dropped_atoms", s.dropped_atoms}, {"node_perturbations", perturbations}};
    if (!record.histograms.empty()) {
        nlohmann::json hs = nlohmann::json::array();
        for (const auto& h : record.histograms) {
            hs.push_back({{"t", h.t},
                          {"at_zero", h.histogram.at_zero},
                          {"at_one", h.histogram.at_one},
                          {"bins", h.histogram.bins}});
        }
        j["histograms"] = std::move(hs);
    }
    if (include_timing) {
        j["wall_clock_seconds"] = record.wall_clock_seconds;
    }
    return j;
}

void write_json(std::ostream& out, const std::vector<ResultRecord>& records,
                bool include_timing) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& rec : records) {
        arr.push_back(to_json(rec, include_timing));
    }
    out << arr.dump(2) << '\n';
}

void emit_results(const std::vector<ResultRecord>& records, OutputFormat format,
                  const std::filesystem::path& path, bool include_timing) {
    auto write = [&](std::ostream& out) {
        if (format == OutputFormat::csv) {
            write_csv(out, records);
        } else {
            write_json(out, records, include_timing);
        }
    };
    if (path.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open output file " + path.string());
    }
    write(out);
    out.flush();
    if (!out) {
        throw std::runtime_error("failed writing output file " + path.string());
    }
}

}  // namespace cspin
