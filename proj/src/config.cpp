#include "cspin/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace cspin {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, std::string_view text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(key, "expected a real number, got '" + std::string(text) + "'");
    }
    if (!std::isfinite(value)) {
        throw ConfigError(key, "value must be finite");
    }
    return value;
}

std::uint64_t parse_unsigned(const std::string& key, std::string_view text) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return value;
}

bool parse_bool(const std::string& key, std::string_view text) {
    if (text == "true") {
        return true;
    }
    if (text == "false") {
        return false;
    }
    throw ConfigError(key, "expected true or false, got '" + std::string(text) + "'");
}

std::vector<double> parse_list(const std::string& key, std::string_view text) {
    std::vector<double> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        out.push_back(parse_real(key, trim(text.substr(0, comma))));
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    if (out.empty()) {
        throw ConfigError(key, "list is empty");
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& reason)
    : std::runtime_error("config key '" + key + "': " + reason), key_(std::move(key)) {}

const char* to_string(OutputFormat f) noexcept {
    return f == OutputFormat::csv ? "csv" : "json";
}

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") {
        return OutputFormat::csv;
    }
    if (name == "json") {
        return OutputFormat::json;
    }
    throw ConfigError("format", "expected csv or json, got '" + name + "'");
}

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, ptr);
}

ModelParams ExperimentConfig::model() const {
    std::vector<double> h_values =
        couplings.empty() ? dispersed_couplings(h, delta_h, n_env) : couplings;
    return ModelParams(delta, std::move(h_values), beta, t0);
}

SystemAmplitudes ExperimentConfig::alphas() const {
    return SystemAmplitudes::from_probability(alpha_up_sq, alpha_phase);
}

std::vector<double> ExperimentConfig::grid() const {
    return offset_grid(t_start, t_end, steps);
}

SamplingBudget ExperimentConfig::budget() const {
    return {samples, seed, workers};
}

std::string ExperimentConfig::h_spec() const {
    if (!couplings.empty()) {
        std::string out = "list=";
        for (std::size_t j = 0; j < couplings.size(); ++j) {
            out += (j ? ";" : "") + format_double(couplings[j]);
        }
        return out;
    }
    std::string out = "h=" + format_double(h);
    if (delta_h != 0.0) {
        out += ";dh=" + format_double(delta_h);
    }
    return out;
}

void finalize(ExperimentConfig& cfg) {
    if (cfg.n_env < 1) {
        throw ConfigError("N", "must be >= 1");
    }
    if (!cfg.couplings.empty()) {
        if (cfg.couplings.size() != cfg.n_env) {
            throw ConfigError("couplings", "has " + std::to_string(cfg.couplings.size()) +
                                               " entries but N = " + std::to_string(cfg.n_env));
        }
        if (cfg.h != 0.0 || cfg.delta_h != 0.0) {
            throw ConfigError("couplings", "cannot be combined with h or delta_h");
        }
    }
    if (cfg.beta < 0.0) {
        throw ConfigError("beta", "must be >= 0");
    }
    if (!(cfg.alpha_up_sq >= 0.0 && cfg.alpha_up_sq <= 1.0)) {
        throw ConfigError("alpha_up_sq", "must lie in [0, 1]");
    }
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5)) {
        throw ConfigError("epsilon", "must lie in (0, 0.5)");
    }
    if (cfg.steps < 1) {
        throw ConfigError("steps", "must be >= 1");
    }
    if (cfg.t_start < cfg.t0) {
        throw ConfigError("t_start", "must not precede t0");
    }
    if (!(cfg.t_end > cfg.t_start)) {
        throw ConfigError("t_end", "must exceed t_start");
    }
    if (cfg.samples < 1) {
        throw ConfigError("samples", "must be >= 1");
    }
    if (cfg.workers < 1) {
        throw ConfigError("workers", "must be >= 1");
    }
    ModelParams params = [&] {
        try {
            return cfg.model();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("N", e.what());
        }
    }();
    cfg.method = resolve_method(params, cfg.method);
    if (cfg.method == Method::binomial && !params.constant_coupling()) {
        throw ConfigError("method", "binomial requires constant couplings");
    }
    if (cfg.method == Method::exact && params.env_size() > kEnumerationCap) {
        throw ConfigError("method", "exact enumeration is capped at N = " +
                                        std::to_string(kEnumerationCap));
    }
    if (cfg.method == Method::exact_universe && params.env_size() > kDefaultUniverseCap) {
        throw ConfigError("method", "exact-universe is capped at N = " +
                                        std::to_string(kDefaultUniverseCap));
    }
}

ExperimentConfig parse_config(std::string_view text) {
    std::map<std::string, std::pair<std::string, std::size_t>> entries;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(line), "line " + std::to_string(line_no) +
                                                     " is not of the form key = value");
        }
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (!entries.emplace(key, std::make_pair(value, line_no)).second) {
            throw ConfigError(key, "given more than once (line " + std::to_string(line_no) + ")");
        }
    }

    ExperimentConfig cfg;
    bool have_n = false;
    bool have_h = false;
    bool have_alpha = false;
    bool have_t_start = false;
    for (const auto& [key, entry] : entries) {
        const std::string& v = entry.first;
        if (key == "N") {
            cfg.n_env = parse_unsigned(key, v);
            have_n = true;
        } else if (key == "h") {
            cfg.h = parse_real(key, v);
            have_h = true;
        } else if (key == "delta_h") {
            cfg.delta_h = parse_real(key, v);
        } else if (key == "couplings") {
            cfg.couplings = parse_list(key, v);
            have_h = true;
        } else if (key == "delta") {
            cfg.delta = parse_real(key, v);
        } else if (key == "beta") {
            cfg.beta = parse_real(key, v);
        } else if (key == "t0") {
            cfg.t0 = parse_real(key, v);
        } else if (key == "alpha_up_sq") {
            cfg.alpha_up_sq = parse_real(key, v);
            have_alpha = true;
        } else if (key == "alpha_phase") {
            cfg.alpha_phase = parse_real(key, v);
        } else if (key == "epsilon") {
            cfg.epsilon = parse_real(key, v);
        } else if (key == "t_start") {
            cfg.t_start = parse_real(key, v);
            have_t_start = true;
        } else if (key == "t_end") {
            cfg.t_end = parse_real(key, v);
        } else if (key == "steps") {
            cfg.steps = parse_unsigned(key, v);
        } else if (key == "method") {
            try {
                cfg.method = parse_method(v);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(key, e.what());
            }
        } else if (key == "samples") {
            cfg.samples = parse_unsigned(key, v);
        } else if (key == "seed") {
            cfg.seed = parse_unsigned(key, v);
        } else if (key == "workers") {
            cfg.workers = parse_unsigned(key, v);
        } else if (key == "output") {
            cfg.output = v;
        } else if (key == "format") {
            cfg.format = parse_format(v);
        } else if (key == "histograms") {
            cfg.histograms = parse_bool(key, v);
        } else if (key == "preset") {
            cfg.preset = v;
        } else {
            throw ConfigError(key, "unknown key (line " + std::to_string(entry.second) + ")");
        }
    }
    if (!have_n) {
        throw ConfigError("N", "required key missing");
    }
    if (!have_h) {
        throw ConfigError("h", "required key missing (or give couplings)");
    }
    if (!have_alpha) {
        throw ConfigError("alpha_up_sq", "required key missing");
    }
    if (!have_t_start) {
        cfg.t_start = cfg.t0;
    }
    finalize(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("<file>", "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "N = " << cfg.n_env << '\n';
    if (cfg.couplings.empty()) {
        out << "h = " << format_double(cfg.h) << '\n';
        out << "delta_h = " << format_double(cfg.delta_h) << '\n';
    } else {
        out << "couplings = ";
        for (std::size_t j = 0; j < cfg.couplings.size(); ++j) {
            out << (j ? ", " : "") << format_double(cfg.couplings[j]);
        }
        out << '\n';
    }
    out << "delta = " << format_double(cfg.delta) << '\n';
    out << "beta = " << format_double(cfg.beta) << '\n';
    out << "t0 = " << format_double(cfg.t0) << '\n';
    out << "alpha_up_sq = " << format_double(cfg.alpha_up_sq) << '\n';
    out << "alpha_phase = " << format_double(cfg.alpha_phase) << '\n';
    out << "epsilon = " << format_double(cfg.epsilon) << '\n';
    out << "t_start = " << format_double(cfg.t_start) << '\n';
    out << "t_end = " << format_double(cfg.t_end) << '\n';
    out << "steps = " << cfg.steps << '\n';
    out << "method = " << to_string(cfg.method) << '\n';
    out << "samples = " << cfg.samples << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "workers = " << cfg.workers << '\n';
    if (!cfg.output.empty()) {
        out << "output = " << cfg.output << '\n';
    }
    out << "format = " << to_string(cfg.format) << '\n';
    out << "histograms = " << (cfg.histograms ? "true" : "false") << '\n';
    if (!cfg.preset.empty()) {
        out << "preset = " << cfg.preset << '\n';
    }
    return out.str();
}

}  // namespace cspin
