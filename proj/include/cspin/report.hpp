// report.hpp: CSV / JSON serialization of result records.
//
// CSV columns (one row per grid point of every record, single header):
//   t,p_up,p_down,p_q,method,n_samples,seed,N,delta,h_spec,epsilon
// n_samples is the per-point sample count for the sampled method and 0
// otherwise. Numbers use the shortest round-trip decimal form, so identical
// configs and seeds give byte-identical files.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cspin/config.hpp"
#include "cspin/experiment.hpp"

namespace cspin {

inline constexpr const char* kCsvHeader =
    "t,p_up,p_down,p_q,method,n_samples,seed,N,delta,h_spec,epsilon";

void write_csv(std::ostream& out, const std::vector<ResultRecord>& records);

// Wall-clock time varies between runs; it is written only when asked for.
nlohmann::json to_json(const ResultRecord& record, bool include_timing = false);
void write_json(std::ostream& out, const std::vector<ResultRecord>& records,
                bool include_timing = false);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
// Inverse of config_to_json; validates like parse_config.
ExperimentConfig config_from_json(const nlohmann::json& j);

// Writes to path, or to stdout when path is empty. Throws std::runtime_error
// on IO failure.
void emit_results(const std::vector<ResultRecord>& records, OutputFormat format,
                  const std::filesystem::path& path, bool include_timing = false);

}  // namespace cspin
