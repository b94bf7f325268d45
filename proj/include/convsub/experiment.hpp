#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "convsub/processes.hpp"

namespace convsub {

enum class Metric { KsSub, KsConv, KsBoot, VarSub, MeanSub, SkewSub, SkewConv, TruncMoment, D2Gap, MsubRootK };

const char* metric_name(Metric m);
Metric metric_from_name(const std::string& name);

/// A replication study: one process, a grid n x b x k, `reps` replications
/// per grid cell.
struct ExperimentConfig {
    ProcessSpec process = AR1Process{};
    std::string statistic = "mean";
    double alpha = 1.0;
    std::optional<double> theta;   ///< oracle parameter; centers trunc_moment atoms when set
    std::vector<std::size_t> n;
    std::vector<std::size_t> b;
    std::vector<std::optional<std::size_t>> k;  ///< nullopt = auto, floor(n / b)
    std::size_t reps = 1;
    std::uint64_t seed = 0;
    std::vector<Metric> metrics;
    std::vector<double> trunc_m;
    std::optional<double> sigma2;  ///< known long-run variance for the KS metrics
    std::size_t conv_mc = 20'000;
    std::size_t boot_reps = 20'000;
    std::size_t d2_reps = 1'000;
    unsigned workers = 1;
    std::string csv_path;
    std::string summary_path;

    bool operator==(const ExperimentConfig&) const = default;
};

using KeyValues = std::map<std::string, std::string>;
using Sections = std::map<std::string, KeyValues>;

/// INI-style text: `[section]` headers, `key = value` lines, '#' comments.
Sections parse_sections(const std::string& text);

/// Process description from `[process]` keys (also used by the CLI).
ProcessSpec process_from_keys(const KeyValues& keys);
KeyValues process_to_keys(const ProcessSpec& spec);

/// Throws ConfigInvalid naming the offending field.
ExperimentConfig parse_config(const std::string& text);
/// JSON encoding of the same sections: {"process": {...}, "grid": {"n": [..]}, ...}.
ExperimentConfig parse_config_json(const nlohmann::json& j);
/// Dispatches on the first non-blank character ('{' means JSON).
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

/// CSV column names after rep,n,b,k, in requested order. trunc_moment
/// expands to one `trunc_m=<m>` column per truncation level.
std::vector<std::string> metric_columns(const ExperimentConfig& config);

struct ExperimentReport {
    std::string csv_header;
    std::string csv_body;
    nlohmann::json summary;
    std::vector<std::string> columns;          ///< full CSV column list
    std::vector<std::vector<double>> rows;     ///< cell-major, then rep
};

/// Runs every (cell, rep), writes the CSV and summary files when their paths
/// are set. The CSV body is a pure function of the config.
ExperimentReport run_experiment(const ExperimentConfig& config);

struct CompareResult {
    double ks = 0.0;
    double d2 = 0.0;
    double mean_delta = 0.0;      ///< mean(B) - mean(A)
    double variance_delta = 0.0;  ///< second central moments
    double third_delta = 0.0;     ///< third central moments
};

CompareResult compare(const std::string& path_a, const std::string& path_b);
CompareResult compare(const EmpiricalDistribution& a, const EmpiricalDistribution& b);
nlohmann::json to_json(const CompareResult& r);

}  // namespace convsub
