#pragma once

#include <string>

#include <json.hpp>

#include "convsub/convolution.hpp"
#include "convsub/empirical.hpp"
#include "convsub/spatial.hpp"
#include "convsub/subsampling.hpp"

namespace convsub::io {

/// One real per line; blank lines and anything after '#' are ignored.
Vector parse_series(const std::string& text);
Vector read_series(const std::string& path);
std::string format_series(const VectorRef& series);
void write_series(const std::string& path, const VectorRef& series);

/// Header `d e1 ... ed`, then prod(e) whitespace-separated values, row-major.
LatticeField parse_field(const std::string& text);
LatticeField read_field(const std::string& path);
std::string format_field(const LatticeField& field);
void write_field(const std::string& path, const LatticeField& field);

/// Shortest round-trip text for a double.
std::string format_double(double x);

/// Type-7 (linear interpolation) quantile of sorted data.
double quantile_sorted(const VectorRef& sorted, double p);

/// Levels reported as "atom quantiles" in estimate files.
inline constexpr double kReportedQuantiles[] = {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99};

nlohmann::json estimate_to_json(const SubsamplingEstimate& est);
SubsamplingEstimate estimate_from_json(const nlohmann::json& j);

nlohmann::json convolved_to_json(const ConvolvedDistribution& conv);

/// {"kind": kind, "count": ..., "mean", "variance", "quantiles", "atoms"}.
nlohmann::json distribution_to_json(const EmpiricalDistribution& dist, const std::string& kind);

/// Reads the "atoms" array of any file written by this library.
EmpiricalDistribution distribution_from_json(const nlohmann::json& j);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
nlohmann::json read_json(const std::string& path);

}  // namespace convsub::io
