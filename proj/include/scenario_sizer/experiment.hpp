#pragma once
//
// Batch experiments: configuration, problem construction, CSV/SVG output.
//
// Configuration is a flat map of dotted keys, read either from `key = value`
// lines (with `#` comments) or from a flat JSON object.
//

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "scenario_sizer/controller.hpp"
#include "scenario_sizer/problems.hpp"

namespace scenario_sizer {

/// Invalid configuration or input file; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(std::string_view text);
ConfigMap load_config_file(const std::filesystem::path& path);

/// Applies `key=value` overrides on top of a map.
void apply_override(ConfigMap& config, std::string_view assignment);

struct ExperimentConfig {
  std::string problem_id;
  ConfigMap problem_params;
  ControllerConfig controller;
  std::int64_t steps = 1000;
  int replications = 1;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";
};

/// Validates keys and values. Throws ConfigError.
ExperimentConfig experiment_from_config(const ConfigMap& config);

/// Builds the problem named by config.problem_id. Throws ConfigError.
std::unique_ptr<ScenarioProblem> make_problem(const ExperimentConfig& config);

struct ReplicationSummary {
  int replication = 0;
  std::uint64_t seed = 0;
  std::int64_t steps = 0;
  /// Fraction of steps with risk <= epsilon.
  double within_tolerance = 0.0;
  std::optional<double> final_theta;
  SampleSize final_n = 0;
  double mean_risk = 0.0;
  double risk_q50 = 0.0;
  double risk_q90 = 0.0;
  double risk_q99 = 0.0;
};

ReplicationSummary summarize(std::span<const TraceRecord> trace, double epsilon, int replication,
                             std::uint64_t seed);

/// Linear-interpolation quantile of an unsorted sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Columns t,N,theta,risk,violation,solver_status,elapsed_ms. Wall-clock time is
/// only written when `with_timing`; otherwise elapsed_ms is 0 and the output is
/// a pure function of the records.
std::string trace_csv(std::span<const TraceRecord> trace, double epsilon, bool with_timing = false);

std::string summary_csv(std::span<const ReplicationSummary> rows);

/// Three stacked panels: N_t, theta_t and the empirical cdf of the risks.
std::string trace_svg(std::span<const TraceRecord> trace, double epsilon, double beta);

/// Histogram of the risks observed at sample size n with the fitted density on top.
std::string fit_overlay_svg(std::span<const DataPoint> data, double theta, SampleSize n);

/// Reads `v,N[,w]` rows (optional header). Throws ConfigError on malformed or empty input.
Dataset read_dataset_csv(std::istream& in);

}  // namespace scenario_sizer
