#pragma once
//
// Command-line front end: `run`, `fit` and `size` subcommands.
//
// Exit status: 0 success, 2 usage or configuration error, 3 runtime failure.
//

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scenario_sizer/sizer.hpp"

namespace scenario_sizer::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_runtime = 3;

struct RunOptions {
  std::filesystem::path config;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
  std::optional<std::int64_t> steps;
  std::optional<std::filesystem::path> output_dir;
  int jobs = 1;
  bool plot = false;
  bool timing = false;
};

struct FitOptions {
  std::filesystem::path csv;
  /// Sample size for the histogram/pdf overlay.
  std::optional<SampleSize> overlay_n;
  std::optional<std::filesystem::path> plot;
};

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_fit(const FitOptions& options, std::ostream& out, std::ostream& err);
int cmd_size(const SizerQuery& query, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches. Never throws.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace scenario_sizer::cli
