#pragma once
//
// Closed-loop sample-size adaptation for repetitive scenario design.
//
// Every step draws N_t scenarios, solves, measures the risk v_t of the solution,
// appends (v_t, N_t, w_t) to the dataset, refits theta_t and sets
//
//   N_{t+1} = min(optimal_sample_size(theta_t; epsilon, beta), n_max).
//
// When the dataset carries no information about theta the sample size is kept.
//

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "scenario_sizer/mle.hpp"
#include "scenario_sizer/problems.hpp"

namespace scenario_sizer {

enum class Weighting { uniform, linear };

enum class RiskMode { exact, bernoulli };

struct ControllerConfig {
  double epsilon = 0.1;
  double beta = 0.9;
  SampleSize n_initial = 1;
  SampleSize n_max = 1'000'000;
  Weighting weighting = Weighting::uniform;
  RiskMode risk_mode = RiskMode::exact;
  std::int64_t bernoulli_samples = 10'000;
};

/// Throws std::invalid_argument on violated invariants.
void validate(const ControllerConfig& config);

struct ControllerState {
  Dataset dataset;
  std::optional<double> theta;
  SampleSize n_next = 1;
  Step step = 0;
};

struct TraceRecord {
  Step t = 0;
  SampleSize n = 0;
  /// Fit after this step; empty while the likelihood is flat.
  std::optional<double> theta;
  double risk = 0.0;
  bool violation = false;
  SolverStatus status = SolverStatus::optimal;
  std::chrono::duration<double, std::milli> elapsed{0.0};
};

class Controller {
 public:
  explicit Controller(ControllerConfig config);

  const ControllerConfig& config() const noexcept { return config_; }
  const ControllerState& state() const noexcept { return state_; }

  /// One iteration of the loop. Solver errors are recorded as risk 1, never thrown.
  TraceRecord step(const ScenarioProblem& problem, Rng& rng);

 private:
  ControllerConfig config_;
  ControllerState state_;
};

/// T steps from a fresh controller with an engine seeded by `seed`.
std::vector<TraceRecord> run(const ScenarioProblem& problem, const ControllerConfig& config,
                             std::int64_t steps, std::uint64_t seed);

/// Fraction of `samples` fresh scenarios violated by the solution.
double bernoulli_risk(const ScenarioProblem& problem, const Solution& solution, Step t,
                      std::int64_t samples, Rng& rng);

/// Hoeffding bound 2 exp(-2 eta^2 S) on P[|empirical risk - risk| > eta].
double hoeffding_confidence(std::int64_t samples, double eta);

}  // namespace scenario_sizer
