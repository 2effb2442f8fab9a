#include "scenario_sizer/controller.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

#include "scenario_sizer/sizer.hpp"

namespace scenario_sizer {

void validate(const ControllerConfig& c) {
  if (!(c.epsilon > 0.0 && c.epsilon < c.beta && c.beta < 1.0)) {
    throw std::invalid_argument("controller: requires 0 < epsilon < beta < 1");
  }
  if (c.n_initial < 1) throw std::invalid_argument("controller: n_initial must be at least 1");
  if (c.n_max < c.n_initial) throw std::invalid_argument("controller: n_initial exceeds n_max");
  if (c.bernoulli_samples < 1) throw std::invalid_argument("controller: bernoulli_samples must be >= 1");
}

Controller::Controller(ControllerConfig config) : config_(config) {
  validate(config_);
  state_.n_next = config_.n_initial;
}

TraceRecord Controller::step(const ScenarioProblem& problem, Rng& rng) {
  const auto started = std::chrono::steady_clock::now();
  TraceRecord rec;
  rec.t = state_.step + 1;
  rec.n = state_.n_next;

  std::vector<Constraint> scenarios;
  scenarios.reserve(static_cast<std::size_t>(rec.n));
  for (SampleSize i = 0; i < rec.n; ++i) scenarios.push_back(problem.sample(rng, rec.t));

  Solution solution;
  try {
    solution = problem.solve(scenarios, rec.t);
  } catch (const std::exception&) {
    solution.status = SolverStatus::failed;
  }
  rec.status = solution.status;

  if (!solution.feasible()) {
    rec.risk = 1.0;
  } else {
    std::optional<double> exact;
    if (config_.risk_mode == RiskMode::exact) exact = problem.exact_risk(solution, rec.t);
    rec.risk = exact ? *exact : bernoulli_risk(problem, solution, rec.t, config_.bernoulli_samples, rng);
  }
  rec.violation = rec.risk > config_.epsilon;

  const double weight = config_.weighting == Weighting::linear ? static_cast<double>(rec.t) : 1.0;
  state_.dataset.push_back({rec.risk, rec.n, weight});
  state_.step = rec.t;

  const FitResult fitted = fit(state_.dataset);
  state_.theta = fitted.theta;
  rec.theta = fitted.theta;
  if (fitted.theta) {
    state_.n_next = optimal_sample_size({*fitted.theta, config_.epsilon, config_.beta, config_.n_max});
  }

  rec.elapsed = std::chrono::steady_clock::now() - started;
  return rec;
}

std::vector<TraceRecord> run(const ScenarioProblem& problem, const ControllerConfig& config,
                             std::int64_t steps, std::uint64_t seed) {
  if (steps < 1) throw std::invalid_argument("run: steps must be positive");
  Controller controller(config);
  Rng rng(seed);
  std::vector<TraceRecord> trace;
  trace.reserve(static_cast<std::size_t>(steps));
  for (std::int64_t k = 0; k < steps; ++k) trace.push_back(controller.step(problem, rng));
  return trace;
}

double bernoulli_risk(const ScenarioProblem& problem, const Solution& solution, Step t,
                      std::int64_t samples, Rng& rng) {
  if (samples < 1) throw std::invalid_argument("bernoulli_risk: needs at least one sample");
  std::int64_t violated = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    if (problem.violation(solution, problem.sample(rng, t), t) > 0.0) ++violated;
  }
  return static_cast<double>(violated) / static_cast<double>(samples);
}

double hoeffding_confidence(std::int64_t samples, double eta) {
  if (samples < 1) throw std::invalid_argument("hoeffding_confidence: samples must be >= 1");
  if (!(eta > 0.0)) throw std::invalid_argument("hoeffding_confidence: eta must be positive");
  return 2.0 * std::exp(-2.0 * eta * eta * static_cast<double>(samples));
}

}  // namespace scenario_sizer
