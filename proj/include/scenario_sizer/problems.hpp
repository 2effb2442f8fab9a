#pragma once
//
// Scenario problems: a sampler of random constraints, a deterministic solver
// for a finite set of sampled constraints, and the risk of a solution, i.e.
// the probability that a fresh constraint is violated.
//

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scenario_sizer/distributions.hpp"
#include "scenario_sizer/lp.hpp"

namespace scenario_sizer {

/// 1-based index of a repetition; problems with a time-varying law use it.
using Step = std::int64_t;

/// A sampled constraint. The payload layout is fixed per problem.
struct Constraint {
  std::vector<double> u;
};

enum class SolverStatus { optimal, unbounded, infeasible, failed };

const char* to_string(SolverStatus status);

struct Solution {
  SolverStatus status = SolverStatus::optimal;
  std::vector<double> x;
  double objective = 0.0;
  /// Problem-specific cached quantities (for instance min_i x_i).
  std::vector<double> meta;

  bool feasible() const noexcept { return status == SolverStatus::optimal; }
};

class ScenarioProblem {
 public:
  virtual ~ScenarioProblem() = default;

  virtual std::string id() const = 0;
  virtual Constraint sample(Rng& rng, Step t) const = 0;
  virtual Solution solve(std::span<const Constraint> scenarios, Step t) const = 0;
  /// Exact risk when it has a closed form; nullopt otherwise.
  virtual std::optional<double> exact_risk(const Solution& solution, Step t) const = 0;
  /// g(x; scenario); the scenario is violated when the value is positive.
  virtual double violation(const Solution& solution, const Constraint& scenario, Step t) const = 0;
};

/// Risk is the d-th smallest of N uniform scenarios, i.e. exactly
/// Beta(d, N - d + 1) for N >= d, and 1 for N < d.
std::unique_ptr<ScenarioProblem> synthetic_beta_problem(int d);

/// min x s.t. x >= u, u ~ Normal(mu, sigma^2). Complexity 1.
std::unique_ptr<ScenarioProblem> half_line_problem(double mu, double sigma);

/// min sum_i x_i s.t. u . x <= 1, u ~ Normal(0, I_dim). Complexity dim.
std::unique_ptr<ScenarioProblem> gaussian_lp_problem(int dim);

/// min sum_i x_i s.t. min_i x_i >= u, u ~ dist.
std::unique_ptr<ScenarioProblem> max_coordinate_problem(
    int dim, std::shared_ptr<const ScalarDistribution> dist);

/// Exact LP behind gaussian_lp_problem for a given scenario set.
LpProblem gaussian_lp_instance(std::span<const Constraint> scenarios, int dim);

}  // namespace scenario_sizer
