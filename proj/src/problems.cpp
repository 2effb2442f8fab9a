#include "scenario_sizer/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace scenario_sizer {

const char* to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::optimal:
      return "optimal";
    case SolverStatus::unbounded:
      return "unbounded";
    case SolverStatus::infeasible:
      return "infeasible";
    case SolverStatus::failed:
      return "failed";
  }
  return "failed";
}

namespace {

class SyntheticBetaProblem final : public ScenarioProblem {
 public:
  explicit SyntheticBetaProblem(int d) : d_(d) {
    if (d < 1) throw std::invalid_argument("synthetic_beta: d must be at least 1");
  }

  std::string id() const override { return "synthetic_beta"; }

  Constraint sample(Rng& rng, Step) const override {
    return {{std::uniform_real_distribution<double>(0.0, 1.0)(rng)}};
  }

  // The decision is the d-th smallest sample; a fresh u violates it when u < x.
  Solution solve(std::span<const Constraint> scenarios, Step) const override {
    Solution s;
    if (scenarios.size() < static_cast<std::size_t>(d_)) {
      s.x = {1.0};
      return s;
    }
    std::vector<double> u;
    u.reserve(scenarios.size());
    for (const auto& c : scenarios) u.push_back(c.u.at(0));
    auto nth = u.begin() + (d_ - 1);
    std::nth_element(u.begin(), nth, u.end());
    s.x = {*nth};
    s.objective = *nth;
    return s;
  }

  std::optional<double> exact_risk(const Solution& s, Step) const override { return s.x.at(0); }

  double violation(const Solution& s, const Constraint& c, Step) const override {
    return s.x.at(0) - c.u.at(0);
  }

 private:
  int d_;
};

class HalfLineProblem final : public ScenarioProblem {
 public:
  HalfLineProblem(double mu, double sigma) : mu_(mu), sigma_(sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("half_line: sigma must be positive");
  }

  std::string id() const override { return "half_line"; }

  Constraint sample(Rng& rng, Step) const override {
    return {{std::normal_distribution<double>(mu_, sigma_)(rng)}};
  }

  Solution solve(std::span<const Constraint> scenarios, Step) const override {
    if (scenarios.empty()) throw std::invalid_argument("half_line: no scenarios to solve");
    double x = -std::numeric_limits<double>::infinity();
    for (const auto& c : scenarios) x = std::max(x, c.u.at(0));
    Solution s;
    s.x = {x};
    s.objective = x;
    return s;
  }

  std::optional<double> exact_risk(const Solution& s, Step) const override {
    return normal_survival((s.x.at(0) - mu_) / sigma_);
  }

  double violation(const Solution& s, const Constraint& c, Step) const override {
    return c.u.at(0) - s.x.at(0);
  }

 private:
  double mu_;
  double sigma_;
};

class GaussianLpProblem final : public ScenarioProblem {
 public:
  explicit GaussianLpProblem(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("gaussian_lp: dim must be at least 1");
  }

  std::string id() const override { return "gaussian_lp"; }

  Constraint sample(Rng& rng, Step) const override {
    std::normal_distribution<double> normal(0.0, 1.0);
    Constraint c;
    c.u.resize(static_cast<std::size_t>(dim_));
    for (auto& ui : c.u) ui = normal(rng);
    return c;
  }

  Solution solve(std::span<const Constraint> scenarios, Step) const override {
    const LpResult lp = solve_lp(gaussian_lp_instance(scenarios, dim_));
    Solution s;
    switch (lp.status) {
      case LpStatus::optimal:
        s.status = SolverStatus::optimal;
        break;
      case LpStatus::unbounded:
        s.status = SolverStatus::unbounded;
        return s;
      case LpStatus::infeasible:
        s.status = SolverStatus::infeasible;
        return s;
    }
    s.x = lp.x;
    s.objective = lp.objective;
    double norm2 = 0.0;
    for (double xi : s.x) norm2 += xi * xi;
    s.meta = {std::sqrt(norm2)};
    return s;
  }

  // u . x ~ Normal(0, |x|^2), so P[u . x > 1] = 1 - Phi(1 / |x|).
  std::optional<double> exact_risk(const Solution& s, Step) const override {
    if (!s.feasible()) return 1.0;
    const double norm = s.meta.at(0);
    if (norm == 0.0) return 0.0;
    return normal_survival(1.0 / norm);
  }

  double violation(const Solution& s, const Constraint& c, Step) const override {
    double dot = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) dot += c.u[i] * s.x[i];
    return dot - 1.0;
  }

 private:
  int dim_;
};

class MaxCoordinateProblem final : public ScenarioProblem {
 public:
  MaxCoordinateProblem(int dim, std::shared_ptr<const ScalarDistribution> dist)
      : dim_(dim), dist_(std::move(dist)) {
    if (dim < 1) throw std::invalid_argument("max_coordinate: dim must be at least 1");
    if (!dist_) throw std::invalid_argument("max_coordinate: missing distribution");
  }

  std::string id() const override { return "max_coordinate"; }

  Constraint sample(Rng& rng, Step) const override { return {{dist_->sample(rng)}}; }

  Solution solve(std::span<const Constraint> scenarios, Step) const override {
    if (scenarios.empty()) throw std::invalid_argument("max_coordinate: no scenarios to solve");
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& c : scenarios) m = std::max(m, c.u.at(0));
    Solution s;
    s.x.assign(static_cast<std::size_t>(dim_), m);
    s.objective = m * dim_;
    s.meta = {m};
    return s;
  }

  std::optional<double> exact_risk(const Solution& s, Step) const override {
    return dist_->survival(s.meta.at(0));
  }

  double violation(const Solution& s, const Constraint& c, Step) const override {
    return c.u.at(0) - s.meta.at(0);
  }

 private:
  int dim_;
  std::shared_ptr<const ScalarDistribution> dist_;
};

}  // namespace

LpProblem gaussian_lp_instance(std::span<const Constraint> scenarios, int dim) {
  LpProblem lp;
  lp.cost.assign(static_cast<std::size_t>(dim), 1.0);
  lp.rows.reserve(scenarios.size());
  for (const auto& c : scenarios) {
    if (c.u.size() != static_cast<std::size_t>(dim)) {
      throw std::invalid_argument("gaussian_lp: scenario has wrong dimension");
    }
    lp.rows.push_back(c.u);
  }
  lp.bounds.assign(scenarios.size(), 1.0);
  return lp;
}

std::unique_ptr<ScenarioProblem> synthetic_beta_problem(int d) {
  return std::make_unique<SyntheticBetaProblem>(d);
}

std::unique_ptr<ScenarioProblem> half_line_problem(double mu, double sigma) {
  return std::make_unique<HalfLineProblem>(mu, sigma);
}

std::unique_ptr<ScenarioProblem> gaussian_lp_problem(int dim) {
  return std::make_unique<GaussianLpProblem>(dim);
}

std::unique_ptr<ScenarioProblem> max_coordinate_problem(
    int dim, std::shared_ptr<const ScalarDistribution> dist) {
  return std::make_unique<MaxCoordinateProblem>(dim, std::move(dist));
}

}  // namespace scenario_sizer
