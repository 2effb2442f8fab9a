#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "scenario_sizer/controller.hpp"
#include "scenario_sizer/sizer.hpp"

using namespace scenario_sizer;

namespace {

// Solver that always fails with the given status, or throws.
class BrokenProblem final : public ScenarioProblem {
 public:
  explicit BrokenProblem(bool throws) : throws_(throws) {}
  std::string id() const override { return "broken"; }
  Constraint sample(Rng&, Step) const override { return {{0.0}}; }
  Solution solve(std::span<const Constraint>, Step) const override {
    if (throws_) throw std::runtime_error("boom");
    Solution s;
    s.status = SolverStatus::unbounded;
    return s;
  }
  std::optional<double> exact_risk(const Solution&, Step) const override { return 0.0; }
  double violation(const Solution&, const Constraint&, Step) const override { return 1.0; }

 private:
  bool throws_;
};

}  // namespace

TEST_CASE("linear weighting uses the step index") {
  const auto p = half_line_problem(1.0, std::sqrt(2.0));
  ControllerConfig cfg;
  cfg.weighting = Weighting::linear;
  Controller c(cfg);
  Rng rng(1);
  for (int k = 0; k < 3; ++k) c.step(*p, rng);
  const auto& d = c.state().dataset;
  REQUIRE(d.size() == 3);
  CHECK(d[0].w == 1.0);
  CHECK(d[1].w == 2.0);
  CHECK(d[2].w == 3.0);

  Controller u(ControllerConfig{});
  for (int k = 0; k < 3; ++k) u.step(*p, rng);
  for (const auto& pt : u.state().dataset) CHECK(pt.w == 1.0);
}

TEST_CASE("same seed gives the same trace") {
  const auto p = gaussian_lp_problem(5);
  ControllerConfig cfg;
  const auto a = run(*p, cfg, 60, 9);
  const auto b = run(*p, cfg, 60, 9);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].n == b[i].n);
    CHECK(a[i].risk == b[i].risk);
    CHECK(a[i].theta == b[i].theta);
  }
}

TEST_CASE("loop invariants on several problems") {
  std::vector<std::unique_ptr<ScenarioProblem>> problems;
  problems.push_back(synthetic_beta_problem(3));
  problems.push_back(half_line_problem(1.0, std::sqrt(2.0)));
  problems.push_back(gaussian_lp_problem(4));
  for (const auto& p : problems) {
    ControllerConfig cfg;
    cfg.n_max = 40;
    Controller c(cfg);
    Rng rng(2);
    SampleSize prev_n = cfg.n_initial;
    for (int k = 1; k <= 150; ++k) {
      const auto rec = c.step(*p, rng);
      CHECK(rec.t == k);
      CHECK(rec.n == prev_n);
      CHECK(rec.n >= 1);
      CHECK(rec.n <= cfg.n_max);
      CHECK(rec.violation == (rec.risk > cfg.epsilon));
      CHECK(rec.risk >= 0.0);
      CHECK(rec.risk <= 1.0);
      CHECK(c.state().dataset.size() == static_cast<std::size_t>(k));
      CHECK(c.state().step == k);
      if (!rec.theta) CHECK(c.state().n_next == rec.n);
      prev_n = c.state().n_next;
    }
  }
}

TEST_CASE("flat fits keep the sample size") {
  // Every risk is zero, so the likelihood never depends on theta.
  const auto atom = std::make_shared<AtomMixtureDistribution>(1.0, 1.0);
  const auto p = max_coordinate_problem(3, atom);
  ControllerConfig cfg;
  cfg.n_initial = 7;
  const auto trace = run(*p, cfg, 20, 3);
  for (const auto& r : trace) {
    CHECK_FALSE(r.theta.has_value());
    CHECK(r.n == 7);
    CHECK(r.risk == 0.0);
  }
}

TEST_CASE("synthetic d = 1 settles at 22") {
  const auto p = synthetic_beta_problem(1);
  const auto trace = run(*p, ControllerConfig{}, 600, 4);
  REQUIRE(trace.back().theta);
  CHECK(std::fabs(*trace.back().theta - 1.0) < 0.15);
  int at_22 = 0;
  for (std::size_t i = 300; i < trace.size(); ++i) {
    if (trace[i].theta && std::fabs(*trace[i].theta - 1.0) < 0.02) {
      CHECK(optimal_sample_size({*trace[i].theta, 0.1, 0.9, 1'000'000}) >= 21);
    }
    at_22 += trace[i].n == 22;
  }
  CHECK(at_22 > 100);
}

TEST_CASE("first step with too few scenarios") {
  const auto p = synthetic_beta_problem(5);
  ControllerConfig cfg;
  cfg.n_initial = 2;
  Controller c(cfg);
  Rng rng(6);
  const auto rec = c.step(*p, rng);
  CHECK(rec.risk == 1.0);
  CHECK(rec.violation);
  REQUIRE(rec.theta);
  CHECK(*rec.theta >= 2.0);
  CHECK(c.state().n_next > *rec.theta);
}

TEST_CASE("solver failures become risk one") {
  for (bool throws : {false, true}) {
    BrokenProblem p(throws);
    Controller c(ControllerConfig{});
    Rng rng(7);
    const auto rec = c.step(p, rng);
    CHECK(rec.risk == 1.0);
    CHECK(rec.status == (throws ? SolverStatus::failed : SolverStatus::unbounded));
  }
}

TEST_CASE("unbounded LP draws are recorded and the loop continues") {
  const auto p = gaussian_lp_problem(20);
  const auto trace = run(*p, ControllerConfig{}, 5, 8);
  CHECK(trace[0].status == SolverStatus::unbounded);
  CHECK(trace[0].risk == 1.0);
  CHECK(trace.size() == 5);
}

TEST_CASE("Hoeffding bound") {
  CHECK(hoeffding_confidence(10'000, 0.025) == doctest::Approx(2.0 * std::exp(-12.5)).epsilon(1e-14));
  CHECK(hoeffding_confidence(10'000, 0.025) == doctest::Approx(7.4533e-6).epsilon(1e-4));
  CHECK(hoeffding_confidence(10'000, 0.025) <= 1e-5);
  for (std::int64_t s : {1, 10, 300, 5000}) {
    for (double eta : {0.01, 0.05, 0.2}) {
      const double b = hoeffding_confidence(s, eta);
      CHECK(hoeffding_confidence(2 * s, eta) == doctest::Approx(b * b / 2.0).epsilon(1e-12));
    }
  }
  CHECK(hoeffding_confidence(100, 1e-9) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(hoeffding_confidence(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(hoeffding_confidence(10, 0.0), std::invalid_argument);
}

TEST_CASE("Bernoulli risk on the half line") {
  const auto p = half_line_problem(1.0, std::sqrt(2.0));
  Solution s;
  // Survival 0.1 at mu + sigma * 1.2815515655446004.
  s.x = {1.0 + std::sqrt(2.0) * 1.2815515655446004};
  REQUIRE(*p->exact_risk(s, 1) == doctest::Approx(0.1).epsilon(1e-12));
  Rng rng(10);
  int within = 0;
  for (int k = 0; k < 1000; ++k) within += std::fabs(bernoulli_risk(*p, s, 1, 10'000, rng) - 0.1) <= 0.025;
  CHECK(within >= 999);

  Solution never;
  never.x = {-1e9};
  CHECK(bernoulli_risk(*p, never, 1, 500, rng) == 1.0);
  CHECK_THROWS_AS(bernoulli_risk(*p, s, 1, 0, rng), std::invalid_argument);
}

TEST_CASE("configuration validation") {
  ControllerConfig c;
  c.epsilon = 0.9;
  c.beta = 0.1;
  CHECK_THROWS_AS(Controller{c}, std::invalid_argument);
  c = ControllerConfig{};
  c.n_initial = 0;
  CHECK_THROWS_AS(Controller{c}, std::invalid_argument);
  c = ControllerConfig{};
  c.n_initial = 10;
  c.n_max = 5;
  CHECK_THROWS_AS(Controller{c}, std::invalid_argument);
  CHECK_THROWS_AS(run(*half_line_problem(0.0, 1.0), ControllerConfig{}, 0, 1), std::invalid_argument);
}
