#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>

#include "../support/oracles.hpp"
#include "scenario_sizer/sizer.hpp"

using namespace scenario_sizer;

namespace {

SampleSize scan(const SizerQuery& q) {
  const BetaRiskModel m(q.theta);
  return oracle::linear_scan_size([&](SampleSize n) { return m.cdf_at(q.epsilon, n); }, q.beta, q.n_max);
}

}  // namespace

TEST_CASE("known sample sizes") {
  CHECK(optimal_sample_size({1.0, 0.1, 0.9, 1'000'000}) == 22);
  CHECK(optimal_sample_size({1.0, 0.1, 0.9, 10}) == 10);
  // Values from a scan with an independent incomplete-Beta implementation.
  CHECK(optimal_sample_size({3.0, 0.1, 0.9, 1'000'000}) == 52);
  CHECK(optimal_sample_size({5.0, 0.1, 0.9, 1'000'000}) == 78);
  CHECK(optimal_sample_size({20.0, 0.1, 0.9, 1'000'000}) == 256);
  CHECK(optimal_sample_size({20.0, 0.1, 0.9, 1'000'000}) == scan({20.0, 0.1, 0.9, 1'000'000}));
}

TEST_CASE("bisection equals a linear scan on random queries") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> th(0.0, 50.0);
  std::uniform_real_distribution<double> ep(0.01, 0.3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 200; ++i) {
    SizerQuery q;
    q.theta = std::max(1e-6, th(rng));
    q.epsilon = ep(rng);
    q.beta = q.epsilon + (0.99 - q.epsilon) * std::max(1e-6, u(rng));
    CAPTURE(q.theta);
    CAPTURE(q.epsilon);
    CAPTURE(q.beta);
    const auto n = optimal_sample_size(q);
    CHECK(n == scan(q));
    CHECK(static_cast<double>(n) > q.theta);
  }
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(1));
}

TEST_CASE("monotone in theta, beta and epsilon") {
  for (double eps : {0.05, 0.1, 0.2}) {
    for (double beta : {0.5, 0.9, 0.99}) {
      if (beta <= eps) continue;
      SampleSize prev = 0;
      for (double theta = 0.1; theta <= 40.0; theta += 0.37) {
        const auto n = optimal_sample_size({theta, eps, beta, 1'000'000});
        CHECK(n >= prev);
        prev = n;
      }
    }
  }
  for (double theta : {0.5, 4.0, 17.5}) {
    SampleSize prev = 0;
    for (double beta = 0.31; beta < 0.995; beta += 0.01) {
      const auto n = optimal_sample_size({theta, 0.3, beta, 1'000'000});
      CHECK(n >= prev);
      prev = n;
    }
    prev = std::numeric_limits<SampleSize>::max();
    for (double eps = 0.01; eps < 0.5; eps += 0.01) {
      const auto n = optimal_sample_size({theta, eps, 0.95, 1'000'000});
      CHECK(n <= prev);
      prev = n;
    }
  }
}

TEST_CASE("pseudo-continuity in theta") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> th(0.01, 60.0);
  for (int i = 0; i < 500; ++i) {
    const double theta = th(rng);
    const auto n = optimal_sample_size({theta, 0.1, 0.9, 1'000'000});
    const auto lo = optimal_sample_size({theta - 1e-9, 0.1, 0.9, 1'000'000});
    const auto hi = optimal_sample_size({theta + 1e-9, 0.1, 0.9, 1'000'000});
    CHECK(std::llabs(n - lo) <= 1);
    CHECK(std::llabs(n - hi) <= 1);
  }
  // Integer theta sits on a branch switch of the model.
  for (double theta = 1.0; theta <= 40.0; theta += 1.0) {
    const auto n = optimal_sample_size({theta, 0.1, 0.9, 1'000'000});
    CHECK(std::llabs(n - optimal_sample_size({theta - 1e-9, 0.1, 0.9, 1'000'000})) <= 1);
    CHECK(std::llabs(n - optimal_sample_size({theta + 1e-9, 0.1, 0.9, 1'000'000})) <= 1);
  }
}

TEST_CASE("clamping and large theta") {
  CHECK(optimal_sample_size({1000.0, 0.1, 0.9, 50}) == 50);
  const auto big = optimal_sample_size({5000.0, 0.1, 0.9, 1'000'000});
  CHECK(big > 5000);
  CHECK(BetaRiskModel(5000.0).cdf_at(0.1, big) >= 0.9);
  CHECK(BetaRiskModel(5000.0).cdf_at(0.1, big - 1) < 0.9);
}

TEST_CASE("invalid queries") {
  CHECK_THROWS_AS(optimal_sample_size({1.0, 0.9, 0.1, 1'000'000}), std::invalid_argument);
  CHECK_THROWS_AS(optimal_sample_size({1.0, 0.0, 0.9, 1'000'000}), std::invalid_argument);
  CHECK_THROWS_AS(optimal_sample_size({1.0, 0.1, 1.0, 1'000'000}), std::invalid_argument);
  CHECK_THROWS_AS(optimal_sample_size({0.0, 0.1, 0.9, 1'000'000}), std::invalid_argument);
  CHECK_THROWS_AS(optimal_sample_size({1.0, 0.1, 0.9, 0}), std::invalid_argument);
}
