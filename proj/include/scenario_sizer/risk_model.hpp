#pragma once
//
// Extended Beta family for the risk of a scenario solution.
//
// For a shape theta > 0, a risk value v in [0, 1] and a sample size N >= 0:
//
//   f(v, N) = 1                                              if v = 0 or N = 0
//           = v^(theta-1) (1-v)^(N-theta) / B(theta, N-theta+1)   if v != 0 and N > theta
//           = N v^(N-1)                                      otherwise
//
// For N > theta this is the Beta(theta, N - theta + 1) density, i.e. the exact
// law of the risk of a problem whose solutions are always supported by
// theta scenarios.
//

#include <cstdint>

namespace scenario_sizer {

using SampleSize = std::int64_t;

class BetaRiskModel {
 public:
  /// Throws std::domain_error unless theta is positive and finite.
  explicit BetaRiskModel(double theta);

  double theta() const noexcept { return theta_; }

  double pdf(double v, SampleSize n) const;

  /// ln pdf(v, n); -infinity exactly where the density vanishes.
  double log_pdf(double v, SampleSize n) const;

  /// Probability mass of [0, epsilon] under pdf(., n).
  double cdf_at(double epsilon, SampleSize n) const;

 private:
  double theta_;
};

}  // namespace scenario_sizer
