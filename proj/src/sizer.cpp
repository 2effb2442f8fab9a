#include "scenario_sizer/sizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scenario_sizer {

void validate(const SizerQuery& q) {
  if (!(q.theta > 0.0) || !std::isfinite(q.theta)) {
    throw std::invalid_argument("sizer: theta must be positive and finite");
  }
  if (!(q.epsilon > 0.0 && q.epsilon < q.beta && q.beta < 1.0)) {
    throw std::invalid_argument("sizer: requires 0 < epsilon < beta < 1");
  }
  if (q.n_max < 1) throw std::invalid_argument("sizer: n_max must be at least 1");
}

SampleSize optimal_sample_size(const SizerQuery& q) {
  validate(q);
  const BetaRiskModel model(q.theta);
  auto reaches = [&](SampleSize n) { return model.cdf_at(q.epsilon, n) >= q.beta; };

  // For N <= theta the mass below epsilon is epsilon^max(1, N) < beta, so the
  // answer is strictly above theta.
  const auto lowest = static_cast<SampleSize>(std::floor(q.theta)) + 1;
  if (lowest >= q.n_max) return q.n_max;
  if (reaches(lowest)) return lowest;

  // Invariant: !reaches(lo) && reaches(hi).
  SampleSize lo = lowest;
  SampleSize hi = lowest + 1;
  while (!reaches(hi)) {
    if (hi >= q.n_max) return q.n_max;
    lo = hi;
    hi = std::min(q.n_max, lowest + 2 * (hi - lowest));
  }
  while (hi - lo > 1) {
    const SampleSize mid = lo + (hi - lo) / 2;
    if (reaches(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace scenario_sizer
