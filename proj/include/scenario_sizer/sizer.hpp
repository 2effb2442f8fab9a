#pragma once

#include "scenario_sizer/risk_model.hpp"

namespace scenario_sizer {

/// Inputs of the sample-size rule. Requires 0 < epsilon < beta < 1 and n_max >= 1.
struct SizerQuery {
  double theta = 1.0;
  double epsilon = 0.1;
  double beta = 0.9;
  SampleSize n_max = 1'000'000;
};

/// Throws std::invalid_argument when the query violates its invariants.
void validate(const SizerQuery& query);

/// Smallest N whose model probability of risk <= epsilon reaches beta, capped at n_max.
///
/// cdf_at is non-decreasing in N, so the answer is found by doubling an upper
/// bracket from floor(theta) + 1 and bisecting on integers.
SampleSize optimal_sample_size(const SizerQuery& query);

}  // namespace scenario_sizer
