#pragma once
//
// Weighted maximum-likelihood fit of the shape parameter of BetaRiskModel.
//
// The average log-likelihood
//
//   l(theta; D) = sum_j w_j ln f_theta(v_j, N_j) / sum_j w_j
//
// is upper semi-continuous in theta and, between consecutive distinct sample
// sizes N_j, either constant or smooth and strictly concave. fit() maximizes
// it exactly by running a safeguarded Newton iteration on every open interval
// and comparing the interior optima with the values at the interval endpoints.
//

#include <optional>
#include <span>
#include <vector>

#include "scenario_sizer/risk_model.hpp"

namespace scenario_sizer {

/// One observation: a risk value v, the sample size N that produced it and a weight.
struct DataPoint {
  double v = 0.0;
  SampleSize n = 0;
  double w = 1.0;
};

using Dataset = std::vector<DataPoint>;

/// Throws std::domain_error unless v in [0, 1], N >= 0 and w > 0.
void validate(const DataPoint& point);

/// Average weighted log-likelihood of theta; -infinity if any point has zero density.
double weighted_loglik(double theta, std::span<const DataPoint> data);

struct IntervalDiagnostic {
  double lower = 0.0;
  double upper = 0.0;
  /// Interior stationary point, when the concave piece peaks strictly inside.
  std::optional<double> interior_theta;
  int iterations = 0;
  bool bisection_fallback = false;
  bool iteration_cap_hit = false;
};

struct FitCandidate {
  double theta = 0.0;
  double loglik = 0.0;
  bool interior = false;
};

struct FitResult {
  /// Empty when the likelihood is constant over the whole parameter range.
  std::optional<double> theta;
  double loglik = 0.0;
  std::vector<FitCandidate> candidates;
  std::vector<IntervalDiagnostic> intervals;

  bool flat() const noexcept { return !theta.has_value(); }
};

/// Global maximizer of weighted_loglik over theta > 0, smallest one on ties.
/// Throws std::invalid_argument on an empty dataset.
FitResult fit(std::span<const DataPoint> data);

/// Large-sample limit of l(theta; D_t) when every point is drawn from
/// Beta(theta_circ, N - theta_circ + 1) at the same N. Requires N >= theta_circ.
double asymptotic_loglik(double theta, double theta_circ, SampleSize n);

}  // namespace scenario_sizer
