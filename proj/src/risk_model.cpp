#include "scenario_sizer/risk_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "scenario_sizer/specfun.hpp"

namespace scenario_sizer {

namespace {

void check_arguments(double v, SampleSize n) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("risk value must lie in [0, 1], got " + std::to_string(v));
  }
  if (n < 0) throw std::domain_error("sample size must be non-negative");
}

}  // namespace

BetaRiskModel::BetaRiskModel(double theta) : theta_(theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::domain_error("theta must be positive and finite, got " + std::to_string(theta));
  }
}

double BetaRiskModel::log_pdf(double v, SampleSize n) const {
  check_arguments(v, n);
  if (v == 0.0 || n == 0) return 0.0;
  const auto nd = static_cast<double>(n);
  if (nd > theta_) {
    if (v == 1.0) return -std::numeric_limits<double>::infinity();
    return (theta_ - 1.0) * std::log(v) + (nd - theta_) * std::log1p(-v) -
           specfun::log_beta(theta_, nd - theta_ + 1.0);
  }
  return std::log(nd) + (nd - 1.0) * std::log(v);
}

double BetaRiskModel::pdf(double v, SampleSize n) const { return std::exp(log_pdf(v, n)); }

double BetaRiskModel::cdf_at(double epsilon, SampleSize n) const {
  check_arguments(epsilon, n);
  if (n == 0) return epsilon;
  const auto nd = static_cast<double>(n);
  if (nd <= theta_) return std::pow(epsilon, nd);
  return specfun::reg_inc_beta(epsilon, theta_, nd - theta_ + 1.0);
}

}  // namespace scenario_sizer
