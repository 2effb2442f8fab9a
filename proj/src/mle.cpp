#include "scenario_sizer/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "scenario_sizer/specfun.hpp"

namespace scenario_sizer {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kStepTolerance = 1e-10;
constexpr int kMaxNewtonIterations = 100;
constexpr double kGuessMargin = 1e-6;

// Weighted sufficient statistics of the points with v in (0, 1) sharing one N.
struct Group {
  double n = 0.0;
  double weight = 0.0;
  double sum_log_v = 0.0;
  double sum_log_1mv = 0.0;
  double sum_v = 0.0;
};

// The likelihood only depends on the data through these aggregates.
class Summary {
 public:
  explicit Summary(std::span<const DataPoint> data) {
    std::map<SampleSize, Group> groups;
    for (const auto& p : data) {
      validate(p);
      total_weight_ += p.w;
      if (p.v == 0.0 || p.n == 0) continue;
      if (p.v == 1.0) {
        floor_ = std::max(floor_, static_cast<double>(p.n));
        saturated_constant_ += p.w * std::log(static_cast<double>(p.n));
        continue;
      }
      auto& g = groups[p.n];
      g.n = static_cast<double>(p.n);
      g.weight += p.w;
      g.sum_log_v += p.w * std::log(p.v);
      g.sum_log_1mv += p.w * std::log1p(-p.v);
      g.sum_v += p.w * p.v;
    }
    groups_.reserve(groups.size());
    for (const auto& [n, g] : groups) groups_.push_back(g);
  }

  // Smallest theta with finite likelihood (0 when no point has v = 1).
  double floor() const noexcept { return floor_; }
  bool informative() const noexcept { return floor_ > 0.0 || !groups_.empty(); }
  const std::vector<Group>& groups() const noexcept { return groups_; }

  double loglik(double theta) const {
    if (theta < floor_) return kNegInf;
    double total = saturated_constant_;
    for (const auto& g : groups_) {
      if (g.n > theta) {
        total += (theta - 1.0) * g.sum_log_v + (g.n - theta) * g.sum_log_1mv -
                 g.weight * specfun::log_beta(theta, g.n - theta + 1.0);
      } else {
        total += g.weight * std::log(g.n) + (g.n - 1.0) * g.sum_log_v;
      }
    }
    return total / total_weight_;
  }

  // Unnormalized derivative and second derivative of the smooth piece, using the
  // groups with N >= upper (those are exactly the ones with N > theta inside the interval).
  std::pair<double, double> slope_and_curvature(double theta, double upper) const {
    double slope = 0.0;
    double curvature = 0.0;
    const double psi = specfun::digamma(theta);
    const double psi1 = specfun::trigamma(theta);
    for (const auto& g : groups_) {
      if (g.n < upper) continue;
      const double b = g.n - theta + 1.0;
      slope += g.sum_log_v - g.sum_log_1mv + g.weight * (specfun::digamma(b) - psi);
      curvature -= g.weight * (psi1 + specfun::trigamma(b));
    }
    return {slope, curvature};
  }

  double initial_guess(double upper) const {
    double w = 0.0, wv = 0.0, wn = 0.0;
    for (const auto& g : groups_) {
      if (g.n < upper) continue;
      w += g.weight;
      wv += g.sum_v;
      wn += g.weight * g.n;
    }
    return (wv / w) * (wn / w + 1.0);
  }

 private:
  std::vector<Group> groups_;
  double floor_ = 0.0;
  double saturated_constant_ = 0.0;
  double total_weight_ = 0.0;
};

// Maximizes the concave piece on (lower, upper). Leaves interior_theta empty when
// the maximum over the closed interval sits at an endpoint.
IntervalDiagnostic maximize_interval(const Summary& summary, double lower, double upper) {
  IntervalDiagnostic diag;
  diag.lower = lower;
  diag.upper = upper;

  auto slope = [&](double theta) { return summary.slope_and_curvature(theta, upper).first; };

  if (slope(upper) >= 0.0) return diag;
  double left = lower;
  if (lower > 0.0) {
    if (slope(lower) <= 0.0) return diag;
  } else {
    // The slope diverges to +infinity as theta -> 0.
    left = std::min(1e-8, 0.5 * upper);
    while (slope(left) <= 0.0) {
      left *= 0.5;
      if (left < 1e-300) return diag;
    }
  }
  double right = upper;

  double theta = std::clamp(summary.initial_guess(upper), lower + kGuessMargin, upper - kGuessMargin);
  theta = std::clamp(theta, left, right);
  for (int it = 1; it <= kMaxNewtonIterations; ++it) {
    diag.iterations = it;
    const auto [d1, d2] = summary.slope_and_curvature(theta, upper);
    if (d1 == 0.0) break;
    if (d1 > 0.0) {
      left = theta;
    } else {
      right = theta;
    }
    double next = theta - d1 / d2;
    if (!(next > left && next < right)) {
      next = 0.5 * (left + right);
      diag.bisection_fallback = true;
    }
    const double step = std::fabs(next - theta);
    theta = next;
    if (step <= kStepTolerance) break;
    if (it == kMaxNewtonIterations) diag.iteration_cap_hit = true;
  }
  diag.interior_theta = theta;
  return diag;
}

}  // namespace

void validate(const DataPoint& p) {
  if (!(p.v >= 0.0 && p.v <= 1.0)) {
    throw std::domain_error("data point risk must lie in [0, 1], got " + std::to_string(p.v));
  }
  if (p.n < 0) throw std::domain_error("data point sample size must be non-negative");
  if (!(p.w > 0.0) || !std::isfinite(p.w)) {
    throw std::domain_error("data point weight must be positive, got " + std::to_string(p.w));
  }
}

double weighted_loglik(double theta, std::span<const DataPoint> data) {
  if (data.empty()) throw std::invalid_argument("weighted_loglik: empty dataset");
  const BetaRiskModel model(theta);
  double total = 0.0;
  double weight = 0.0;
  for (const auto& p : data) {
    validate(p);
    const double lp = model.log_pdf(p.v, p.n);
    if (lp == kNegInf) return kNegInf;
    total += p.w * lp;
    weight += p.w;
  }
  return total / weight;
}

FitResult fit(std::span<const DataPoint> data) {
  if (data.empty()) throw std::invalid_argument("fit: empty dataset");
  const Summary summary(data);
  FitResult result;
  if (!summary.informative()) {
    result.loglik = summary.loglik(1.0);
    return result;
  }

  const double floor = summary.floor();
  std::vector<double> breakpoints;
  for (const auto& g : summary.groups()) {
    if (g.n > floor) breakpoints.push_back(g.n);
  }

  if (floor > 0.0) result.candidates.push_back({floor, summary.loglik(floor), false});
  double lower = floor;
  for (double upper : breakpoints) {
    auto diag = maximize_interval(summary, lower, upper);
    if (diag.interior_theta) {
      result.candidates.push_back({*diag.interior_theta, summary.loglik(*diag.interior_theta), true});
    }
    result.intervals.push_back(diag);
    result.candidates.push_back({upper, summary.loglik(upper), false});
    lower = upper;
  }

  std::sort(result.candidates.begin(), result.candidates.end(),
            [](const FitCandidate& a, const FitCandidate& b) { return a.theta < b.theta; });
  const FitCandidate* best = nullptr;
  for (const auto& c : result.candidates) {
    if (best == nullptr || c.loglik > best->loglik) best = &c;
  }
  result.theta = best->theta;
  result.loglik = best->loglik;
  return result;
}

double asymptotic_loglik(double theta, double theta_circ, SampleSize n) {
  if (!(theta > 0.0)) throw std::domain_error("asymptotic_loglik: theta must be positive");
  if (!(theta_circ > 0.0)) throw std::domain_error("asymptotic_loglik: theta_circ must be positive");
  const auto nd = static_cast<double>(n);
  if (nd < theta_circ) throw std::domain_error("asymptotic_loglik: requires N >= theta_circ");
  const double t = std::min(theta, nd);
  return (t - 1.0) * specfun::digamma(theta_circ) +
         (nd - t) * specfun::digamma(nd - theta_circ + 1.0) - specfun::log_gamma(t) -
         specfun::log_gamma(nd - t + 1.0) + specfun::log_gamma(nd + 1.0) -
         (nd - 1.0) * specfun::digamma(nd + 1.0);
}

}  // namespace scenario_sizer
