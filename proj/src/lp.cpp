#include "scenario_sizer/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scenario_sizer {

namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kActiveTolerance = 1e-9;
constexpr int kMaxPivots = 1'000'000;

// Dense simplex tableau over nonnegative columns: T x = rhs, x >= 0.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  // The last row stores reduced costs; its rhs entry is minus the objective value.
  double& cost(std::size_t c) { return at(rows_, c); }
  double objective() const { return -at(rows_, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t& basic(std::size_t r) { return basis_[r]; }
  std::size_t basic(std::size_t r) const { return basis_[r]; }

  void set_costs(const std::vector<double>& c) {
    for (std::size_t j = 0; j <= cols_; ++j) cost(j) = j < cols_ ? c[j] : 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = c[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(rows_, j) -= cb * at(r, j);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const std::size_t width = cols_ + 1;
    double* prow = &data_[r * width];
    const double inv = 1.0 / prow[c];
    for (std::size_t j = 0; j < width; ++j) prow[j] *= inv;
    prow[c] = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      double* row = &data_[i * width];
      const double factor = row[c];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) row[j] -= factor * prow[j];
      row[c] = 0.0;
    }
    basis_[r] = c;
  }

  enum class Outcome { optimal, unbounded };

  // Bland's rule: lowest-index improving column, ratio ties to the lowest basic index.
  Outcome run(std::size_t allowed_cols, int& pivots) {
    while (true) {
      std::size_t entering = allowed_cols;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (cost(j) < -kPivotTolerance) {
          entering = j;
          break;
        }
      }
      if (entering == allowed_cols) return Outcome::optimal;

      std::size_t leaving = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, entering);
        if (a <= kPivotTolerance) continue;
        const double ratio = rhs(r) / a;
        if (ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && leaving < rows_ && basis_[r] < basis_[leaving])) {
          best = std::min(best, ratio);
          leaving = r;
        }
      }
      if (leaving == rows_) return Outcome::unbounded;
      pivot(leaving, entering);
      if (++pivots > kMaxPivots) throw std::runtime_error("solve_lp: pivot limit exceeded");
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve_lp(const LpProblem& lp) {
  const std::size_t n = lp.cost.size();
  if (n == 0) throw std::invalid_argument("solve_lp: no variables");
  if (lp.rows.size() != lp.bounds.size()) {
    throw std::invalid_argument("solve_lp: rows and bounds differ in length");
  }
  for (const auto& row : lp.rows) {
    if (row.size() != n) throw std::invalid_argument("solve_lp: constraint row has wrong length");
  }
  if ((lp.lower && lp.lower->size() != n) || (lp.upper && lp.upper->size() != n)) {
    throw std::invalid_argument("solve_lp: box bounds have wrong length");
  }

  // Collect every inequality a.x <= b, box bounds included.
  std::vector<std::vector<double>> a = lp.rows;
  std::vector<double> b = lp.bounds;
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.upper && std::isfinite((*lp.upper)[j])) {
      std::vector<double> row(n, 0.0);
      row[j] = 1.0;
      a.push_back(std::move(row));
      b.push_back((*lp.upper)[j]);
    }
    if (lp.lower && std::isfinite((*lp.lower)[j])) {
      std::vector<double> row(n, 0.0);
      row[j] = -1.0;
      a.push_back(std::move(row));
      b.push_back(-(*lp.lower)[j]);
    }
  }
  const std::size_t m = a.size();

  // Columns: x+ (n), x- (n), slacks (m), artificials for rows with b < 0.
  std::size_t artificials = 0;
  for (double bi : b) artificials += bi < 0.0 ? 1 : 0;
  const std::size_t structural = 2 * n + m;
  Tableau t(m, structural + artificials);
  std::size_t next_artificial = structural;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      t.at(i, j) = sign * a[i][j];
      t.at(i, n + j) = -sign * a[i][j];
    }
    t.at(i, 2 * n + i) = sign;
    t.rhs(i) = sign * b[i];
    if (sign > 0.0) {
      t.basic(i) = 2 * n + i;
    } else {
      t.at(i, next_artificial) = 1.0;
      t.basic(i) = next_artificial++;
    }
  }

  LpResult result;
  if (artificials > 0) {
    std::vector<double> phase1(t.cols(), 0.0);
    for (std::size_t j = structural; j < t.cols(); ++j) phase1[j] = 1.0;
    t.set_costs(phase1);
    t.run(t.cols(), result.pivots);
    double scale = 1.0;
    for (double bi : b) scale = std::max(scale, std::fabs(bi));
    if (t.objective() > 1e-9 * scale) {
      result.status = LpStatus::infeasible;
      return result;
    }
    // Pivot zero-level artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (t.basic(r) < structural) continue;
      for (std::size_t j = 0; j < structural; ++j) {
        if (std::fabs(t.at(r, j)) > kPivotTolerance) {
          t.pivot(r, j);
          ++result.pivots;
          break;
        }
      }
    }
  }

  std::vector<double> phase2(t.cols(), 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    phase2[j] = lp.cost[j];
    phase2[n + j] = -lp.cost[j];
  }
  t.set_costs(phase2);
  if (t.run(structural, result.pivots) == Tableau::Outcome::unbounded) {
    result.status = LpStatus::unbounded;
    return result;
  }

  std::vector<double> values(t.cols(), 0.0);
  for (std::size_t r = 0; r < m; ++r) values[t.basic(r)] = t.rhs(r);
  result.status = LpStatus::optimal;
  result.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) result.x[j] = values[j] - values[n + j];
  for (std::size_t j = 0; j < n; ++j) result.objective += lp.cost[j] * result.x[j];
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < n; ++j) lhs += lp.rows[i][j] * result.x[j];
    if (std::fabs(lhs - lp.bounds[i]) <= kActiveTolerance * std::max(1.0, std::fabs(lp.bounds[i]))) {
      result.active.push_back(i);
    }
  }
  return result;
}

}  // namespace scenario_sizer
