#pragma once
//
// Small dense linear programs:
//
//   minimize    c . x
//   subject to  a_i . x <= b_i      for every row i
//               lower <= x <= upper (optional box)
//
// solved with a two-phase tableau simplex using Bland's rule. Intended for a
// few dozen variables and up to a few thousand rows.
//

#include <cstddef>
#include <optional>
#include <vector>

namespace scenario_sizer {

struct LpProblem {
  std::vector<double> cost;
  /// Row-major constraint matrix, rows.size() == bounds.size(), each row of cost.size().
  std::vector<std::vector<double>> rows;
  std::vector<double> bounds;
  std::optional<std::vector<double>> lower;
  std::optional<std::vector<double>> upper;
};

enum class LpStatus { optimal, unbounded, infeasible };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  /// Indices of the rows of `rows` that hold with equality (|a_i . x - b_i| <= 1e-9).
  std::vector<std::size_t> active;
  int pivots = 0;
};

/// Throws std::invalid_argument on inconsistent dimensions.
LpResult solve_lp(const LpProblem& lp);

}  // namespace scenario_sizer
