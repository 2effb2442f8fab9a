#include "scenario_sizer/path_planning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace scenario_sizer {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double linf(Vec2 a, Vec2 b) { return std::max(std::fabs(a.x - b.x), std::fabs(a.y - b.y)); }

// Lattice of nodes (i * res, j * res). A node is blocked when it lies within
// half_size + res (L-infinity) of a center, so every point of a cell whose four
// corners are free keeps at least half_size + res / 2 from every center.
class OccupancyGrid {
 public:
  OccupancyGrid(const PathConfig& cfg, std::span<const Vec2> centers, double res)
      : res_(res),
        nx_(static_cast<int>(std::lround(cfg.width / res)) + 1),
        ny_(static_cast<int>(std::lround(cfg.height / res)) + 1),
        blocked_(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_), 0) {
    const double reach = cfg.half_size + res + 1e-9;
    for (const auto& c : centers) {
      const int i0 = std::max(0, static_cast<int>(std::ceil((c.x - reach) / res)));
      const int i1 = std::min(nx_ - 1, static_cast<int>(std::floor((c.x + reach) / res)));
      const int j0 = std::max(0, static_cast<int>(std::ceil((c.y - reach) / res)));
      const int j1 = std::min(ny_ - 1, static_cast<int>(std::floor((c.y + reach) / res)));
      for (int i = i0; i <= i1; ++i) {
        for (int j = j0; j <= j1; ++j) {
          if (linf(position(i, j), c) < reach) blocked_[index(i, j)] = 1;
        }
      }
    }
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double resolution() const { return res_; }
  std::size_t size() const { return blocked_.size(); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny_) + static_cast<std::size_t>(j);
  }
  int column(std::size_t idx) const { return static_cast<int>(idx / static_cast<std::size_t>(ny_)); }
  int row(std::size_t idx) const { return static_cast<int>(idx % static_cast<std::size_t>(ny_)); }
  Vec2 position(int i, int j) const { return {i * res_, j * res_}; }
  Vec2 position(std::size_t idx) const { return position(column(idx), row(idx)); }
  bool free(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx_ && j < ny_ && blocked_[index(i, j)] == 0;
  }

  std::size_t nearest(Vec2 p) const {
    const int i = std::clamp(static_cast<int>(std::lround(p.x / res_)), 0, nx_ - 1);
    const int j = std::clamp(static_cast<int>(std::lround(p.y / res_)), 0, ny_ - 1);
    return index(i, j);
  }

  // A point is clear when the cell containing it has four free corners.
  bool clear(Vec2 p) const {
    const int i = static_cast<int>(std::floor(p.x / res_));
    const int j = static_cast<int>(std::floor(p.y / res_));
    return free(i, j) && free(i + 1, j) && free(i, j + 1) && free(i + 1, j + 1);
  }

  bool clear_segment(Vec2 a, Vec2 b) const {
    const double len = distance(a, b);
    const int steps = std::max(1, static_cast<int>(std::ceil(len / (0.25 * res_))));
    for (int k = 0; k <= steps; ++k) {
      const double s = static_cast<double>(k) / steps;
      if (!clear({a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)})) return false;
    }
    return true;
  }

 private:
  double res_;
  int nx_;
  int ny_;
  std::vector<std::uint8_t> blocked_;
};

struct SearchResult {
  std::vector<double> cost;
  std::vector<std::size_t> parent;
};

constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

// Best-first search over the 8-connected lattice. With a target it is A* with the
// Euclidean heuristic and stops at the target; without one it is a full Dijkstra sweep.
SearchResult search(const OccupancyGrid& grid, std::size_t start, std::optional<std::size_t> goal) {
  SearchResult out;
  out.cost.assign(grid.size(), kInf);
  out.parent.assign(grid.size(), kNoParent);
  const Vec2 goal_pos = goal ? grid.position(*goal) : Vec2{};
  auto heuristic = [&](std::size_t idx) { return goal ? distance(grid.position(idx), goal_pos) : 0.0; };

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::vector<std::uint8_t> closed(grid.size(), 0);
  out.cost[start] = 0.0;
  open.emplace(heuristic(start), start);
  const double res = grid.resolution();
  while (!open.empty()) {
    const auto [f, idx] = open.top();
    open.pop();
    if (closed[idx]) continue;
    closed[idx] = 1;
    if (goal && idx == *goal) break;
    const int i = grid.column(idx);
    const int j = grid.row(idx);
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        if (!grid.free(i + di, j + dj)) continue;
        const std::size_t next = grid.index(i + di, j + dj);
        if (closed[next]) continue;
        const double step = (di != 0 && dj != 0) ? res * std::sqrt(2.0) : res;
        const double g = out.cost[idx] + step;
        if (g < out.cost[next]) {
          out.cost[next] = g;
          out.parent[next] = idx;
          open.emplace(g + heuristic(next), next);
        }
      }
    }
  }
  return out;
}

std::vector<Vec2> trace_back(const OccupancyGrid& grid, const SearchResult& sr, std::size_t end) {
  std::vector<Vec2> pts;
  for (std::size_t idx = end; idx != kNoParent; idx = sr.parent[idx]) pts.push_back(grid.position(idx));
  std::reverse(pts.begin(), pts.end());
  return pts;
}

// Greedy line-of-sight shortcutting.
std::vector<Vec2> shortcut(const OccupancyGrid& grid, const std::vector<Vec2>& pts) {
  if (pts.size() <= 2) return pts;
  std::vector<Vec2> out{pts.front()};
  std::size_t anchor = 0;
  while (anchor + 1 < pts.size()) {
    std::size_t reach = anchor + 1;
    while (reach + 1 < pts.size() && grid.clear_segment(pts[anchor], pts[reach + 1])) ++reach;
    out.push_back(pts[reach]);
    anchor = reach;
  }
  return out;
}

// H points along the polyline with arc-length spacing min(L / H, delta).
std::vector<Vec2> resample(const std::vector<Vec2>& poly, int horizon, double delta) {
  std::vector<double> cumulative{0.0};
  for (std::size_t k = 1; k < poly.size(); ++k) {
    cumulative.push_back(cumulative.back() + distance(poly[k - 1], poly[k]));
  }
  const double total = cumulative.back();
  const double spacing = std::min(total / horizon, delta);
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(horizon));
  std::size_t seg = 1;
  for (int k = 1; k <= horizon; ++k) {
    const double s = (k == horizon && total <= horizon * delta) ? total : k * spacing;
    while (seg + 1 < poly.size() && cumulative[seg] < s) ++seg;
    if (poly.size() == 1) {
      out.push_back(poly.front());
      continue;
    }
    const double len = cumulative[seg] - cumulative[seg - 1];
    const double frac = len > 0.0 ? std::clamp((s - cumulative[seg - 1]) / len, 0.0, 1.0) : 1.0;
    out.push_back({poly[seg - 1].x + frac * (poly[seg].x - poly[seg - 1].x),
                   poly[seg - 1].y + frac * (poly[seg].y - poly[seg - 1].y)});
  }
  return out;
}

bool inside_box(const PathConfig& cfg, Vec2 p) {
  return p.x >= 0.0 && p.x <= cfg.width && p.y >= 0.0 && p.y <= cfg.height;
}

std::optional<std::vector<Vec2>> plan_on_grid(const PathConfig& cfg, std::span<const Vec2> centers,
                                              double res) {
  const OccupancyGrid grid(cfg, centers, res);
  const std::size_t start = grid.nearest(cfg.source);
  const std::size_t target = grid.nearest(cfg.target);
  if (!grid.free(grid.column(start), grid.row(start))) return std::nullopt;
  const double budget = cfg.horizon * cfg.delta;

  std::size_t end = target;
  SearchResult sr = search(grid, start, target);
  if (!(sr.cost[target] <= budget)) {
    // Target out of reach: head for the reachable node closest to it.
    sr = search(grid, start, std::nullopt);
    double best_dist = kInf;
    double best_cost = kInf;
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      if (!(sr.cost[idx] <= budget)) continue;
      const double d = distance(grid.position(idx), cfg.target);
      if (d < best_dist || (d == best_dist && sr.cost[idx] < best_cost)) {
        best_dist = d;
        best_cost = sr.cost[idx];
        end = idx;
      }
    }
    if (!std::isfinite(best_dist)) return std::nullopt;
  }

  std::vector<Vec2> poly = trace_back(grid, sr, end);
  poly = shortcut(grid, poly);
  if (end == target) poly.back() = cfg.target;
  poly.insert(poly.begin(), cfg.source);
  return resample(poly, cfg.horizon, cfg.delta);
}

class PathPlanningProblem final : public ScenarioProblem {
 public:
  explicit PathPlanningProblem(PathConfig cfg) : cfg_(cfg) {
    if (cfg_.horizon < 1) throw std::invalid_argument("path_planning: horizon must be positive");
    if (!(cfg_.delta > 0.0)) throw std::invalid_argument("path_planning: delta must be positive");
    if (!(cfg_.resolution > 0.0)) throw std::invalid_argument("path_planning: bad resolution");
    if (!(cfg_.y_sd > 0.0)) throw std::invalid_argument("path_planning: y_sd must be positive");
  }

  std::string id() const override { return "path_planning"; }

  Constraint sample(Rng& rng, Step t) const override {
    const double y = std::normal_distribution<double>(cfg_.y_mean, cfg_.y_sd)(rng);
    const double cx = obstacle_center_x(cfg_, t);
    return {{cx, y - cfg_.offset, cx, y + cfg_.offset}};
  }

  Solution solve(std::span<const Constraint> scenarios, Step) const override {
    std::vector<Vec2> centers;
    centers.reserve(2 * scenarios.size());
    for (const auto& c : scenarios) {
      centers.push_back({c.u.at(0), c.u.at(1)});
      centers.push_back({c.u.at(2), c.u.at(3)});
    }
    const PathPlan plan = plan_path(cfg_, centers);
    Solution s;
    if (!plan.found) {
      s.status = SolverStatus::infeasible;
      return s;
    }
    s.x.reserve(2 * plan.viapoints.size());
    for (const auto& p : plan.viapoints) {
      s.x.push_back(p.x);
      s.x.push_back(p.y);
    }
    s.objective = plan.terminal_distance;
    return s;
  }

  std::optional<double> exact_risk(const Solution& s, Step t) const override {
    if (!s.feasible()) return 1.0;
    const auto pts = viapoints_of(s);
    return path_collision_probability(cfg_, pts, t);
  }

  double violation(const Solution& s, const Constraint& c, Step) const override {
    const Vec2 centers[2] = {{c.u.at(0), c.u.at(1)}, {c.u.at(2), c.u.at(3)}};
    double worst = -kInf;
    for (std::size_t k = 0; k + 1 < s.x.size(); k += 2) {
      const Vec2 p{s.x[k], s.x[k + 1]};
      for (const auto& ctr : centers) worst = std::max(worst, cfg_.half_size - linf(p, ctr));
    }
    return worst;
  }

 private:
  PathConfig cfg_;
};

}  // namespace

PathConfig steady_path_config() { return PathConfig{}; }

PathConfig time_varying_path_config() {
  PathConfig cfg;
  cfg.offset = 0.3;
  cfg.sway_amplitude = 1.0;
  cfg.sway_frequency = 0.1;
  return cfg;
}

double obstacle_center_x(const PathConfig& cfg, Step t) {
  return cfg.obstacle_x + cfg.sway_amplitude * std::sin(cfg.sway_frequency * static_cast<double>(t));
}

double max_penetration(std::span<const Vec2> viapoints, std::span<const Vec2> centers,
                       double half_size) {
  double worst = -kInf;
  for (const auto& p : viapoints) {
    for (const auto& c : centers) worst = std::max(worst, half_size - linf(p, c));
  }
  return worst;
}

PathPlan plan_path(const PathConfig& cfg, std::span<const Vec2> centers) {
  PathPlan plan;
  for (double res : {cfg.resolution, 0.5 * cfg.resolution}) {
    auto pts = plan_on_grid(cfg, centers, res);
    if (!pts) continue;
    const bool in_box = std::all_of(pts->begin(), pts->end(), [&](Vec2 p) { return inside_box(cfg, p); });
    bool spaced = distance(cfg.source, pts->front()) <= cfg.delta + 1e-12;
    for (std::size_t k = 1; k < pts->size(); ++k) {
      spaced = spaced && distance((*pts)[k - 1], (*pts)[k]) <= cfg.delta + 1e-12;
    }
    if (!in_box || !spaced || (!centers.empty() && max_penetration(*pts, centers, cfg.half_size) > 0.0)) {
      continue;
    }
    plan.found = true;
    plan.viapoints = std::move(*pts);
    plan.terminal_distance = distance(plan.viapoints.back(), cfg.target);
    plan.resolution = res;
    return plan;
  }
  return plan;
}

double path_collision_probability(const PathConfig& cfg, std::span<const Vec2> viapoints, Step t) {
  // Collision happens for y in a union of open intervals; measure it under Normal(y_mean, y_sd^2).
  const double cx = obstacle_center_x(cfg, t);
  const double h = cfg.half_size;
  std::vector<std::pair<double, double>> spans;
  for (const auto& p : viapoints) {
    if (!(std::fabs(p.x - cx) < h)) continue;
    spans.emplace_back(p.y + cfg.offset - h, p.y + cfg.offset + h);  // lower square
    spans.emplace_back(p.y - cfg.offset - h, p.y - cfg.offset + h);  // upper square
  }
  if (spans.empty()) return 0.0;
  std::sort(spans.begin(), spans.end());
  auto mass = [&](double a, double b) {
    return normal_cdf((b - cfg.y_mean) / cfg.y_sd) - normal_cdf((a - cfg.y_mean) / cfg.y_sd);
  };
  double total = 0.0;
  double lo = spans.front().first;
  double hi = spans.front().second;
  for (std::size_t k = 1; k < spans.size(); ++k) {
    if (spans[k].first <= hi) {
      hi = std::max(hi, spans[k].second);
    } else {
      total += mass(lo, hi);
      std::tie(lo, hi) = spans[k];
    }
  }
  total += mass(lo, hi);
  return std::clamp(total, 0.0, 1.0);
}

std::unique_ptr<ScenarioProblem> path_planning_problem(const PathConfig& config) {
  return std::make_unique<PathPlanningProblem>(config);
}

std::vector<Vec2> viapoints_of(const Solution& s) {
  std::vector<Vec2> pts;
  pts.reserve(s.x.size() / 2);
  for (std::size_t k = 0; k + 1 < s.x.size(); k += 2) pts.push_back({s.x[k], s.x[k + 1]});
  return pts;
}

}  // namespace scenario_sizer
