#pragma once
//
// Viapoint path planning around randomly placed square obstacles.
//
// A path is H viapoints x_1..x_H in the box [0, width] x [0, height], starting
// next to the source, with consecutive spacing at most delta. Each scenario is a
// pair of axis-aligned squares (half side 0.5) centered at
// (cx(t), y - offset) and (cx(t), y + offset) with y ~ Normal(y_mean, y_sd^2) and
// cx(t) = obstacle_x + sway_amplitude * sin(sway_frequency * t). A viapoint collides
// with a square when its L-infinity distance to the center is below the half side.
// The objective is the distance from x_H to the target.
//

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "scenario_sizer/problems.hpp"

namespace scenario_sizer {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct PathConfig {
  int horizon = 100;
  double delta = 0.045;
  double width = 5.0;
  double height = 3.0;
  Vec2 source{0.5, 0.5};
  Vec2 target{4.5, 0.5};
  double half_size = 0.5;
  double obstacle_x = 2.5;
  double offset = 0.8;
  double y_mean = 1.5;
  double y_sd = 0.22360679774997896;  // variance 0.05
  double sway_amplitude = 0.0;
  double sway_frequency = 0.1;
  /// Occupancy grid spacing; a failed post-check retries once at half this value.
  double resolution = 0.025;
};

/// Obstacles with a fixed law.
PathConfig steady_path_config();

/// Obstacles drifting horizontally with sin(0.1 t) and a narrower pair spacing.
PathConfig time_varying_path_config();

struct PathPlan {
  bool found = false;
  std::vector<Vec2> viapoints;
  double terminal_distance = 0.0;
  double resolution = 0.0;
};

/// Plans against a set of square centers (every sampled obstacle, both members
/// of each pair). Guarantees that every viapoint is collision free when found.
PathPlan plan_path(const PathConfig& config, std::span<const Vec2> centers);

/// Largest signed L-infinity penetration over viapoints and centers; <= 0 means no collision.
double max_penetration(std::span<const Vec2> viapoints, std::span<const Vec2> centers,
                       double half_size);

/// Exact collision probability of a path under the step-t obstacle law.
double path_collision_probability(const PathConfig& config, std::span<const Vec2> viapoints, Step t);

/// Horizontal center of the obstacle pair at step t.
double obstacle_center_x(const PathConfig& config, Step t);

std::unique_ptr<ScenarioProblem> path_planning_problem(const PathConfig& config);

/// Viapoints stored in a Solution (x = [x1, y1, x2, y2, ...]).
std::vector<Vec2> viapoints_of(const Solution& solution);

}  // namespace scenario_sizer
