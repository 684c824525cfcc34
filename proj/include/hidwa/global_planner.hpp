#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "hidwa/geometry.hpp"
#include "hidwa/world_model.hpp"

namespace hidwa
{

class NoPathError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Position-only path from the robot to the goal, replanned periodically.
struct GlobalPath
{
  // Densified polyline, spacing <= map resolution. Front is the exact planner
  // start, back the exact goal position.
  std::vector<Point2> points;
  // Same polyline with collinear interior vertices dropped.
  std::vector<Point2> corners;
  // Cost of the optimal cell-center path in the search graph; its length in
  // meters when no clearance penalty applies.
  double graph_cost{0.0};
  double created_at{0.0};

  bool empty() const { return points.empty(); }
};

struct GridPath
{
  std::vector<CellIndex> cells;
  double cost{0.0};
};

// Soft margin around obstacles: a step into a cell with cost >= padded_at
// counts `factor` times its length. The default leaves pure length.
struct ClearancePenalty
{
  std::uint8_t padded_at{cost::kInscribed};
  double factor{1.0};

  double weight(std::uint8_t cell_cost) const { return cell_cost >= padded_at ? factor : 1.0; }
};

// A* over the 8-connected grid: cells with cost >= inscribed are excluded,
// edge weight is the cell-center distance (scaled by the clearance penalty),
// and a diagonal step requires both orthogonal neighbours to be traversable
// (no corner cutting). Equal-priority nodes expand lower (row, col) first.
// Throws NoPathError.
GridPath search_grid(const Costmap &costmap, CellIndex start, CellIndex goal,
                     const ClearancePenalty &clearance = {});

// Length-optimal path from `start` to `goal`. Throws NoPathError when the
// start is in collision, the goal is lethal/inscribed, or they are
// disconnected.
GlobalPath plan(const Costmap &costmap, Point2 start, Point2 goal, double now = 0.0,
                const ClearancePenalty &clearance = {});

double path_length(std::span<const Point2> points);
inline double path_length(const GlobalPath &path) { return path_length(path.points); }

// Distance from p to the path polyline (corner form). A single-point path
// degenerates to the point distance.
double distance_to_path(const GlobalPath &path, Point2 p);

// Travel distance to the goal over the 8-connected grid, weighted like the
// planner. Inscribed and lethal cells cost kGoalFieldPenalty times their
// length to cross, so the field is finite everywhere and still steers around
// obstacles.
inline constexpr double kGoalFieldPenalty = 8.0;

struct GoalField
{
  GridGeometry geometry;
  std::vector<double> values;

  bool empty() const { return values.empty(); }
  // Bilinear interpolation between cell centers; points off the map take the
  // nearest border cell plus the straight distance to it.
  double at(Point2 p) const;
};

GoalField goal_field(const Costmap &costmap, Point2 goal, const ClearancePenalty &clearance = {});

struct ReplanScheduler
{
  double interval{1.0};
  double last_plan_time{0.0};
};

// True iff now - last_plan_time >= interval, with a 1e-9 s allowance so that
// tick-multiplied clocks fire on the intended tick.
bool replan_due(double now, const ReplanScheduler &scheduler);

}  // namespace hidwa
