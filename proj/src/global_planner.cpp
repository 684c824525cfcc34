#include "hidwa/global_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

namespace hidwa
{
namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

struct QueueEntry
{
  double f;
  int row;
  int col;
  double g;

  // Min-heap on (f, row, col).
  bool operator>(const QueueEntry &other) const
  {
    return std::tie(f, row, col) > std::tie(other.f, other.row, other.col);
  }
};

bool traversable(const Costmap &costmap, CellIndex c)
{
  return costmap.geometry().in_bounds(c) && costmap.cost(c) < cost::kInscribed;
}

}  // namespace

GridPath search_grid(const Costmap &costmap, CellIndex start, CellIndex goal,
                     const ClearancePenalty &clearance)
{
  const GridGeometry &g = costmap.geometry();
  if (!traversable(costmap, start)) {
    throw NoPathError("planner start cell is in collision");
  }
  if (!traversable(costmap, goal)) {
    throw NoPathError("goal cell is lethal or out of bounds");
  }
  const double res = g.resolution();
  const double diag = res * std::numbers::sqrt2;
  const Point2 goal_center = g.cell_center(goal);
  auto heuristic = [&](CellIndex c) { return distance(g.cell_center(c), goal_center); };

  std::vector<double> best(g.size(), kInf);
  std::vector<std::int64_t> parent(g.size(), -1);
  std::vector<std::uint8_t> closed(g.size(), 0);
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;

  best[g.index(start)] = 0.0;
  open.push({heuristic(start), start.row, start.col, 0.0});

  constexpr int kDc[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  constexpr int kDr[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  while (!open.empty()) {
    const QueueEntry top = open.top();
    open.pop();
    const CellIndex cur{top.col, top.row};
    const std::size_t cur_idx = g.index(cur);
    if (closed[cur_idx] || top.g > best[cur_idx]) {
      continue;
    }
    closed[cur_idx] = 1;
    if (cur == goal) {
      break;
    }
    for (int k = 0; k < 8; ++k) {
      const CellIndex next{cur.col + kDc[k], cur.row + kDr[k]};
      if (!traversable(costmap, next)) {
        continue;
      }
      const bool diagonal = kDc[k] != 0 && kDr[k] != 0;
      if (diagonal && (!traversable(costmap, {cur.col + kDc[k], cur.row}) ||
                       !traversable(costmap, {cur.col, cur.row + kDr[k]})))
      {
        continue;
      }
      const std::size_t next_idx = g.index(next);
      if (closed[next_idx]) {
        continue;
      }
      const double cand = top.g + (diagonal ? diag : res) * clearance.weight(costmap.cost(next));
      if (cand < best[next_idx]) {
        best[next_idx] = cand;
        parent[next_idx] = static_cast<std::int64_t>(cur_idx);
        open.push({cand + heuristic(next), next.row, next.col, cand});
      }
    }
  }

  const std::size_t goal_idx = g.index(goal);
  if (!closed[goal_idx]) {
    throw NoPathError("goal is not reachable from the start");
  }
  GridPath path;
  path.cost = best[goal_idx];
  for (std::int64_t idx = static_cast<std::int64_t>(goal_idx); idx >= 0; idx = parent[idx]) {
    path.cells.push_back(g.cell_of(static_cast<std::size_t>(idx)));
  }
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

GlobalPath plan(const Costmap &costmap, Point2 start, Point2 goal, double now,
                const ClearancePenalty &clearance)
{
  const GridGeometry &g = costmap.geometry();
  const auto start_cell = g.world_to_cell(start);
  const auto goal_cell = g.world_to_cell(goal);
  if (!start_cell) {
    throw NoPathError("planner start is outside the map");
  }
  if (!goal_cell) {
    throw NoPathError("goal is outside the map");
  }
  const GridPath grid_path = search_grid(costmap, *start_cell, *goal_cell, clearance);

  const std::size_t n = grid_path.cells.size();
  std::vector<Point2> vertices;
  vertices.reserve(n + 1);
  vertices.push_back(start);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    vertices.push_back(g.cell_center(grid_path.cells[i]));
  }
  vertices.push_back(goal);

  GlobalPath path;
  path.graph_cost = grid_path.cost;
  path.created_at = now;

  // Corner form: interior cell centers whose neighbours are also cell
  // centers and continue in the same grid direction are dropped.
  path.corners.push_back(vertices.front());
  for (std::size_t i = 1; i + 1 < vertices.size(); ++i) {
    const std::size_t cell_i = i;  // vertices[i] is the center of cells[i]
    const bool neighbours_are_centers = cell_i >= 2 && cell_i + 2 < n;
    if (neighbours_are_centers) {
      const CellIndex a = grid_path.cells[cell_i - 1];
      const CellIndex b = grid_path.cells[cell_i];
      const CellIndex c = grid_path.cells[cell_i + 1];
      if (b.col - a.col == c.col - b.col && b.row - a.row == c.row - b.row) {
        continue;
      }
    }
    path.corners.push_back(vertices[i]);
  }
  path.corners.push_back(vertices.back());

  const double res = g.resolution();
  path.points.push_back(vertices.front());
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const Point2 a = vertices[i - 1];
    const Point2 b = vertices[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil(distance(a, b) / res)));
    for (int k = 1; k < pieces; ++k) {
      const double s = static_cast<double>(k) / pieces;
      path.points.push_back({a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)});
    }
    path.points.push_back(b);
  }
  return path;
}

double path_length(std::span<const Point2> points)
{
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    total += distance(points[i - 1], points[i]);
  }
  return total;
}

double distance_to_path(const GlobalPath &path, Point2 p)
{
  const auto &poly = path.corners.empty() ? path.points : path.corners;
  if (poly.empty()) {
    return 0.0;
  }
  if (poly.size() == 1) {
    return distance(p, poly.front());
  }
  double best = kInf;
  for (std::size_t i = 1; i < poly.size(); ++i) {
    best = std::min(best, point_segment_distance(p, poly[i - 1], poly[i]));
  }
  return best;
}

GoalField goal_field(const Costmap &costmap, Point2 goal, const ClearancePenalty &clearance)
{
  const GridGeometry &g = costmap.geometry();
  GoalField field;
  field.geometry = g;
  field.values.assign(g.size(), kInf);
  if (g.size() == 0) {
    return field;
  }
  CellIndex seed = g.world_to_cell_unchecked(goal);
  seed.col = std::clamp(seed.col, 0, g.width() - 1);
  seed.row = std::clamp(seed.row, 0, g.height() - 1);

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const std::size_t seed_index = g.index(seed);
  field.values[seed_index] = distance(g.cell_center(seed), goal);
  open.push({field.values[seed_index], seed_index});

  const double res = g.resolution();
  constexpr int kDc[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  constexpr int kDr[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  while (!open.empty()) {
    const auto [d, index] = open.top();
    open.pop();
    if (d > field.values[index]) {
      continue;
    }
    const CellIndex cur = g.cell_of(index);
    for (int k = 0; k < 8; ++k) {
      const CellIndex next{cur.col + kDc[k], cur.row + kDr[k]};
      if (!g.in_bounds(next)) {
        continue;
      }
      const double step = k < 4 ? res : res * std::numbers::sqrt2;
      const std::uint8_t c = costmap.cost(next);
      const double weight = c >= cost::kInscribed ? kGoalFieldPenalty : clearance.weight(c);
      const double candidate = d + step * weight;
      const std::size_t ni = g.index(next);
      if (candidate < field.values[ni]) {
        field.values[ni] = candidate;
        open.push({candidate, ni});
      }
    }
  }
  return field;
}

double GoalField::at(Point2 p) const
{
  const double res = geometry.resolution();
  const Point2 o = geometry.origin();
  // continuous cell coordinates relative to cell centers
  const double fx = (p.x - o.x) / res - 0.5;
  const double fy = (p.y - o.y) / res - 0.5;
  const double max_x = geometry.width() - 1;
  const double max_y = geometry.height() - 1;
  const double cx = std::clamp(fx, 0.0, max_x);
  const double cy = std::clamp(fy, 0.0, max_y);
  const double outside = std::hypot(fx - cx, fy - cy) * res;

  const int c0 = std::min(static_cast<int>(cx), geometry.width() - 1);
  const int r0 = std::min(static_cast<int>(cy), geometry.height() - 1);
  const int c1 = std::min(c0 + 1, geometry.width() - 1);
  const int r1 = std::min(r0 + 1, geometry.height() - 1);
  const double tx = cx - c0;
  const double ty = cy - r0;
  auto v = [&](int c, int r) { return values[geometry.index({c, r})]; };
  const double bottom = v(c0, r0) * (1.0 - tx) + v(c1, r0) * tx;
  const double top = v(c0, r1) * (1.0 - tx) + v(c1, r1) * tx;
  return bottom * (1.0 - ty) + top * ty + outside;
}

bool replan_due(double now, const ReplanScheduler &scheduler)
{
  return now - scheduler.last_plan_time >= scheduler.interval - 1e-9;
}

}  // namespace hidwa
