#include "hidwa/world_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hidwa
{

GridGeometry::GridGeometry(double resolution, Point2 origin, int width, int height)
: resolution_(resolution), origin_(origin), width_(width), height_(height)
{
  if (!(resolution > 0.0) || width <= 0 || height <= 0) {
    throw std::invalid_argument("grid geometry needs positive resolution and size");
  }
}

CellIndex GridGeometry::world_to_cell_unchecked(Point2 p) const
{
  return {
    static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
    static_cast<int>(std::floor((p.y - origin_.y) / resolution_))};
}

Point2 GridGeometry::cell_center(CellIndex cell) const
{
  return {
    origin_.x + (cell.col + 0.5) * resolution_,
    origin_.y + (cell.row + 0.5) * resolution_};
}

OccupancyGrid::OccupancyGrid(GridGeometry geometry)
: geometry_(geometry), cells_(geometry.size(), 0)
{
}

std::size_t OccupancyGrid::occupied_count() const
{
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

Costmap::Costmap(GridGeometry geometry)
: geometry_(geometry), costs_(geometry.size(), cost::kFree)
{
}

double cell_square_distance(int dc, int dr, double resolution)
{
  const double gx = std::max(std::abs(dc) - 0.5, 0.0);
  const double gy = std::max(std::abs(dr) - 0.5, 0.0);
  return resolution * std::sqrt(gx * gx + gy * gy);
}

std::uint8_t inflation_cost(double d, double footprint_radius, double decay_radius)
{
  if (d <= footprint_radius) {
    return cost::kInscribed;
  }
  if (d > decay_radius) {
    return cost::kFree;
  }
  // k is chosen so that the cost is exactly 1 at the decay edge.
  const double k = std::log(253.0) / (decay_radius - footprint_radius);
  const double value = std::round(253.0 * std::exp(-k * (d - footprint_radius)));
  return static_cast<std::uint8_t>(std::clamp(value, 1.0, 253.0));
}

InflationKernel::InflationKernel(double resolution, double footprint_radius, double decay_radius)
{
  reach_ = static_cast<int>(std::ceil(decay_radius / resolution)) + 1;
  for (int dr = -reach_; dr <= reach_; ++dr) {
    for (int dc = -reach_; dc <= reach_; ++dc) {
      std::uint8_t c = cost::kLethal;
      if (dc != 0 || dr != 0) {
        c = inflation_cost(cell_square_distance(dc, dr, resolution), footprint_radius, decay_radius);
      }
      if (c != cost::kFree) {
        entries_.push_back({dc, dr, c});
      }
    }
  }
}

namespace
{

void stamp(Costmap &costmap, CellIndex center, const InflationKernel &kernel)
{
  const GridGeometry &g = costmap.geometry();
  const bool interior = center.col - kernel.reach() >= 0 && center.row - kernel.reach() >= 0 &&
    center.col + kernel.reach() < g.width() && center.row + kernel.reach() < g.height();
  for (const auto &e : kernel.entries()) {
    const CellIndex cell{center.col + e.dc, center.row + e.dr};
    if (interior || g.in_bounds(cell)) {
      costmap.raise_cost(g.index(cell), e.cost);
    }
  }
}

// Lethal cells whose four neighbours are all lethal can never be the nearest
// lethal cell of a non-lethal cell, so only the boundary needs stamping.
template<typename InSet>
bool on_boundary(const GridGeometry &g, CellIndex c, InSet in_set)
{
  constexpr int kDc[4] = {1, -1, 0, 0};
  constexpr int kDr[4] = {0, 0, 1, -1};
  for (int k = 0; k < 4; ++k) {
    const CellIndex n{c.col + kDc[k], c.row + kDr[k]};
    if (g.in_bounds(n) && !in_set(n)) {
      return true;
    }
  }
  return false;
}

}  // namespace

Costmap inflate(const OccupancyGrid &grid, const Footprint &footprint, double decay_radius)
{
  const GridGeometry &g = grid.geometry();
  Costmap costmap(g);
  const InflationKernel kernel(g.resolution(), footprint.radius, decay_radius);
  auto in_set = [&grid](CellIndex c) { return grid.occupied(c); };
  for (std::size_t i = 0; i < g.size(); ++i) {
    const CellIndex c = g.cell_of(i);
    if (!grid.occupied(c)) {
      continue;
    }
    if (on_boundary(g, c, in_set)) {
      stamp(costmap, c, kernel);
    } else {
      costmap.raise_cost(i, cost::kLethal);
    }
  }
  return costmap;
}

void add_lethal_cells(Costmap &costmap, std::span<const CellIndex> cells,
                      const InflationKernel &kernel)
{
  const GridGeometry &g = costmap.geometry();
  auto in_set = [cells](CellIndex c) {
    return std::find(cells.begin(), cells.end(), c) != cells.end();
  };
  for (const CellIndex c : cells) {
    if (on_boundary(g, c, in_set)) {
      stamp(costmap, c, kernel);
    } else {
      costmap.raise_cost(g.index(c), cost::kLethal);
    }
  }
}

std::vector<CellIndex> rasterize_disc(const GridGeometry &geometry, Point2 center, double radius)
{
  std::vector<CellIndex> cells;
  const CellIndex lo = geometry.world_to_cell_unchecked({center.x - radius, center.y - radius});
  const CellIndex hi = geometry.world_to_cell_unchecked({center.x + radius, center.y + radius});
  for (int row = lo.row; row <= hi.row; ++row) {
    for (int col = lo.col; col <= hi.col; ++col) {
      const CellIndex c{col, row};
      if (geometry.in_bounds(c) && distance(geometry.cell_center(c), center) <= radius) {
        cells.push_back(c);
      }
    }
  }
  if (cells.empty()) {
    if (auto c = geometry.world_to_cell(center)) {
      cells.push_back(*c);
    }
  }
  return cells;
}

bool footprint_collides(const Pose &pose, const Footprint & /*footprint*/, const Costmap &costmap)
{
  // The costmap was inflated for this footprint: inscribed means contact.
  const auto cell = costmap.geometry().world_to_cell(pose.position());
  if (!cell) {
    return true;
  }
  return costmap.cost(*cell) >= cost::kInscribed;
}

std::string_view to_string(RegionKind kind)
{
  switch (kind) {
    case RegionKind::Pothole: return "pothole";
    case RegionKind::Scaffolding: return "scaffolding";
    case RegionKind::Boxes: return "boxes";
    case RegionKind::Cones: return "cones";
    case RegionKind::Bumpy: return "bumpy";
  }
  return "pothole";
}

std::optional<RegionKind> parse_region_kind(std::string_view text)
{
  for (RegionKind k : {RegionKind::Pothole, RegionKind::Scaffolding, RegionKind::Boxes,
                       RegionKind::Cones, RegionKind::Bumpy})
  {
    if (to_string(k) == text) {
      return k;
    }
  }
  return std::nullopt;
}

namespace
{

double cross(Point2 o, Point2 a, Point2 b)
{
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool point_in_polygon(Point2 p, std::span<const Point2> poly)
{
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2 a = poly[i];
    const Point2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside;
}

}  // namespace

bool polygon_is_convex(std::span<const Point2> vertices)
{
  const std::size_t n = vertices.size();
  if (n < 3) {
    return false;
  }
  int orientation = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cross(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
    const int s = sign_of(c);
    if (s == 0) {
      continue;
    }
    if (orientation == 0) {
      orientation = s;
    } else if (s != orientation) {
      return false;
    }
  }
  return orientation != 0;
}

bool region_intersects(const RegionToAvoid &region, const Pose &pose, const Footprint &footprint)
{
  const Point2 p = pose.position();
  if (const auto *circle = std::get_if<CircleShape>(&region.shape)) {
    return distance(p, circle->center) <= circle->radius + footprint.radius;
  }
  const auto &poly = std::get<PolygonShape>(region.shape).vertices;
  if (poly.empty()) {
    return false;
  }
  if (poly.size() >= 3 && point_in_polygon(p, poly)) {
    return true;
  }
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]) <= footprint.radius) {
      return true;
    }
  }
  return false;
}

}  // namespace hidwa
