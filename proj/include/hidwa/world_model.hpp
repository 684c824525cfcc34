#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hidwa/geometry.hpp"

namespace hidwa
{

// Column (x) and row (y) of a grid cell; row 0 is the bottom of the map.
struct CellIndex
{
  int col{0};
  int row{0};

  friend bool operator==(const CellIndex &, const CellIndex &) = default;
};

// Shared raster geometry of occupancy grids and costmaps. The origin is the
// world position of the lower-left corner of cell (0, 0); grids are axis
// aligned.
class GridGeometry
{
public:
  GridGeometry() = default;
  GridGeometry(double resolution, Point2 origin, int width, int height);

  double resolution() const { return resolution_; }
  Point2 origin() const { return origin_; }
  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return static_cast<std::size_t>(width_) * height_; }

  bool in_bounds(CellIndex cell) const
  {
    return cell.col >= 0 && cell.row >= 0 && cell.col < width_ && cell.row < height_;
  }
  std::size_t index(CellIndex cell) const
  {
    return static_cast<std::size_t>(cell.row) * width_ + cell.col;
  }
  CellIndex cell_of(std::size_t index) const
  {
    return {static_cast<int>(index % width_), static_cast<int>(index / width_)};
  }

  // Cell containing the point (half-open cells), or nullopt when outside.
  std::optional<CellIndex> world_to_cell(Point2 p) const
  {
    const double fx = std::floor((p.x - origin_.x) / resolution_);
    const double fy = std::floor((p.y - origin_.y) / resolution_);
    // NaN fails every comparison and lands here too
    if (!(fx >= 0.0 && fy >= 0.0 && fx < width_ && fy < height_)) {
      return std::nullopt;
    }
    return CellIndex{static_cast<int>(fx), static_cast<int>(fy)};
  }
  // Cell containing the point without bounds checking.
  CellIndex world_to_cell_unchecked(Point2 p) const;
  Point2 cell_center(CellIndex cell) const;

  friend bool operator==(const GridGeometry &, const GridGeometry &) = default;

private:
  double resolution_{0.05};
  Point2 origin_{};
  int width_{0};
  int height_{0};
};

class OccupancyGrid
{
public:
  OccupancyGrid() = default;
  explicit OccupancyGrid(GridGeometry geometry);

  const GridGeometry &geometry() const { return geometry_; }
  bool occupied(CellIndex cell) const { return cells_[geometry_.index(cell)] != 0; }
  void set_occupied(CellIndex cell, bool value = true)
  {
    cells_[geometry_.index(cell)] = value ? 1 : 0;
  }
  std::size_t occupied_count() const;

  friend bool operator==(const OccupancyGrid &, const OccupancyGrid &) = default;

private:
  GridGeometry geometry_;
  std::vector<std::uint8_t> cells_;
};

namespace cost
{
inline constexpr std::uint8_t kFree = 0;
inline constexpr std::uint8_t kInscribed = 254;
inline constexpr std::uint8_t kLethal = 255;
}  // namespace cost

class Costmap
{
public:
  Costmap() = default;
  explicit Costmap(GridGeometry geometry);

  const GridGeometry &geometry() const { return geometry_; }
  std::uint8_t cost(CellIndex cell) const { return costs_[geometry_.index(cell)]; }
  void set_cost(CellIndex cell, std::uint8_t value) { costs_[geometry_.index(cell)] = value; }
  void raise_cost(std::size_t index, std::uint8_t value)
  {
    if (costs_[index] < value) {
      costs_[index] = value;
    }
  }
  std::span<const std::uint8_t> costs() const { return costs_; }

  friend bool operator==(const Costmap &, const Costmap &) = default;

private:
  GridGeometry geometry_;
  std::vector<std::uint8_t> costs_;
};

// Circular robot footprint.
struct Footprint
{
  double radius{0.3};
};

// Distance from a cell center to the closed square of another cell at
// integer offset (dc, dr), in meters.
double cell_square_distance(int dc, int dr, double resolution);

// Cost value assigned at distance `d` from the nearest lethal cell.
std::uint8_t inflation_cost(double d, double footprint_radius, double decay_radius);

// Precomputed stamp of inflation costs around one lethal cell.
class InflationKernel
{
public:
  InflationKernel(double resolution, double footprint_radius, double decay_radius);

  struct Entry
  {
    int dc;
    int dr;
    std::uint8_t cost;
  };

  std::span<const Entry> entries() const { return entries_; }
  int reach() const { return reach_; }

private:
  int reach_{0};
  std::vector<Entry> entries_;
};

Costmap inflate(const OccupancyGrid &grid, const Footprint &footprint, double decay_radius);

// Marks `cells` lethal in `costmap` and inflates around them. `cells` must
// be in bounds.
void add_lethal_cells(Costmap &costmap, std::span<const CellIndex> cells,
                      const InflationKernel &kernel);

// Cells whose centers lie inside the closed disc (the containing cell when
// the disc is smaller than one cell). Out-of-bounds cells are dropped.
std::vector<CellIndex> rasterize_disc(const GridGeometry &geometry, Point2 center, double radius);

// True when the robot at `pose` touches a lethal or inscribed cell. Poses
// outside the map count as collisions.
bool footprint_collides(const Pose &pose, const Footprint &footprint, const Costmap &costmap);

enum class RegionKind
{
  Pothole,
  Scaffolding,
  Boxes,
  Cones,
  Bumpy,
};

std::string_view to_string(RegionKind kind);
std::optional<RegionKind> parse_region_kind(std::string_view text);

struct CircleShape
{
  Point2 center;
  double radius{0.0};

  friend bool operator==(const CircleShape &, const CircleShape &) = default;
};

struct PolygonShape
{
  std::vector<Point2> vertices;

  friend bool operator==(const PolygonShape &, const PolygonShape &) = default;
};

// Hazard area that the robot cannot sense. It is never written into an
// occupancy grid or costmap; only the operator can steer around it.
struct RegionToAvoid
{
  std::string id;
  RegionKind kind{RegionKind::Pothole};
  std::variant<CircleShape, PolygonShape> shape;

  friend bool operator==(const RegionToAvoid &, const RegionToAvoid &) = default;
};

// Closed-set overlap between the footprint disc and the region.
bool region_intersects(const RegionToAvoid &region, const Pose &pose, const Footprint &footprint);

bool polygon_is_convex(std::span<const Point2> vertices);

}  // namespace hidwa
