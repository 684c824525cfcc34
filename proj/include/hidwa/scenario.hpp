#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hidwa/geometry.hpp"
#include "hidwa/params.hpp"
#include "hidwa/world_model.hpp"

namespace hidwa
{

// Malformed document: bad JSON, missing or mistyped field, ragged map rows.
class ScenarioParseError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Well-formed document that violates a scenario invariant.
class ScenarioValidationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct TimedWaypoint
{
  double x{0.0};
  double y{0.0};
  double t{0.0};
};

// Disc-shaped moving obstacle following a piecewise-linear schedule. With
// `loop` the schedule repeats with period equal to the last waypoint time.
struct DynamicObstacleSpec
{
  double radius{0.25};
  std::vector<TimedWaypoint> waypoints;
  bool loop{false};

  Point2 position_at(double schedule_time) const;
};

struct Scenario
{
  std::string name;
  OccupancyGrid grid;
  Pose start;
  Pose goal;
  std::vector<RegionToAvoid> regions;
  std::vector<DynamicObstacleSpec> dynamic_obstacles;
  ParameterSet params;

  Footprint footprint() const { return Footprint{params.footprint_radius}; }
};

// Parses and validates a scenario document (JSON, see docs/scenario.md).
Scenario load_scenario(std::string_view text);
Scenario load_scenario_file(const std::filesystem::path &path);

// Rebuilds the map rows in document form ('#' occupied, '.' free, top row
// first).
std::vector<std::string> map_rows(const OccupancyGrid &grid);

}  // namespace hidwa
