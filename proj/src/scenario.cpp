#include "hidwa/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hidwa
{
namespace
{

using nlohmann::json;

[[noreturn]] void fail(const std::string &field, const std::string &what)
{
  throw ScenarioParseError("scenario field '" + field + "': " + what);
}

const json &require(const json &obj, const char *key, const std::string &path)
{
  if (!obj.is_object() || !obj.contains(key)) {
    fail(path + key, "missing");
  }
  return obj.at(key);
}

double number(const json &value, const std::string &field)
{
  if (!value.is_number()) {
    fail(field, "expected a number");
  }
  const double d = value.get<double>();
  if (!std::isfinite(d)) {
    fail(field, "must be finite");
  }
  return d;
}

Point2 parse_point(const json &value, const std::string &field)
{
  return {number(require(value, "x", field + "."), field + ".x"),
          number(require(value, "y", field + "."), field + ".y")};
}

Pose parse_pose(const json &value, const std::string &field)
{
  const Point2 p = parse_point(value, field);
  const double theta = value.contains("theta") ? number(value.at("theta"), field + ".theta") : 0.0;
  return make_pose(p.x, p.y, theta);
}

OccupancyGrid parse_map(const json &doc, double resolution)
{
  const json &rows = require(doc, "map", "");
  if (!rows.is_array() || rows.empty()) {
    fail("map", "expected a non-empty array of row strings");
  }
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_string()) {
      fail("map[" + std::to_string(i) + "]", "expected a string");
    }
    lines.push_back(rows[i].get<std::string>());
    if (lines.back().size() != lines.front().size()) {
      fail("map[" + std::to_string(i) + "]",
           "row length " + std::to_string(lines.back().size()) + " differs from first row length " +
           std::to_string(lines.front().size()));
    }
  }
  if (lines.front().empty()) {
    fail("map[0]", "empty row");
  }
  Point2 origin{};
  if (doc.contains("origin")) {
    origin = parse_point(doc.at("origin"), "origin");
  }
  const int width = static_cast<int>(lines.front().size());
  const int height = static_cast<int>(lines.size());
  OccupancyGrid grid(GridGeometry(resolution, origin, width, height));
  for (int i = 0; i < height; ++i) {
    const int row = height - 1 - i;
    for (int col = 0; col < width; ++col) {
      const char c = lines[i][col];
      if (c == '#') {
        grid.set_occupied({col, row});
      } else if (c != '.') {
        fail("map[" + std::to_string(i) + "]",
             std::string("unexpected character '") + c + "' at column " + std::to_string(col));
      }
    }
  }
  return grid;
}

RegionToAvoid parse_region(const json &value, std::size_t index)
{
  const std::string field = "regions[" + std::to_string(index) + "]";
  RegionToAvoid region;
  region.id = "region_" + std::to_string(index);
  if (value.contains("id")) {
    if (!value.at("id").is_string()) {
      fail(field + ".id", "expected a string");
    }
    region.id = value.at("id").get<std::string>();
    const bool ok = !region.id.empty() &&
      std::all_of(region.id.begin(), region.id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
      });
    if (!ok) {
      fail(field + ".id", "must match [A-Za-z0-9_-]+");
    }
  }
  if (value.contains("kind")) {
    const auto kind = value.at("kind").is_string() ?
      parse_region_kind(value.at("kind").get<std::string>()) : std::nullopt;
    if (!kind) {
      fail(field + ".kind", "expected one of pothole|scaffolding|boxes|cones|bumpy");
    }
    region.kind = *kind;
  }
  const json &type = require(value, "type", field + ".");
  if (type == "circle") {
    CircleShape circle;
    circle.center = parse_point(require(value, "center", field + "."), field + ".center");
    circle.radius = number(require(value, "radius", field + "."), field + ".radius");
    if (!(circle.radius > 0.0)) {
      fail(field + ".radius", "must be positive");
    }
    region.shape = circle;
  } else if (type == "polygon") {
    const json &verts = require(value, "vertices", field + ".");
    if (!verts.is_array()) {
      fail(field + ".vertices", "expected an array");
    }
    PolygonShape poly;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      poly.vertices.push_back(parse_point(verts[i], field + ".vertices[" + std::to_string(i) + "]"));
    }
    if (!polygon_is_convex(poly.vertices)) {
      fail(field + ".vertices", "expected a convex polygon with at least 3 vertices");
    }
    region.shape = std::move(poly);
  } else {
    fail(field + ".type", "expected \"circle\" or \"polygon\"");
  }
  return region;
}

DynamicObstacleSpec parse_obstacle(const json &value, std::size_t index)
{
  const std::string field = "dynamic_obstacles[" + std::to_string(index) + "]";
  DynamicObstacleSpec spec;
  spec.radius = number(require(value, "radius", field + "."), field + ".radius");
  if (!(spec.radius > 0.0)) {
    fail(field + ".radius", "must be positive");
  }
  const json &wps = require(value, "waypoints", field + ".");
  if (!wps.is_array() || wps.empty()) {
    fail(field + ".waypoints", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < wps.size(); ++i) {
    const std::string wf = field + ".waypoints[" + std::to_string(i) + "]";
    const Point2 p = parse_point(wps[i], wf);
    const double t = number(require(wps[i], "t", wf + "."), wf + ".t");
    if (i == 0 && t != 0.0) {
      fail(wf + ".t", "first waypoint must have t = 0");
    }
    if (i > 0 && !(t > spec.waypoints.back().t)) {
      fail(wf + ".t", "waypoint times must be strictly increasing");
    }
    spec.waypoints.push_back({p.x, p.y, t});
  }
  if (value.contains("loop")) {
    if (!value.at("loop").is_boolean()) {
      fail(field + ".loop", "expected a boolean");
    }
    spec.loop = value.at("loop").get<bool>();
  }
  return spec;
}

}  // namespace

Point2 DynamicObstacleSpec::position_at(double schedule_time) const
{
  if (waypoints.size() == 1 || schedule_time <= 0.0) {
    return {waypoints.front().x, waypoints.front().y};
  }
  double t = schedule_time;
  const double period = waypoints.back().t;
  if (loop) {
    t = std::fmod(t, period);
  } else if (t >= period) {
    return {waypoints.back().x, waypoints.back().y};
  }
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const TimedWaypoint &a = waypoints[i - 1];
    const TimedWaypoint &b = waypoints[i];
    if (t <= b.t) {
      const double s = (t - a.t) / (b.t - a.t);
      return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
    }
  }
  return {waypoints.back().x, waypoints.back().y};
}

Scenario load_scenario(std::string_view text)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + byte, '\n');
    throw ScenarioParseError("scenario JSON parse error at line " + std::to_string(line) + ": " +
                             e.what());
  }
  if (!doc.is_object()) {
    fail("<root>", "expected an object");
  }

  Scenario scenario;
  scenario.name = "scenario";
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) {
      fail("name", "expected a string");
    }
    scenario.name = doc.at("name").get<std::string>();
  }
  double resolution = 0.05;
  if (doc.contains("resolution")) {
    resolution = number(doc.at("resolution"), "resolution");
    if (!(resolution > 0.0)) {
      fail("resolution", "must be positive");
    }
  }
  scenario.grid = parse_map(doc, resolution);
  scenario.start = parse_pose(require(doc, "start", ""), "start");
  scenario.goal = parse_pose(require(doc, "goal", ""), "goal");

  if (doc.contains("regions")) {
    const json &regions = doc.at("regions");
    if (!regions.is_array()) {
      fail("regions", "expected an array");
    }
    for (std::size_t i = 0; i < regions.size(); ++i) {
      scenario.regions.push_back(parse_region(regions[i], i));
    }
    for (std::size_t i = 0; i < scenario.regions.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (scenario.regions[i].id == scenario.regions[j].id) {
          fail("regions[" + std::to_string(i) + "].id", "duplicate id '" + scenario.regions[i].id + "'");
        }
      }
    }
  }
  if (doc.contains("dynamic_obstacles")) {
    const json &obstacles = doc.at("dynamic_obstacles");
    if (!obstacles.is_array()) {
      fail("dynamic_obstacles", "expected an array");
    }
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
      scenario.dynamic_obstacles.push_back(parse_obstacle(obstacles[i], i));
    }
  }
  if (doc.contains("params")) {
    const json &params = doc.at("params");
    if (!params.is_object()) {
      fail("params", "expected an object");
    }
    for (const auto &[key, value] : params.items()) {
      try {
        set_parameter(scenario.params, key, number(value, "params." + key));
      } catch (const ParameterError &e) {
        fail("params." + key, e.what());
      }
    }
  }

  try {
    validate(scenario.params);
  } catch (const ParameterError &e) {
    throw ScenarioValidationError(e.what());
  }
  const Costmap costmap = inflate(scenario.grid, scenario.footprint(), scenario.params.decay_radius);
  if (footprint_collides(scenario.start, scenario.footprint(), costmap)) {
    throw ScenarioValidationError("start pose footprint collides with the static map");
  }
  if (footprint_collides(scenario.goal, scenario.footprint(), costmap)) {
    throw ScenarioValidationError("goal pose footprint collides with the static map");
  }
  return scenario;
}

Scenario load_scenario_file(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in) {
    throw ScenarioParseError("cannot open scenario file '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_scenario(buffer.str());
}

std::vector<std::string> map_rows(const OccupancyGrid &grid)
{
  const GridGeometry &g = grid.geometry();
  std::vector<std::string> rows;
  rows.reserve(g.height());
  for (int row = g.height() - 1; row >= 0; --row) {
    std::string line(static_cast<std::size_t>(g.width()), '.');
    for (int col = 0; col < g.width(); ++col) {
      if (grid.occupied({col, row})) {
        line[col] = '#';
      }
    }
    rows.push_back(std::move(line));
  }
  return rows;
}

}  // namespace hidwa
