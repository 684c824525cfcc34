#include "hidwa/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace hidwa
{
namespace
{

using nlohmann::json;
using ojson = nlohmann::ordered_json;

ojson point_json(Point2 p)
{
  ojson j;
  j["x"] = p.x;
  j["y"] = p.y;
  return j;
}

ojson pose_json(const Pose &p)
{
  ojson j;
  j["x"] = p.x;
  j["y"] = p.y;
  j["theta"] = p.theta;
  return j;
}

ojson control_json(ControlInput u)
{
  ojson j;
  j["v"] = u.v;
  j["omega"] = u.omega;
  return j;
}

ojson region_json(const RegionToAvoid &r)
{
  ojson j;
  j["id"] = r.id;
  j["kind"] = std::string(to_string(r.kind));
  if (const auto *c = std::get_if<CircleShape>(&r.shape)) {
    j["type"] = "circle";
    j["center"] = point_json(c->center);
    j["radius"] = c->radius;
  } else {
    j["type"] = "polygon";
    ojson verts = ojson::array();
    for (const Point2 &p : std::get<PolygonShape>(r.shape).vertices) {
      verts.push_back(point_json(p));
    }
    j["vertices"] = std::move(verts);
  }
  return j;
}

Point2 read_point(const json &j)
{
  return {j.at("x").get<double>(), j.at("y").get<double>()};
}

Pose read_pose(const json &j)
{
  return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("theta").get<double>()};
}

ControlInput read_control(const json &j)
{
  return {j.at("v").get<double>(), j.at("omega").get<double>()};
}

RegionToAvoid read_region(const json &j)
{
  RegionToAvoid r;
  r.id = j.at("id").get<std::string>();
  const auto kind = parse_region_kind(j.at("kind").get<std::string>());
  if (!kind) {
    throw ProtocolError("snapshot: unknown region kind");
  }
  r.kind = *kind;
  if (j.at("type") == "circle") {
    r.shape = CircleShape{read_point(j.at("center")), j.at("radius").get<double>()};
  } else {
    PolygonShape poly;
    for (const auto &v : j.at("vertices")) {
      poly.vertices.push_back(read_point(v));
    }
    r.shape = std::move(poly);
  }
  return r;
}

RunStatus parse_status(const std::string &text)
{
  for (RunStatus s : {RunStatus::Running, RunStatus::GoalReached, RunStatus::Aborted}) {
    if (to_string(s) == text) {
      return s;
    }
  }
  throw ProtocolError("snapshot: unknown status '" + text + "'");
}

}  // namespace

GeometryBlock make_geometry(const Scenario &scenario)
{
  const GridGeometry &g = scenario.grid.geometry();
  GeometryBlock block;
  block.scenario = scenario.name;
  block.resolution = g.resolution();
  block.origin = g.origin();
  block.width = g.width();
  block.height = g.height();
  block.map = map_rows(scenario.grid);
  block.start = scenario.start;
  block.goal = scenario.goal;
  block.footprint_radius = scenario.params.footprint_radius;
  block.regions = scenario.regions;
  return block;
}

SnapshotMessage make_snapshot(const Simulation &sim, bool include_path, bool include_geometry,
                              bool paused)
{
  const WorldState &w = sim.world();
  SnapshotMessage s;
  s.tick = w.tick;
  s.t = static_cast<double>(w.tick) * sim.context().params().dt_c;
  s.robot = w.robot;
  s.u_actual = w.u_actual;
  s.command = w.command;
  s.gamma = w.operator_state.gamma ? 1 : 0;
  s.mode = w.operator_state.mode;
  s.u_h = w.operator_state.u_h;
  s.path_version = w.path_version;
  s.path_included = include_path;
  if (include_path) {
    s.path = w.path.points;
  }
  if (include_geometry) {
    s.geometry = make_geometry(sim.scenario());
  }
  for (const auto &o : w.obstacles) {
    s.obstacles.push_back({o.position, o.radius});
  }
  s.status = w.status;
  s.paused = paused;
  s.recovery = w.recovery;
  s.metrics.status = w.status;
  s.metrics.completion_time = w.completion_time;
  s.metrics.regions_not_avoided = static_cast<int>(w.regions_touched.size());
  s.metrics.collisions = w.collisions;
  s.metrics.path_length = w.distance_travelled;
  s.metrics.input_active_time = static_cast<double>(w.live_input_ticks) * sim.context().params().dt_c;
  s.metrics.sim_time = s.t;
  return s;
}

std::string encode_snapshot(const SnapshotMessage &s)
{
  ojson j;
  j["type"] = "snapshot";
  j["tick"] = s.tick;
  j["t"] = s.t;
  j["robot"] = pose_json(s.robot);
  j["u_actual"] = control_json(s.u_actual);
  j["command"] = control_json(s.command);
  j["gamma"] = s.gamma;
  j["mode"] = std::string(to_string(s.mode));
  j["u_h"] = control_json(s.u_h);
  j["path_version"] = s.path_version;
  j["path_included"] = s.path_included;
  if (s.path_included) {
    ojson pts = ojson::array();
    for (const Point2 &p : s.path) {
      pts.push_back(ojson::array({p.x, p.y}));
    }
    j["path"] = std::move(pts);
  }
  if (s.geometry) {
    const GeometryBlock &g = *s.geometry;
    ojson geo;
    geo["scenario"] = g.scenario;
    geo["resolution"] = g.resolution;
    geo["origin"] = point_json(g.origin);
    geo["width"] = g.width;
    geo["height"] = g.height;
    geo["map"] = g.map;
    geo["start"] = pose_json(g.start);
    geo["goal"] = pose_json(g.goal);
    geo["footprint_radius"] = g.footprint_radius;
    ojson regions = ojson::array();
    for (const auto &r : g.regions) {
      regions.push_back(region_json(r));
    }
    geo["regions"] = std::move(regions);
    j["geometry"] = std::move(geo);
  }
  ojson obstacles = ojson::array();
  for (const auto &o : s.obstacles) {
    ojson oj;
    oj["x"] = o.position.x;
    oj["y"] = o.position.y;
    oj["radius"] = o.radius;
    obstacles.push_back(std::move(oj));
  }
  j["obstacles"] = std::move(obstacles);
  j["status"] = std::string(to_string(s.status));
  j["paused"] = s.paused;
  j["recovery"] = s.recovery;
  ojson m;
  m["status"] = std::string(to_string(s.metrics.status));
  if (s.metrics.completion_time) {
    m["completion_time"] = *s.metrics.completion_time;
  } else {
    m["completion_time"] = nullptr;
  }
  m["regions_not_avoided"] = s.metrics.regions_not_avoided;
  m["collisions"] = s.metrics.collisions;
  m["path_length"] = s.metrics.path_length;
  m["input_active_time"] = s.metrics.input_active_time;
  m["sim_time"] = s.metrics.sim_time;
  j["metrics"] = std::move(m);
  return j.dump();
}

SnapshotMessage decode_snapshot(std::string_view text)
{
  try {
    const json j = json::parse(text);
    if (j.at("type") != "snapshot") {
      throw ProtocolError("not a snapshot message");
    }
    SnapshotMessage s;
    s.tick = j.at("tick").get<std::int64_t>();
    s.t = j.at("t").get<double>();
    s.robot = read_pose(j.at("robot"));
    s.u_actual = read_control(j.at("u_actual"));
    s.command = read_control(j.at("command"));
    s.gamma = j.at("gamma").get<int>();
    const auto mode = parse_control_mode(j.at("mode").get<std::string>());
    if (!mode) {
      throw ProtocolError("snapshot: unknown mode");
    }
    s.mode = *mode;
    s.u_h = read_control(j.at("u_h"));
    s.path_version = j.at("path_version").get<std::uint64_t>();
    s.path_included = j.at("path_included").get<bool>();
    if (s.path_included) {
      for (const auto &p : j.at("path")) {
        s.path.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      }
    }
    if (j.contains("geometry")) {
      const json &geo = j.at("geometry");
      GeometryBlock g;
      g.scenario = geo.at("scenario").get<std::string>();
      g.resolution = geo.at("resolution").get<double>();
      g.origin = read_point(geo.at("origin"));
      g.width = geo.at("width").get<int>();
      g.height = geo.at("height").get<int>();
      g.map = geo.at("map").get<std::vector<std::string>>();
      g.start = read_pose(geo.at("start"));
      g.goal = read_pose(geo.at("goal"));
      g.footprint_radius = geo.at("footprint_radius").get<double>();
      for (const auto &r : geo.at("regions")) {
        g.regions.push_back(read_region(r));
      }
      s.geometry = std::move(g);
    }
    for (const auto &o : j.at("obstacles")) {
      s.obstacles.push_back({{o.at("x").get<double>(), o.at("y").get<double>()},
                             o.at("radius").get<double>()});
    }
    s.status = parse_status(j.at("status").get<std::string>());
    s.paused = j.at("paused").get<bool>();
    s.recovery = j.at("recovery").get<bool>();
    const json &m = j.at("metrics");
    s.metrics.status = parse_status(m.at("status").get<std::string>());
    if (!m.at("completion_time").is_null()) {
      s.metrics.completion_time = m.at("completion_time").get<double>();
    }
    s.metrics.regions_not_avoided = m.at("regions_not_avoided").get<int>();
    s.metrics.collisions = m.at("collisions").get<int>();
    s.metrics.path_length = m.at("path_length").get<double>();
    s.metrics.input_active_time = m.at("input_active_time").get<double>();
    s.metrics.sim_time = m.at("sim_time").get<double>();
    return s;
  } catch (const json::exception &e) {
    throw ProtocolError(std::string("malformed snapshot: ") + e.what());
  }
}

std::string_view to_string(ClientMessageType type)
{
  switch (type) {
    case ClientMessageType::Stick: return "stick";
    case ClientMessageType::Gesture: return "gesture";
    case ClientMessageType::ButtonDown: return "button_down";
    case ClientMessageType::ButtonUp: return "button_up";
    case ClientMessageType::SetMode: return "set_mode";
    case ClientMessageType::LoadScenario: return "load_scenario";
    case ClientMessageType::Start: return "start";
    case ClientMessageType::Pause: return "pause";
    case ClientMessageType::Reset: return "reset";
  }
  return "stick";
}

bool is_input_message(ClientMessageType type)
{
  return type == ClientMessageType::Stick || type == ClientMessageType::Gesture ||
         type == ClientMessageType::ButtonDown || type == ClientMessageType::ButtonUp;
}

ClientMessage parse_client_message(std::string_view text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ProtocolError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ProtocolError("message needs a string 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  ClientMessage msg;
  bool known = false;
  for (ClientMessageType t :
       {ClientMessageType::Stick, ClientMessageType::Gesture, ClientMessageType::ButtonDown,
        ClientMessageType::ButtonUp, ClientMessageType::SetMode, ClientMessageType::LoadScenario,
        ClientMessageType::Start, ClientMessageType::Pause, ClientMessageType::Reset})
  {
    if (to_string(t) == type) {
      msg.type = t;
      known = true;
    }
  }
  if (!known) {
    throw ProtocolError("unknown message type '" + type + "'");
  }
  auto number = [&j](const char *key, bool required) -> std::optional<double> {
    if (!j.contains(key)) {
      if (required) {
        throw ProtocolError(std::string("missing field '") + key + "'");
      }
      return std::nullopt;
    }
    if (!j.at(key).is_number() || !std::isfinite(j.at(key).get<double>())) {
      throw ProtocolError(std::string("field '") + key + "' must be a finite number");
    }
    return j.at(key).get<double>();
  };
  switch (msg.type) {
    case ClientMessageType::Stick:
      msg.p_x = std::clamp(*number("p_x", true), -1.0, 1.0);
      msg.p_y = std::clamp(*number("p_y", true), -1.0, 1.0);
      break;
    case ClientMessageType::Gesture:
      msg.hand_x = number("hand_x", true);
      break;
    case ClientMessageType::ButtonDown:
      msg.hand_x = number("hand_x", false);
      break;
    case ClientMessageType::SetMode: {
      if (!j.contains("mode") || !j.at("mode").is_string()) {
        throw ProtocolError("set_mode needs a string 'mode'");
      }
      msg.mode = parse_control_mode(j.at("mode").get<std::string>());
      if (!msg.mode) {
        throw ProtocolError("unknown mode '" + j.at("mode").get<std::string>() + "'");
      }
      break;
    }
    case ClientMessageType::LoadScenario:
      if (!j.contains("scenario") || !j.at("scenario").is_object()) {
        throw ProtocolError("load_scenario needs a 'scenario' object");
      }
      msg.scenario_document = j.at("scenario").dump();
      break;
    default:
      break;
  }
  return msg;
}

std::string encode_client_message(const ClientMessage &msg)
{
  ojson j;
  j["type"] = std::string(to_string(msg.type));
  switch (msg.type) {
    case ClientMessageType::Stick:
      j["p_x"] = msg.p_x;
      j["p_y"] = msg.p_y;
      break;
    case ClientMessageType::Gesture:
    case ClientMessageType::ButtonDown:
      if (msg.hand_x) {
        j["hand_x"] = *msg.hand_x;
      }
      break;
    case ClientMessageType::SetMode:
      j["mode"] = std::string(to_string(msg.mode.value_or(ControlMode::SharedJoystick)));
      break;
    case ClientMessageType::LoadScenario:
      j["scenario"] = ojson::parse(msg.scenario_document);
      break;
    default:
      break;
  }
  return j.dump();
}

InputEvent to_input_event(const ClientMessage &msg, double t, std::int64_t tick)
{
  InputEvent ev;
  ev.t = t;
  ev.tick = tick;
  ev.p_x = msg.p_x;
  ev.p_y = msg.p_y;
  ev.hand_x = msg.hand_x;
  switch (msg.type) {
    case ClientMessageType::Stick: ev.kind = InputKind::Stick; break;
    case ClientMessageType::Gesture: ev.kind = InputKind::Gesture; break;
    case ClientMessageType::ButtonDown: ev.kind = InputKind::ButtonDown; break;
    case ClientMessageType::ButtonUp: ev.kind = InputKind::ButtonUp; break;
    default: throw ProtocolError("not an input message");
  }
  return ev;
}

std::string encode_error(std::string_view message)
{
  ojson j;
  j["type"] = "error";
  j["message"] = std::string(message);
  return j.dump();
}

std::string encode_role(std::string_view role)
{
  ojson j;
  j["type"] = "role";
  j["role"] = std::string(role);
  return j.dump();
}

}  // namespace hidwa
