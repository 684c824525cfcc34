#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hidwa/operator_input.hpp"
#include "hidwa/shared_control.hpp"
#include "hidwa/simulator.hpp"

namespace hidwa
{

class ProtocolError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Static scenario description sent once per client (and after a reload).
struct GeometryBlock
{
  std::string scenario;
  double resolution{0.05};
  Point2 origin;
  int width{0};
  int height{0};
  std::vector<std::string> map;
  Pose start;
  Pose goal;
  double footprint_radius{0.0};
  std::vector<RegionToAvoid> regions;

  friend bool operator==(const GeometryBlock &, const GeometryBlock &) = default;
};

struct ObstacleView
{
  Point2 position;
  double radius{0.0};

  friend bool operator==(const ObstacleView &, const ObstacleView &) = default;
};

struct SnapshotMessage
{
  std::int64_t tick{0};
  double t{0.0};
  Pose robot;
  ControlInput u_actual;
  ControlInput command;
  int gamma{0};
  ControlMode mode{ControlMode::SharedJoystick};
  ControlInput u_h;
  // Path delta encoding: the path is present only when it changed since the
  // receiver's previous snapshot.
  std::uint64_t path_version{0};
  bool path_included{false};
  std::vector<Point2> path;
  std::optional<GeometryBlock> geometry;
  std::vector<ObstacleView> obstacles;
  RunStatus status{RunStatus::Running};
  bool paused{false};
  bool recovery{false};
  Metrics metrics;

  friend bool operator==(const SnapshotMessage &, const SnapshotMessage &) = default;
};

GeometryBlock make_geometry(const Scenario &scenario);

SnapshotMessage make_snapshot(const Simulation &sim, bool include_path, bool include_geometry,
                              bool paused);

// Canonical JSON: fixed key order, shortest round-trip number formatting.
std::string encode_snapshot(const SnapshotMessage &snapshot);
SnapshotMessage decode_snapshot(std::string_view text);

enum class ClientMessageType
{
  Stick,
  Gesture,
  ButtonDown,
  ButtonUp,
  SetMode,
  LoadScenario,
  Start,
  Pause,
  Reset,
};

std::string_view to_string(ClientMessageType type);

struct ClientMessage
{
  ClientMessageType type{ClientMessageType::Stick};
  double p_x{0.0};
  double p_y{0.0};
  std::optional<double> hand_x;
  std::optional<ControlMode> mode;
  // Raw scenario document for load_scenario.
  std::string scenario_document;
};

// Rejects unknown types and missing or mistyped fields; clamps stick axes.
ClientMessage parse_client_message(std::string_view text);
std::string encode_client_message(const ClientMessage &message);

bool is_input_message(ClientMessageType type);
InputEvent to_input_event(const ClientMessage &message, double t, std::int64_t tick);

std::string encode_error(std::string_view message);
std::string encode_role(std::string_view role);

}  // namespace hidwa
