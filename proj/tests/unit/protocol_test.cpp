#include <doctest.h>

#include <random>

#include "hidwa/protocol.hpp"
#include "json.hpp"

using namespace hidwa;

namespace
{

Scenario bundled(const std::string &name)
{
  return load_scenario_file(std::string(HIDWA_SCENARIO_DIR) + "/" + name + ".json");
}

SnapshotMessage random_snapshot(std::mt19937_64 &rng, const GeometryBlock &geo)
{
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  std::uniform_int_distribution<int> n(0, 30);
  SnapshotMessage s;
  s.tick = n(rng) * 1000 + n(rng);
  s.t = u(rng);
  s.robot = {u(rng), u(rng), u(rng) / 7.0};
  s.u_actual = {u(rng) / 20.0, u(rng) / 20.0};
  s.command = {u(rng) / 20.0, u(rng) / 20.0};
  s.gamma = n(rng) % 2;
  s.mode = std::array{ControlMode::Switching, ControlMode::SharedJoystick,
                      ControlMode::SharedGesture}[n(rng) % 3];
  s.u_h = {u(rng) / 20.0, u(rng) / 20.0};
  s.path_version = static_cast<std::uint64_t>(n(rng));
  s.path_included = n(rng) % 2 == 0;
  if (s.path_included) {
    for (int i = n(rng); i > 0; --i) {
      s.path.push_back({u(rng), u(rng)});
    }
  }
  if (n(rng) % 4 == 0) {
    s.geometry = geo;
  }
  for (int i = n(rng) % 4; i > 0; --i) {
    s.obstacles.push_back({{u(rng), u(rng)}, 0.25});
  }
  s.status = std::array{RunStatus::Running, RunStatus::GoalReached, RunStatus::Aborted}[n(rng) % 3];
  s.paused = n(rng) % 2;
  s.recovery = n(rng) % 5 == 0;
  s.metrics.status = s.status;
  if (s.status == RunStatus::GoalReached) {
    s.metrics.completion_time = s.t;
  }
  s.metrics.regions_not_avoided = n(rng) % 3;
  s.metrics.collisions = n(rng) % 2;
  s.metrics.path_length = std::abs(u(rng));
  s.metrics.input_active_time = std::abs(u(rng));
  s.metrics.sim_time = s.t;
  return s;
}

}  // namespace

TEST_CASE("snapshots round-trip exactly")
{
  std::mt19937_64 rng(100);
  const GeometryBlock geo = make_geometry(bundled("pothole_detour"));
  for (int i = 0; i < 100; ++i) {
    const SnapshotMessage s = random_snapshot(rng, geo);
    const std::string text = encode_snapshot(s);
    const SnapshotMessage back = decode_snapshot(text);
    CHECK(back == s);
    CHECK(encode_snapshot(back) == text);
  }
}

TEST_CASE("snapshot path is sent only when asked")
{
  Simulation sim(bundled("straight_corridor"), ControlMode::SharedJoystick);
  sim.tick({});
  const auto with = nlohmann::json::parse(encode_snapshot(make_snapshot(sim, true, false, false)));
  CHECK(with.at("path_included") == true);
  CHECK(with.at("path").size() == sim.world().path.points.size());
  CHECK(with.at("path_version") == 1);
  const auto without = nlohmann::json::parse(encode_snapshot(make_snapshot(sim, false, false, false)));
  CHECK(without.at("path_included") == false);
  CHECK_FALSE(without.contains("path"));
  CHECK_FALSE(without.contains("geometry"));
  CHECK(without.at("type") == "snapshot");
}

TEST_CASE("geometry block describes the scenario")
{
  const Scenario sc = bundled("pothole_detour");
  Simulation sim(sc, ControlMode::Switching);
  const SnapshotMessage s = make_snapshot(sim, true, true, true);
  REQUIRE(s.geometry);
  CHECK(s.geometry->scenario == sc.name);
  CHECK(s.geometry->map == map_rows(sc.grid));
  CHECK(s.geometry->width == sc.grid.geometry().width());
  CHECK(s.geometry->regions == sc.regions);
  CHECK(s.geometry->goal == sc.goal);
  CHECK(s.mode == ControlMode::Switching);
  CHECK(s.paused);
  CHECK(s.tick == 0);
}

TEST_CASE("client messages parse")
{
  const ClientMessage stick = parse_client_message(R"({"type": "stick", "p_x": 0.3, "p_y": -0.5})");
  CHECK(stick.type == ClientMessageType::Stick);
  CHECK(stick.p_x == 0.3);
  CHECK(stick.p_y == -0.5);
  const ClientMessage clamped = parse_client_message(R"({"type": "stick", "p_x": 4, "p_y": -1.5})");
  CHECK(clamped.p_x == 1.0);
  CHECK(clamped.p_y == -1.0);
  const ClientMessage g = parse_client_message(R"({"type": "gesture", "hand_x": 0.12})");
  CHECK(g.hand_x == 0.12);
  CHECK_FALSE(parse_client_message(R"({"type": "button_down"})").hand_x);
  CHECK(parse_client_message(R"({"type": "button_down", "hand_x": -0.2})").hand_x == -0.2);
  CHECK(parse_client_message(R"({"type": "set_mode", "mode": "sw"})").mode == ControlMode::Switching);
  CHECK(parse_client_message(R"({"type": "pause"})").type == ClientMessageType::Pause);
  CHECK(parse_client_message(R"({"type": "reset"})").type == ClientMessageType::Reset);
  const ClientMessage load = parse_client_message(R"({"type": "load_scenario", "scenario": {"name": "a"}})");
  CHECK(nlohmann::json::parse(load.scenario_document).at("name") == "a");
}

TEST_CASE("bad client messages are rejected")
{
  for (const char *text : {
         "not json",
         "[1, 2]",
         R"({"p_x": 0})",
         R"({"type": 7})",
         R"({"type": "jump"})",
         R"({"type": "stick", "p_x": 0.1})",
         R"({"type": "stick", "p_x": "left", "p_y": 0})",
         R"({"type": "gesture"})",
         R"({"type": "set_mode", "mode": "auto"})",
         R"({"type": "set_mode"})",
         R"({"type": "load_scenario", "scenario": "office"})",
       })
  {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_client_message(text), ProtocolError);
  }
}

TEST_CASE("client messages round-trip through encode")
{
  for (const char *text : {
         R"({"type":"stick","p_x":0.25,"p_y":-1.0})",
         R"({"type":"gesture","hand_x":0.5})",
         R"({"type":"button_down","hand_x":0.1})",
         R"({"type":"button_up"})",
         R"({"type":"set_mode","mode":"sg"})",
         R"({"type":"start"})",
       })
  {
    const ClientMessage m = parse_client_message(text);
    const ClientMessage again = parse_client_message(encode_client_message(m));
    CHECK(again.type == m.type);
    CHECK(again.p_x == m.p_x);
    CHECK(again.p_y == m.p_y);
    CHECK(again.hand_x == m.hand_x);
    CHECK(again.mode == m.mode);
  }
}

TEST_CASE("input messages become input events")
{
  CHECK(is_input_message(ClientMessageType::Stick));
  CHECK(is_input_message(ClientMessageType::ButtonUp));
  CHECK_FALSE(is_input_message(ClientMessageType::Reset));
  const InputEvent ev = to_input_event(parse_client_message(R"({"type": "stick", "p_x": 0.5, "p_y": 0.2})"), 1.5, 30);
  CHECK(ev.kind == InputKind::Stick);
  CHECK(ev.tick == 30);
  CHECK(ev.t == 1.5);
  CHECK(ev.p_x == 0.5);
  CHECK_THROWS_AS(to_input_event(parse_client_message(R"({"type": "start"})"), 0, 0), ProtocolError);
  CHECK(nlohmann::json::parse(encode_error("x")).at("type") == "error");
  CHECK(nlohmann::json::parse(encode_role("observer")).at("role") == "observer");
}
