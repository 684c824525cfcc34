#include "hidwa/operator_input.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hidwa
{

StickSample make_stick(double p_x, double p_y, double t)
{
  return {std::clamp(p_x, -1.0, 1.0), std::clamp(p_y, -1.0, 1.0), t};
}

double shape_axis(double p, double limit)
{
  if (std::abs(p) <= kInputDeadzone) {
    return 0.0;
  }
  return p * p * (p > 0.0 ? 1.0 : -1.0) * limit;
}

ControlInput map_joystick_sw(const StickSample &p, const ParameterSet &params)
{
  return {shape_axis(p.p_y, params.v_max), shape_axis(p.p_x, params.omega_max)};
}

ControlInput map_joystick_sj(const StickSample &p, const ParameterSet &params)
{
  return {params.v_max, shape_axis(p.p_x, params.omega_max)};
}

ControlInput map_gesture(const GestureSample &g, const ParameterSet &params)
{
  if (!g.reference_x) {
    throw NoReferenceError("gesture sample without an active button press");
  }
  const double p = std::clamp((g.hand_x - *g.reference_x) / params.gesture_span, -1.0, 1.0);
  return {params.v_max, shape_axis(p, params.omega_max)};
}

std::string_view to_string(InputKind kind)
{
  switch (kind) {
    case InputKind::Stick: return "stick";
    case InputKind::Gesture: return "gesture";
    case InputKind::ButtonDown: return "button_down";
    case InputKind::ButtonUp: return "button_up";
  }
  return "stick";
}

std::optional<InputKind> parse_input_kind(std::string_view text)
{
  for (InputKind k : {InputKind::Stick, InputKind::Gesture, InputKind::ButtonDown, InputKind::ButtonUp}) {
    if (to_string(k) == text) {
      return k;
    }
  }
  return std::nullopt;
}

std::int64_t quantize_tick(double t, double dt_c)
{
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(t / dt_c - 1e-6)));
}

std::vector<InputEvent> parse_input_script(std::string_view text, double dt_c)
{
  using nlohmann::json;
  std::vector<InputEvent> events;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    auto fail = [line_no](const std::string &what) -> InputScriptError {
      return InputScriptError("input script line " + std::to_string(line_no) + ": " + what);
    };
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error &e) {
      throw fail(e.what());
    }
    if (!obj.is_object()) {
      throw fail("expected a JSON object");
    }
    auto num = [&](const char *key) -> std::optional<double> {
      if (!obj.contains(key)) {
        return std::nullopt;
      }
      if (!obj.at(key).is_number()) {
        throw fail(std::string("field '") + key + "' must be a number");
      }
      const double d = obj.at(key).get<double>();
      if (!std::isfinite(d)) {
        throw fail(std::string("field '") + key + "' must be finite");
      }
      return d;
    };
    InputEvent ev;
    const auto t = num("t");
    if (!t || *t < 0.0) {
      throw fail("field 't' missing or negative");
    }
    ev.t = *t;
    if (!obj.contains("kind") || !obj.at("kind").is_string()) {
      throw fail("field 'kind' missing");
    }
    const auto kind = parse_input_kind(obj.at("kind").get<std::string>());
    if (!kind) {
      throw fail("unknown kind '" + obj.at("kind").get<std::string>() + "'");
    }
    ev.kind = *kind;
    ev.p_x = std::clamp(num("p_x").value_or(0.0), -1.0, 1.0);
    ev.p_y = std::clamp(num("p_y").value_or(0.0), -1.0, 1.0);
    ev.hand_x = num("hand_x");
    if (ev.kind == InputKind::Gesture && !ev.hand_x) {
      throw fail("gesture event needs 'hand_x'");
    }
    ev.tick = quantize_tick(ev.t, dt_c);
    events.push_back(ev);
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const InputEvent &a, const InputEvent &b) { return a.t < b.t; });
  return events;
}

std::vector<InputEvent> load_input_script(const std::filesystem::path &path, double dt_c)
{
  std::ifstream in(path);
  if (!in) {
    throw InputScriptError("cannot open input script '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_input_script(buffer.str(), dt_c);
}

std::string to_json_line(const InputEvent &event)
{
  nlohmann::ordered_json obj;
  obj["t"] = event.t;
  obj["kind"] = std::string(to_string(event.kind));
  if (event.kind == InputKind::Stick) {
    obj["p_x"] = event.p_x;
    obj["p_y"] = event.p_y;
  }
  if (event.hand_x) {
    obj["hand_x"] = *event.hand_x;
  }
  return obj.dump();
}

}  // namespace hidwa
