#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hidwa/geometry.hpp"
#include "hidwa/params.hpp"

namespace hidwa
{

class NoReferenceError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

class InputScriptError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Joystick coordinates, each clamped to [-1, 1].
struct StickSample
{
  double p_x{0.0};
  double p_y{0.0};
  double t{0.0};
};

StickSample make_stick(double p_x, double p_y, double t = 0.0);

// Lateral hand position (m) and the position captured when the button went
// down.
struct GestureSample
{
  double hand_x{0.0};
  double t{0.0};
  std::optional<double> reference_x;
};

// Quadratic map with deadzone: 0 for |p| <= 0.1, p^2 sign(p) limit otherwise.
double shape_axis(double p, double limit);

// Switching mode: both axes mapped.
ControlInput map_joystick_sw(const StickSample &p, const ParameterSet &params);
// Shared joystick: forward speed fixed to v_max, only the x axis steers.
ControlInput map_joystick_sj(const StickSample &p, const ParameterSet &params);
// Shared gesture: lateral hand displacement normalized by gesture_span.
// Throws NoReferenceError when no button press is active.
ControlInput map_gesture(const GestureSample &g, const ParameterSet &params);

enum class InputKind
{
  Stick,
  Gesture,
  ButtonDown,
  ButtonUp,
};

std::string_view to_string(InputKind kind);
std::optional<InputKind> parse_input_kind(std::string_view text);

struct InputEvent
{
  double t{0.0};
  InputKind kind{InputKind::Stick};
  double p_x{0.0};
  double p_y{0.0};
  std::optional<double> hand_x;
  // Control tick at which the event is applied.
  std::int64_t tick{0};
};

// First tick at or after time t. Events between ticks k and k+1 land on k+1.
std::int64_t quantize_tick(double t, double dt_c);

// One JSON object per line: {t, kind, p_x?, p_y?, hand_x?}. Blank lines are
// skipped. Events are stably sorted by time and quantized to ticks.
std::vector<InputEvent> parse_input_script(std::string_view text, double dt_c);
std::vector<InputEvent> load_input_script(const std::filesystem::path &path, double dt_c);

std::string to_json_line(const InputEvent &event);

}  // namespace hidwa
