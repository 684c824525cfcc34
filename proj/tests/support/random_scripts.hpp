#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "hidwa/operator_input.hpp"
#include "hidwa/shared_control.hpp"

namespace hidwa::testing
{

// Random operator behaviour for a mode: stick wiggles and releases for the
// joystick modes, press/drag/release cycles for gestures.
inline std::vector<InputEvent> random_script(ControlMode mode, std::uint64_t seed, double duration,
                                             double dt_c)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> gap(0.1, 2.5);
  std::bernoulli_distribution coin(0.5);
  std::vector<InputEvent> events;
  auto push = [&](double t, InputKind kind) -> InputEvent & {
    InputEvent &e = events.emplace_back();
    e.t = t;
    e.kind = kind;
    e.tick = quantize_tick(t, dt_c);
    return e;
  };

  double t = gap(rng);
  bool held = false;
  double reference = 0.0;
  while (t < duration) {
    if (mode == ControlMode::SharedGesture) {
      if (!held) {
        reference = 0.3 * unit(rng);
        push(t, InputKind::ButtonDown).hand_x = reference;
        held = true;
      } else if (coin(rng)) {
        push(t, InputKind::ButtonUp);
        held = false;
      } else {
        push(t, InputKind::Gesture).hand_x = reference + 0.3 * unit(rng);
      }
    } else {
      const int action = std::uniform_int_distribution<int>(0, 5)(rng);
      if (action == 0) {
        push(t, held ? InputKind::ButtonUp : InputKind::ButtonDown);
        held = !held;
      } else if (action == 1) {
        push(t, InputKind::Stick);
      } else {
        InputEvent &e = push(t, InputKind::Stick);
        e.p_x = unit(rng);
        e.p_y = unit(rng);
      }
    }
    t += gap(rng);
  }
  return events;
}

}  // namespace hidwa::testing
