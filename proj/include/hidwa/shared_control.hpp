#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "hidwa/dwa.hpp"
#include "hidwa/operator_input.hpp"
#include "hidwa/params.hpp"

namespace hidwa
{

enum class ControlMode
{
  Switching,       // "sw": operator input replaces autonomy while the button is held
  SharedJoystick,  // "sj": operator input biases the DWA selection
  SharedGesture,   // "sg": as sj, steering from lateral hand motion
};

std::string_view to_string(ControlMode mode);
std::optional<ControlMode> parse_control_mode(std::string_view text);

struct OperatorState
{
  ControlMode mode{ControlMode::SharedJoystick};
  bool gamma{false};
  ControlInput u_h;
  // True while the operator is actively giving input (excludes the pseudo
  // phase that follows a release).
  bool live{false};
  bool button_down{false};
  StickSample stick;
  double hand_x{0.0};
  std::optional<double> reference_x;
  // Last tick (inclusive) of the constant pseudo input after a release.
  std::optional<std::int64_t> pseudo_until_tick;
  double pseudo_v{0.0};

  std::optional<double> pseudo_until(double dt_c) const
  {
    if (!pseudo_until_tick) {
      return std::nullopt;
    }
    return static_cast<double>(*pseudo_until_tick) * dt_c;
  }
};

struct SharedWeights
{
  double s_v{400.0};
  double s_omega{800.0};

  static SharedWeights from(const ParameterSet &params) { return {params.s_v, params.s_omega}; }
};

struct Selection
{
  ControlInput u;
  // Index into the candidate list; empty for recovery or pass-through.
  std::optional<std::size_t> index;
  // No feasible candidate: the robot is commanded to stop.
  bool recovery{false};
  // Operator command forwarded without optimization (switching mode).
  bool passthrough{false};
};

// Argmin of nav_cost over feasible candidates. Ties go to the smaller |omega|,
// then to the earlier candidate.
Selection select_dwa(std::span<const Candidate> candidates);

double shared_cost(ControlInput u, ControlInput u_h, const SharedWeights &weights);

// With gamma = 1, argmin of nav_cost + shared_cost (fills each candidate's
// shared_cost and total_cost); otherwise select_dwa.
Selection select_hidwa(std::span<Candidate> candidates, const OperatorState &op,
                       const SharedWeights &weights);

// With gamma = 1 the operator command is passed through unfiltered;
// otherwise select_dwa.
Selection select_switching(std::span<const Candidate> candidates, const OperatorState &op);

// Applies the input events due by `now` (sorted, tick-quantized) and derives
// gamma and u_h. Releasing input in sj/sg starts a pseudo phase holding
// (v_h at release, 0) for ceil(delta / dt_c) ticks; live input cancels it.
OperatorState update_operator_state(OperatorState op, std::span<const InputEvent> events, double now,
                                    const ParameterSet &params);

}  // namespace hidwa
