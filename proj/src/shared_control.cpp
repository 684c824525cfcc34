#include "hidwa/shared_control.hpp"

#include <cmath>

namespace hidwa
{

std::string_view to_string(ControlMode mode)
{
  switch (mode) {
    case ControlMode::Switching: return "sw";
    case ControlMode::SharedJoystick: return "sj";
    case ControlMode::SharedGesture: return "sg";
  }
  return "sj";
}

std::optional<ControlMode> parse_control_mode(std::string_view text)
{
  for (ControlMode m : {ControlMode::Switching, ControlMode::SharedJoystick, ControlMode::SharedGesture}) {
    if (to_string(m) == text) {
      return m;
    }
  }
  return std::nullopt;
}

namespace
{

template<typename CostFn>
Selection argmin(std::span<const Candidate> candidates, CostFn cost_of)
{
  std::optional<std::size_t> best;
  double best_cost = 0.0;
  double best_turn = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Candidate &c = candidates[i];
    if (!c.feasible) {
      continue;
    }
    const double cost = cost_of(c);
    const double turn = std::abs(c.u.omega);
    if (!best || cost < best_cost || (cost == best_cost && turn < best_turn)) {
      best = i;
      best_cost = cost;
      best_turn = turn;
    }
  }
  if (!best) {
    return Selection{ControlInput{0.0, 0.0}, std::nullopt, true, false};
  }
  return Selection{candidates[*best].u, best, false, false};
}

}  // namespace

Selection select_dwa(std::span<const Candidate> candidates)
{
  return argmin(candidates, [](const Candidate &c) { return c.nav_cost; });
}

double shared_cost(ControlInput u, ControlInput u_h, const SharedWeights &weights)
{
  return weights.s_v * std::abs(u_h.v - u.v) + weights.s_omega * std::abs(u_h.omega - u.omega);
}

Selection select_hidwa(std::span<Candidate> candidates, const OperatorState &op,
                       const SharedWeights &weights)
{
  if (!op.gamma) {
    return select_dwa(candidates);
  }
  for (Candidate &c : candidates) {
    c.shared_cost = shared_cost(c.u, op.u_h, weights);
    c.total_cost = c.nav_cost + c.shared_cost;
  }
  return argmin(std::span<const Candidate>(candidates),
                [](const Candidate &c) { return c.total_cost; });
}

Selection select_switching(std::span<const Candidate> candidates, const OperatorState &op)
{
  if (op.gamma) {
    return Selection{op.u_h, std::nullopt, false, true};
  }
  return select_dwa(candidates);
}

namespace
{

bool stick_deflected(const StickSample &s)
{
  return std::abs(s.p_x) > kInputDeadzone || std::abs(s.p_y) > kInputDeadzone;
}

bool is_live(const OperatorState &op)
{
  switch (op.mode) {
    case ControlMode::Switching:
    case ControlMode::SharedGesture:
      return op.button_down;
    case ControlMode::SharedJoystick:
      return op.button_down || stick_deflected(op.stick);
  }
  return false;
}

ControlInput live_command(const OperatorState &op, const ParameterSet &params)
{
  switch (op.mode) {
    case ControlMode::Switching:
      return map_joystick_sw(op.stick, params);
    case ControlMode::SharedJoystick:
      return map_joystick_sj(op.stick, params);
    case ControlMode::SharedGesture:
      return map_gesture(GestureSample{op.hand_x, 0.0, op.reference_x}, params);
  }
  return {};
}

void apply(OperatorState &op, const InputEvent &ev)
{
  switch (ev.kind) {
    case InputKind::Stick:
      op.stick = make_stick(ev.p_x, ev.p_y, ev.t);
      break;
    case InputKind::Gesture:
      op.hand_x = ev.hand_x.value_or(op.hand_x);
      break;
    case InputKind::ButtonDown:
      if (ev.hand_x) {
        op.hand_x = *ev.hand_x;
      }
      if (!op.button_down) {
        op.reference_x = op.hand_x;
      }
      op.button_down = true;
      break;
    case InputKind::ButtonUp:
      op.button_down = false;
      op.reference_x.reset();
      break;
  }
}

}  // namespace

OperatorState update_operator_state(OperatorState op, std::span<const InputEvent> events, double now,
                                    const ParameterSet &params)
{
  const std::int64_t now_tick = std::llround(now / params.dt_c);
  const std::int64_t delay_ticks =
    static_cast<std::int64_t>(std::ceil(params.delta / params.dt_c - 1e-9));

  std::size_t i = 0;
  while (i < events.size() && events[i].tick <= now_tick) {
    const std::int64_t tick = events[i].tick;
    const bool was_live = op.live;
    const double v_at_release = op.u_h.v;
    for (; i < events.size() && events[i].tick == tick; ++i) {
      apply(op, events[i]);
    }
    op.live = is_live(op);
    if (op.live) {
      op.pseudo_until_tick.reset();
      op.u_h = live_command(op, params);
    } else if (was_live && op.mode != ControlMode::Switching) {
      op.pseudo_until_tick = tick + delay_ticks;
      op.pseudo_v = v_at_release;
    }
  }

  op.live = is_live(op);
  if (op.live) {
    op.gamma = true;
    op.u_h = live_command(op, params);
  } else if (op.pseudo_until_tick && now_tick <= *op.pseudo_until_tick &&
             op.mode != ControlMode::Switching)
  {
    op.gamma = true;
    op.u_h = {op.pseudo_v, 0.0};
  } else {
    op.gamma = false;
    op.u_h = {0.0, 0.0};
    op.pseudo_until_tick.reset();
  }
  return op;
}

}  // namespace hidwa
