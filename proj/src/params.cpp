#include "hidwa/params.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

namespace hidwa
{
namespace
{

using Field = std::variant<double ParameterSet::*, int ParameterSet::*>;

struct Descriptor
{
  std::string_view key;
  Field field;
  bool zero_allowed;
};

// Sorted by key.
constexpr Descriptor kDescriptors[] = {
  {"a_omega", &ParameterSet::a_omega, false},
  {"a_v", &ParameterSet::a_v, false},
  {"decay_radius", &ParameterSet::decay_radius, false},
  {"delta", &ParameterSet::delta, false},
  {"dt_c", &ParameterSet::dt_c, false},
  {"footprint_radius", &ParameterSet::footprint_radius, false},
  {"forward_point_distance", &ParameterSet::forward_point_distance, false},
  {"gesture_span", &ParameterSet::gesture_span, false},
  {"goal_xy_tolerance", &ParameterSet::goal_xy_tolerance, false},
  {"goal_yaw_tolerance", &ParameterSet::goal_yaw_tolerance, false},
  {"max_time", &ParameterSet::max_time, false},
  {"omega_max", &ParameterSet::omega_max, false},
  {"omega_samples", &ParameterSet::omega_samples, false},
  {"oscillation_reset_angle", &ParameterSet::oscillation_reset_angle, false},
  {"oscillation_reset_distance", &ParameterSet::oscillation_reset_distance, false},
  {"planner_clearance", &ParameterSet::planner_clearance, true},
  {"replan_interval", &ParameterSet::replan_interval, false},
  {"rollout_horizon", &ParameterSet::rollout_horizon, false},
  {"rollout_step", &ParameterSet::rollout_step, false},
  {"s_bo", &ParameterSet::s_bo, true},
  {"s_ga", &ParameterSet::s_ga, true},
  {"s_gd", &ParameterSet::s_gd, true},
  {"s_omega", &ParameterSet::s_omega, true},
  {"s_pa", &ParameterSet::s_pa, true},
  {"s_pd", &ParameterSet::s_pd, true},
  {"s_rg", &ParameterSet::s_rg, true},
  {"s_v", &ParameterSet::s_v, true},
  {"sensor_radius", &ParameterSet::sensor_radius, false},
  {"v_max", &ParameterSet::v_max, false},
  {"v_samples", &ParameterSet::v_samples, false},
  {"window_horizon", &ParameterSet::window_horizon, false},
};

const Descriptor &find(std::string_view key)
{
  const auto *it = std::find_if(
    std::begin(kDescriptors), std::end(kDescriptors),
    [key](const Descriptor &d) { return d.key == key; });
  if (it == std::end(kDescriptors)) {
    throw ParameterError("unknown parameter '" + std::string(key) + "'");
  }
  return *it;
}

double read(const ParameterSet &params, const Descriptor &d)
{
  return std::visit(
    [&params](auto member) { return static_cast<double>(params.*member); }, d.field);
}

}  // namespace

void set_parameter(ParameterSet &params, std::string_view key, double value)
{
  const Descriptor &d = find(key);
  if (!std::isfinite(value)) {
    throw ParameterError("parameter '" + std::string(key) + "' must be finite");
  }
  if (auto *member = std::get_if<int ParameterSet::*>(&d.field)) {
    if (value != std::floor(value)) {
      throw ParameterError("parameter '" + std::string(key) + "' must be an integer");
    }
    params.**member = static_cast<int>(value);
  } else {
    params.*std::get<double ParameterSet::*>(d.field) = value;
  }
}

double get_parameter(const ParameterSet &params, std::string_view key)
{
  return read(params, find(key));
}

const std::vector<std::string> &parameter_keys()
{
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto &d : kDescriptors) {
      out.emplace_back(d.key);
    }
    return out;
  }();
  return keys;
}

int rollout_steps(const ParameterSet &params)
{
  return static_cast<int>(std::lround(params.rollout_horizon / params.rollout_step));
}

void validate(const ParameterSet &params)
{
  for (const auto &d : kDescriptors) {
    const double value = read(params, d);
    if (d.zero_allowed ? value < 0.0 : value <= 0.0) {
      throw ParameterError(
        "parameter '" + std::string(d.key) + "' must be " +
        (d.zero_allowed ? "non-negative" : "positive"));
    }
  }
  const double ratio = params.rollout_horizon / params.rollout_step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw ParameterError("rollout_step must divide rollout_horizon");
  }
  if (params.decay_radius < params.footprint_radius) {
    throw ParameterError("decay_radius must be >= footprint_radius");
  }
  if (params.footprint_radius + params.planner_clearance > params.decay_radius) {
    throw ParameterError("planner_clearance must end inside decay_radius");
  }
}

}  // namespace hidwa
