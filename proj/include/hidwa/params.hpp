#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hidwa
{

// Operator input deadzone on normalized stick / gesture coordinates.
inline constexpr double kInputDeadzone = 0.1;

class ParameterError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Every tunable of the stack. Defaults are the shipped configuration; all of
// them can be overridden from a scenario's `params` block or `--param k=v`.
struct ParameterSet
{
  // kinematic limits
  double v_max{1.0};            // m/s
  double omega_max{1.0};        // rad/s
  double a_v{2.0};              // m/s^2
  double a_omega{3.0};          // rad/s^2

  // control loop
  double dt_c{0.05};            // s, single clock for control, sensing and physics
  double window_horizon{0.25};  // s
  int v_samples{11};
  int omega_samples{21};
  double rollout_horizon{1.5};  // s
  double rollout_step{0.1};     // s
  double replan_interval{1.0};  // s
  // Extra distance the planner keeps from inscribed cells when a path exists.
  double planner_clearance{0.2};  // m

  // navigation critic weights
  double s_pa{32.0};
  double s_pd{32.0};
  double s_bo{0.02};
  double s_ga{24.0};
  double s_gd{24.0};
  double s_rg{32.0};
  double forward_point_distance{0.325};      // m
  double oscillation_reset_distance{0.05};   // m
  double oscillation_reset_angle{0.2};       // rad

  // operator deviation weights and release delay
  double s_v{400.0};
  double s_omega{800.0};
  double delta{2.0};            // s

  double goal_xy_tolerance{0.25};   // m
  double goal_yaw_tolerance{0.35};  // rad
  double gesture_span{0.20};        // m
  double sensor_radius{5.0};        // m
  double footprint_radius{0.3};     // m
  double decay_radius{0.55};        // m
  double max_time{600.0};           // s
};

// Sets one field by name. Throws ParameterError for an unknown key or a value
// that is not representable (e.g. a fractional sample count).
void set_parameter(ParameterSet &params, std::string_view key, double value);

// Reads one field by name. Throws ParameterError for an unknown key.
double get_parameter(const ParameterSet &params, std::string_view key);

// All keys in a fixed, sorted order.
const std::vector<std::string> &parameter_keys();

// Checks the cross-field invariants. Throws ParameterError on violation.
void validate(const ParameterSet &params);

// Number of rollout steps (rollout_horizon / rollout_step, exact).
int rollout_steps(const ParameterSet &params);

}  // namespace hidwa
