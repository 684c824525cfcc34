#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "hidwa/geometry.hpp"
#include "hidwa/global_planner.hpp"
#include "hidwa/params.hpp"
#include "hidwa/world_model.hpp"

namespace hidwa
{

// Velocity box reachable within the window horizon.
struct DynamicWindow
{
  double v_lo{0.0};
  double v_hi{0.0};
  double omega_lo{0.0};
  double omega_hi{0.0};
};

// Navigation critics, in the order they are stored in a CriticVector.
enum class Critic : std::size_t
{
  PathAlign = 0,
  PathDist,
  BaseObstacle,
  GoalAlign,
  GoalDist,
  RotateToGoal,
};

inline constexpr std::size_t kCriticCount = 6;
using CriticVector = std::array<double, kCriticCount>;

struct CriticWeights
{
  double s_pa{32.0};
  double s_pd{32.0};
  double s_bo{0.02};
  double s_ga{24.0};
  double s_gd{24.0};
  double s_rg{32.0};

  static CriticWeights from(const ParameterSet &params);
  CriticVector as_vector() const { return {s_pa, s_pd, s_bo, s_ga, s_gd, s_rg}; }
  CriticWeights scaled(double factor) const;
};

enum class Rejection
{
  None,
  Collision,
  Oscillation,
  RotateToGoal,
};

struct Candidate
{
  ControlInput u;
  std::vector<Pose> trajectory;
  CriticVector nav_cost_vector{};
  double nav_cost{0.0};
  double shared_cost{0.0};
  double total_cost{0.0};
  bool feasible{true};
  Rejection rejection{Rejection::None};
};

// Suppresses turn-direction reversals until the robot has travelled
// `oscillation_reset_distance` or turned `oscillation_reset_angle` since the
// last one.
struct OscillationState
{
  int last_omega_sign{0};
  double distance_since_flip{0.0};
  double rotation_since_flip{0.0};

  bool forbids(double omega, const ParameterSet &params) const;
  // Records the command sent this tick and how far the robot moved and turned.
  void update(double commanded_omega, double travelled, double rotated);
};

// |omega| below this is integrated as a straight line.
inline constexpr double kStraightOmega = 1e-9;

DynamicWindow dynamic_window(ControlInput current, const ParameterSet &params);

// Uniform grid over the window, endpoints included; v-major, omega ascending.
// A degenerate axis yields a single value.
std::vector<Candidate> sample_controls(const DynamicWindow &window, const ParameterSet &params);

// Exact constant-control integration of the unicycle model: one pose per
// rollout_step from t to t + rollout_horizon, start included.
std::vector<Pose> rollout(const Pose &start, ControlInput u, const ParameterSet &params);

// Pose reached after `duration` seconds of constant control.
Pose integrate(const Pose &start, ControlInput u, double duration);

// Velocity the plant reaches after `dt` seconds of slewing toward `command`.
ControlInput plant_response(ControlInput current, ControlInput command, const ParameterSet &params,
                            double dt);

// Poses the plant passes through, one per control period, when `command` is
// applied for one period and the robot is then commanded to rest.
std::vector<Pose> stopping_path(const Pose &start, ControlInput current, ControlInput command,
                                const ParameterSet &params);

// A candidate is free when its rollout and its stopping path avoid every
// inscribed cell; `current` is the plant velocity.
void filter_free(std::span<Candidate> candidates, const Pose &pose, ControlInput current,
                 const Costmap &costmap, const Footprint &footprint,
                 const OscillationState &oscillation, const ParameterSet &params);

struct CriticResult
{
  CriticVector values{};
  double weighted{0.0};
  // Set when a critic rejects the candidate outright (infinite cost).
  bool reject{false};
};

// Goal critics use `field` for the distance to the goal when given, the
// straight-line distance otherwise.
CriticResult evaluate_critics(const Candidate &candidate, const GlobalPath &path, const Pose &goal,
                              const Costmap &costmap, const CriticWeights &weights,
                              const ParameterSet &params, const GoalField *field = nullptr);

// Window, sampling, rollout, collision/oscillation filtering and critic
// scoring for one control tick. Infeasible candidates keep an infinite
// nav_cost; the list keeps the documented sampling order.
std::vector<Candidate> generate_candidates(const Pose &pose, ControlInput current,
                                           const Costmap &costmap, const Footprint &footprint,
                                           const OscillationState &oscillation,
                                           const GlobalPath &path, const Pose &goal,
                                           const ParameterSet &params,
                                           const GoalField *field = nullptr);

}  // namespace hidwa
