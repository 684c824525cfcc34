#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hidwa/dwa.hpp"
#include "hidwa/global_planner.hpp"
#include "hidwa/scenario.hpp"
#include "hidwa/shared_control.hpp"
#include "hidwa/world_model.hpp"

namespace hidwa
{

enum class RunStatus
{
  Running,
  GoalReached,
  Aborted,  // max_time exceeded
};

std::string_view to_string(RunStatus status);

struct DynamicObstacleState
{
  Point2 position;
  double radius{0.0};
  // Schedule clock; it pauses while the obstacle yields to the robot.
  double schedule_time{0.0};
};

struct WorldState
{
  std::int64_t tick{0};
  double t{0.0};
  Pose robot;
  ControlInput u_actual;
  std::vector<DynamicObstacleState> obstacles;
  Costmap costmap;
  GlobalPath path;
  std::uint64_t path_version{0};
  // Refreshed together with the path when the sensed costmap has changed.
  GoalField goal_field;
  Costmap goal_field_source;
  OperatorState operator_state;
  OscillationState oscillation;
  ReplanScheduler scheduler;
  RunStatus status{RunStatus::Running};
  ControlInput command;
  bool recovery{false};
  bool in_contact{false};
  int collisions{0};
  double distance_travelled{0.0};
  std::int64_t live_input_ticks{0};
  std::vector<std::string> regions_touched;
  std::optional<double> completion_time;
};

struct TraceRow
{
  double t{0.0};
  double x{0.0};
  double y{0.0};
  double theta{0.0};
  double v{0.0};
  double omega{0.0};
  int gamma{0};
  ControlMode mode{ControlMode::SharedJoystick};
  double v_h{0.0};
  double omega_h{0.0};
  bool recovery{false};
  std::vector<std::string> in_region_ids;
};

struct Metrics
{
  RunStatus status{RunStatus::Running};
  std::optional<double> completion_time;
  int regions_not_avoided{0};
  int collisions{0};
  double path_length{0.0};
  double input_active_time{0.0};
  double sim_time{0.0};

  friend bool operator==(const Metrics &, const Metrics &) = default;
};

// Immutable per-scenario data shared by every tick.
// Path length inside the planner's clearance margin counts this many times.
inline constexpr double kClearanceFactor = 4.0;

class SimContext
{
public:
  explicit SimContext(Scenario scenario);

  const Scenario &scenario() const { return scenario_; }
  const ParameterSet &params() const { return scenario_.params; }
  Footprint footprint() const { return scenario_.footprint(); }
  const Costmap &static_costmap() const { return static_costmap_; }
  const InflationKernel &kernel() const { return kernel_; }
  // Soft margin of planner_clearance beyond the inscribed radius, used by the
  // planner and the goal field.
  ClearancePenalty clearance_penalty() const;

  // Ground-truth contact test against the static map and every dynamic
  // obstacle, on the same raster the robot senses.
  bool in_contact(const Pose &pose, std::span<const DynamicObstacleState> obstacles) const;

private:
  Scenario scenario_;
  Costmap static_costmap_;
  InflationKernel kernel_;
};

WorldState initial_world(const SimContext &ctx, ControlMode mode);

// Advances the plant by dt: slews u_actual toward the command under the
// acceleration limits, moves along the exact arc, holds the pose on contact
// (one collision per contact episode) and advances the dynamic obstacles.
WorldState step(WorldState world, const SimContext &ctx, ControlInput command, double dt);

// Static map plus the dynamic obstacles within sensor range, inflated.
// Regions to avoid are never part of it.
Costmap sense(const WorldState &world, const SimContext &ctx);

RunStatus check_goal(const WorldState &world, const Pose &goal, const ParameterSet &params);

// Number of distinct region ids that appear in any trace row.
int region_accounting(std::span<const TraceRow> trace, std::span<const RegionToAvoid> regions);

std::vector<std::string> regions_at(const Pose &pose, const Footprint &footprint,
                                    std::span<const RegionToAvoid> regions);

using CandidateObserver =
  std::function<void(const WorldState &, std::span<const Candidate>, const Selection &)>;

// Closed-loop simulation: one call to tick() is one control period.
class Simulation
{
public:
  Simulation(Scenario scenario, ControlMode mode);

  // Runs tick k with the input events due at k: operator update, goal and
  // time checks, sensing, replanning when due, selection, trace row, plant
  // step. No-op once finished.
  void tick(std::span<const InputEvent> events);

  bool finished() const { return world_.status != RunStatus::Running; }
  const WorldState &world() const { return world_; }
  const SimContext &context() const { return ctx_; }
  const Scenario &scenario() const { return ctx_.scenario(); }
  const std::vector<TraceRow> &trace() const { return trace_; }
  Metrics metrics() const;

  void set_mode(ControlMode mode);
  void set_candidate_observer(CandidateObserver observer) { observer_ = std::move(observer); }

private:
  SimContext ctx_;
  WorldState world_;
  std::vector<TraceRow> trace_;
  CandidateObserver observer_;
};

struct RunResult
{
  std::vector<TraceRow> trace;
  Metrics metrics;
};

// Runs until goal_reached or max_time (default: params.max_time).
RunResult run_scripted(const Scenario &scenario, std::span<const InputEvent> script, ControlMode mode,
                       std::optional<double> max_time = std::nullopt,
                       CandidateObserver observer = {});

}  // namespace hidwa
