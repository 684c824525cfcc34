#include "hidwa/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hidwa
{
namespace
{

// Dynamic obstacles stop advancing when their next position would bring
// them closer than this (beyond touching distance) to the robot.
constexpr double kYieldMargin = 0.5;

}  // namespace

std::string_view to_string(RunStatus status)
{
  switch (status) {
    case RunStatus::Running: return "running";
    case RunStatus::GoalReached: return "goal_reached";
    case RunStatus::Aborted: return "aborted";
  }
  return "running";
}

SimContext::SimContext(Scenario scenario)
: scenario_(std::move(scenario)),
  static_costmap_(inflate(scenario_.grid, scenario_.footprint(), scenario_.params.decay_radius)),
  kernel_(scenario_.grid.geometry().resolution(), scenario_.params.footprint_radius,
          scenario_.params.decay_radius)
{
}

ClearancePenalty SimContext::clearance_penalty() const
{
  const ParameterSet &p = params();
  if (p.planner_clearance <= 0.0) {
    return {};
  }
  const std::uint8_t padded =
    inflation_cost(p.footprint_radius + p.planner_clearance, p.footprint_radius, p.decay_radius);
  return {std::max<std::uint8_t>(padded, 1), kClearanceFactor};
}

bool SimContext::in_contact(const Pose &pose, std::span<const DynamicObstacleState> obstacles) const
{
  const Footprint fp = footprint();
  if (footprint_collides(pose, fp, static_costmap_)) {
    return true;
  }
  const GridGeometry &g = static_costmap_.geometry();
  const CellIndex robot = g.world_to_cell_unchecked(pose.position());
  for (const auto &obs : obstacles) {
    if (distance(obs.position, pose.position()) > fp.radius + obs.radius + 2.0 * g.resolution()) {
      continue;
    }
    for (const CellIndex c : rasterize_disc(g, obs.position, obs.radius)) {
      if (cell_square_distance(c.col - robot.col, c.row - robot.row, g.resolution()) <= fp.radius) {
        return true;
      }
    }
  }
  return false;
}

WorldState initial_world(const SimContext &ctx, ControlMode mode)
{
  WorldState world;
  world.robot = ctx.scenario().start;
  world.operator_state.mode = mode;
  world.scheduler.interval = ctx.params().replan_interval;
  for (const auto &spec : ctx.scenario().dynamic_obstacles) {
    world.obstacles.push_back({spec.position_at(0.0), spec.radius, 0.0});
  }
  world.costmap = ctx.static_costmap();
  return world;
}

WorldState step(WorldState next, const SimContext &ctx, ControlInput command, double dt)
{
  const ParameterSet &p = ctx.params();
  next.u_actual = plant_response(next.u_actual, command, p, dt);

  const Pose moved = integrate(next.robot, next.u_actual, dt);
  if (ctx.in_contact(moved, next.obstacles)) {
    if (!next.in_contact) {
      ++next.collisions;
    }
    next.in_contact = true;
  } else {
    next.in_contact = false;
    next.robot = moved;
    next.distance_travelled += std::abs(next.u_actual.v) * dt;
  }

  const double clearance_base = p.footprint_radius + kYieldMargin;
  for (std::size_t i = 0; i < next.obstacles.size(); ++i) {
    DynamicObstacleState &obs = next.obstacles[i];
    const auto &spec = ctx.scenario().dynamic_obstacles[i];
    const double next_time = obs.schedule_time + dt;
    const Point2 next_pos = spec.position_at(next_time);
    const double d_new = distance(next_pos, next.robot.position());
    const double d_old = distance(obs.position, next.robot.position());
    if (d_new < clearance_base + obs.radius && d_new < d_old) {
      continue;
    }
    obs.position = next_pos;
    obs.schedule_time = next_time;
  }

  ++next.tick;
  next.t = static_cast<double>(next.tick) * p.dt_c;
  return next;
}

Costmap sense(const WorldState &world, const SimContext &ctx)
{
  Costmap costmap = ctx.static_costmap();
  const GridGeometry &g = costmap.geometry();
  for (const auto &obs : world.obstacles) {
    if (distance(obs.position, world.robot.position()) > ctx.params().sensor_radius + obs.radius) {
      continue;
    }
    const auto cells = rasterize_disc(g, obs.position, obs.radius);
    add_lethal_cells(costmap, cells, ctx.kernel());
  }
  return costmap;
}

RunStatus check_goal(const WorldState &world, const Pose &goal, const ParameterSet &params)
{
  const bool at_position = distance(world.robot.position(), goal.position()) <= params.goal_xy_tolerance;
  const bool aligned = std::abs(angle_diff(world.robot.theta, goal.theta)) <= params.goal_yaw_tolerance;
  return at_position && aligned ? RunStatus::GoalReached : RunStatus::Running;
}

std::vector<std::string> regions_at(const Pose &pose, const Footprint &footprint,
                                    std::span<const RegionToAvoid> regions)
{
  std::vector<std::string> ids;
  for (const auto &r : regions) {
    if (region_intersects(r, pose, footprint)) {
      ids.push_back(r.id);
    }
  }
  return ids;
}

int region_accounting(std::span<const TraceRow> trace, std::span<const RegionToAvoid> regions)
{
  std::set<std::string> touched;
  for (const auto &row : trace) {
    touched.insert(row.in_region_ids.begin(), row.in_region_ids.end());
  }
  int count = 0;
  for (const auto &r : regions) {
    count += touched.count(r.id) ? 1 : 0;
  }
  return count;
}

Simulation::Simulation(Scenario scenario, ControlMode mode)
: ctx_(std::move(scenario)), world_(initial_world(ctx_, mode))
{
}

void Simulation::set_mode(ControlMode mode)
{
  world_.operator_state.mode = mode;
  world_.operator_state.pseudo_until_tick.reset();
}

void Simulation::tick(std::span<const InputEvent> events)
{
  if (finished()) {
    return;
  }
  const ParameterSet &p = ctx_.params();
  const Scenario &sc = ctx_.scenario();
  world_.t = static_cast<double>(world_.tick) * p.dt_c;

  world_.operator_state = update_operator_state(world_.operator_state, events, world_.t, p);
  if (world_.operator_state.live) {
    ++world_.live_input_ticks;
  }

  world_.costmap = sense(world_, ctx_);
  if (world_.tick == 0 || replan_due(world_.t, world_.scheduler)) {
    const Point2 from = world_.robot.position();
    const Point2 to = sc.goal.position();
    const ClearancePenalty clearance = ctx_.clearance_penalty();
    if (world_.goal_field.empty() || !(world_.goal_field_source == world_.costmap)) {
      world_.goal_field = goal_field(world_.costmap, to, clearance);
      world_.goal_field_source = world_.costmap;
    }
    try {
      world_.path = plan(world_.costmap, from, to, world_.t, clearance);
      ++world_.path_version;
    } catch (const NoPathError &) {
      // Keep tracking the previous path until the next scheduled attempt.
    }
    world_.scheduler.last_plan_time = world_.t;
  }

  auto record = [&] {
    const OperatorState &op = world_.operator_state;
    TraceRow row;
    row.t = world_.t;
    row.x = world_.robot.x;
    row.y = world_.robot.y;
    row.theta = world_.robot.theta;
    row.v = world_.u_actual.v;
    row.omega = world_.u_actual.omega;
    row.gamma = op.gamma ? 1 : 0;
    row.mode = op.mode;
    row.v_h = op.u_h.v;
    row.omega_h = op.u_h.omega;
    row.recovery = world_.recovery;
    row.in_region_ids = regions_at(world_.robot, ctx_.footprint(), sc.regions);
    for (const auto &id : row.in_region_ids) {
      if (std::find(world_.regions_touched.begin(), world_.regions_touched.end(), id) ==
          world_.regions_touched.end())
      {
        world_.regions_touched.push_back(id);
      }
    }
    trace_.push_back(std::move(row));
  };

  if (check_goal(world_, sc.goal, p) == RunStatus::GoalReached) {
    world_.status = RunStatus::GoalReached;
    world_.completion_time = world_.t;
    world_.command = {};
    world_.recovery = false;
    record();
    return;
  }
  if (world_.t >= p.max_time - 1e-9) {
    world_.status = RunStatus::Aborted;
    world_.command = {};
    world_.recovery = false;
    record();
    return;
  }

  auto candidates = generate_candidates(world_.robot, world_.u_actual, world_.costmap, ctx_.footprint(),
                                        world_.oscillation, world_.path, sc.goal, p,
                                        &world_.goal_field);
  Selection selection;
  if (world_.operator_state.mode == ControlMode::Switching) {
    selection = select_switching(candidates, world_.operator_state);
  } else {
    selection = select_hidwa(candidates, world_.operator_state, SharedWeights::from(p));
  }
  world_.command = selection.u;
  world_.recovery = selection.recovery;
  if (observer_) {
    observer_(world_, candidates, selection);
  }
  record();

  const double before = world_.distance_travelled;
  const double heading = world_.robot.theta;
  world_ = step(std::move(world_), ctx_, selection.u, p.dt_c);
  world_.oscillation.update(selection.u.omega, world_.distance_travelled - before,
                            angle_diff(world_.robot.theta, heading));
}

Metrics Simulation::metrics() const
{
  Metrics m;
  m.status = world_.status;
  m.completion_time = world_.completion_time;
  m.regions_not_avoided = region_accounting(trace_, ctx_.scenario().regions);
  m.collisions = world_.collisions;
  m.path_length = world_.distance_travelled;
  m.input_active_time = static_cast<double>(world_.live_input_ticks) * ctx_.params().dt_c;
  m.sim_time = world_.t;
  return m;
}

RunResult run_scripted(const Scenario &scenario, std::span<const InputEvent> script, ControlMode mode,
                       std::optional<double> max_time, CandidateObserver observer)
{
  Scenario sc = scenario;
  if (max_time) {
    sc.params.max_time = *max_time;
  }
  Simulation sim(std::move(sc), mode);
  sim.set_candidate_observer(std::move(observer));
  std::size_t next = 0;
  while (!sim.finished()) {
    const std::int64_t tick = sim.world().tick;
    const std::size_t first = next;
    while (next < script.size() && script[next].tick <= tick) {
      ++next;
    }
    sim.tick(script.subspan(first, next - first));
  }
  return {sim.trace(), sim.metrics()};
}

}  // namespace hidwa
