#include "hidwa/dwa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hidwa
{

CriticWeights CriticWeights::from(const ParameterSet &params)
{
  return {params.s_pa, params.s_pd, params.s_bo, params.s_ga, params.s_gd, params.s_rg};
}

CriticWeights CriticWeights::scaled(double factor) const
{
  return {s_pa * factor, s_pd * factor, s_bo * factor, s_ga * factor, s_gd * factor, s_rg * factor};
}

bool OscillationState::forbids(double omega, const ParameterSet &params) const
{
  const int s = sign_of(omega, kStraightOmega);
  return s != 0 && last_omega_sign != 0 && s != last_omega_sign &&
         distance_since_flip < params.oscillation_reset_distance &&
         rotation_since_flip < params.oscillation_reset_angle;
}

void OscillationState::update(double commanded_omega, double travelled, double rotated)
{
  const int s = sign_of(commanded_omega, kStraightOmega);
  if (s != 0 && s != last_omega_sign) {
    last_omega_sign = s;
    distance_since_flip = 0.0;
    rotation_since_flip = 0.0;
  }
  distance_since_flip += std::abs(travelled);
  rotation_since_flip += std::abs(rotated);
}

DynamicWindow dynamic_window(ControlInput current, const ParameterSet &params)
{
  const double h = params.window_horizon;
  DynamicWindow w;
  w.v_lo = std::max(0.0, current.v - params.a_v * h);
  w.v_hi = std::min(params.v_max, current.v + params.a_v * h);
  w.omega_lo = std::max(-params.omega_max, current.omega - params.a_omega * h);
  w.omega_hi = std::min(params.omega_max, current.omega + params.a_omega * h);
  // A plant reversing faster than the window can recover still gets the
  // nearest admissible (stop) value.
  if (w.v_hi < w.v_lo) {
    w.v_hi = w.v_lo;
  }
  if (w.omega_hi < w.omega_lo) {
    w.omega_lo = w.omega_hi = std::clamp(current.omega, -params.omega_max, params.omega_max);
  }
  return w;
}

namespace
{

std::vector<double> axis_samples(double lo, double hi, int count)
{
  if (hi <= lo || count < 2) {
    return {lo};
  }
  std::vector<double> values(static_cast<std::size_t>(count));
  const double step = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) {
    values[i] = lo + i * step;
  }
  values.back() = hi;
  return values;
}

}  // namespace

std::vector<Candidate> sample_controls(const DynamicWindow &window, const ParameterSet &params)
{
  const auto vs = axis_samples(window.v_lo, window.v_hi, params.v_samples);
  const auto ws = axis_samples(window.omega_lo, window.omega_hi, params.omega_samples);
  std::vector<Candidate> out;
  out.reserve(vs.size() * ws.size());
  for (double v : vs) {
    for (double w : ws) {
      Candidate c;
      c.u = {v, w};
      out.push_back(std::move(c));
    }
  }
  return out;
}

namespace
{

// sin(x) / x, stable near zero.
double sinc(double x)
{
  return std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
}

}  // namespace

// Arcs are integrated in chord form (length v*s*sinc(w*s/2) along the mean
// heading), which does not cancel when omega is tiny and v/omega is huge.
Pose integrate(const Pose &start, ControlInput u, double duration)
{
  if (std::abs(u.omega) < kStraightOmega) {
    return {start.x + u.v * duration * std::cos(start.theta),
            start.y + u.v * duration * std::sin(start.theta),
            start.theta};
  }
  const double half = 0.5 * u.omega * duration;
  const double chord = u.v * duration * sinc(half);
  const double mid = start.theta + half;
  return {start.x + chord * std::cos(mid), start.y + chord * std::sin(mid),
          normalize_angle(start.theta + u.omega * duration)};
}

std::vector<Pose> rollout(const Pose &start, ControlInput u, const ParameterSet &params)
{
  const int steps = rollout_steps(params);
  const double dt = params.rollout_step;
  std::vector<Pose> poses;
  poses.reserve(static_cast<std::size_t>(steps) + 1);
  poses.push_back(start);
  if (std::abs(u.omega) < kStraightOmega) {
    for (int i = 1; i <= steps; ++i) {
      poses.push_back(integrate(start, u, i * dt));
    }
    return poses;
  }
  // Chord i runs along start.theta + (i - 1/2) * w * dt; its direction is
  // advanced by a fixed rotation instead of fresh sin/cos calls.
  const double half = 0.5 * u.omega * dt;
  const double chord = u.v * dt * sinc(half);
  const double ds = std::sin(2.0 * half);
  const double dc = std::cos(2.0 * half);
  double c = std::cos(start.theta + half);
  double s = std::sin(start.theta + half);
  double x = start.x;
  double y = start.y;
  for (int i = 1; i <= steps; ++i) {
    x += chord * c;
    y += chord * s;
    const double next_s = s * dc + c * ds;
    c = c * dc - s * ds;
    s = next_s;
    poses.push_back({x, y, normalize_angle(start.theta + u.omega * (i * dt))});
  }
  return poses;
}

ControlInput plant_response(ControlInput current, ControlInput command, const ParameterSet &params,
                            double dt)
{
  auto slew = [](double from, double to, double max_delta) {
    return from + std::clamp(to - from, -max_delta, max_delta);
  };
  return {slew(current.v, command.v, params.a_v * dt),
          slew(current.omega, command.omega, params.a_omega * dt)};
}

std::vector<Pose> stopping_path(const Pose &start, ControlInput current, ControlInput command,
                                const ParameterSet &params)
{
  const double dt = params.dt_c;
  std::vector<Pose> poses;
  ControlInput u = plant_response(current, command, params, dt);
  Pose pose = integrate(start, u, dt);
  poses.push_back(pose);
  // slew lands exactly on zero once within one step of it
  while (u.v != 0.0 || u.omega != 0.0) {
    u = plant_response(u, {0.0, 0.0}, params, dt);
    pose = integrate(pose, u, dt);
    poses.push_back(pose);
  }
  return poses;
}

void filter_free(std::span<Candidate> candidates, const Pose &pose, ControlInput current,
                 const Costmap &costmap, const Footprint &footprint,
                 const OscillationState &oscillation, const ParameterSet &params)
{
  auto collides = [&](const Pose &p) { return footprint_collides(p, footprint, costmap); };
  for (Candidate &c : candidates) {
    bool hits = std::any_of(c.trajectory.begin(), c.trajectory.end(), collides);
    if (!hits) {
      const auto stop = stopping_path(pose, current, c.u, params);
      hits = std::any_of(stop.begin(), stop.end(), collides);
    }
    if (hits) {
      c.feasible = false;
      c.rejection = Rejection::Collision;
    } else if (oscillation.forbids(c.u.omega, params)) {
      c.feasible = false;
      c.rejection = Rejection::Oscillation;
    }
  }
}

CriticResult evaluate_critics(const Candidate &candidate, const GlobalPath &path, const Pose &goal,
                              const Costmap &costmap, const CriticWeights &weights,
                              const ParameterSet &params, const GoalField *field)
{
  CriticResult result;
  const Pose &begin = candidate.trajectory.front();
  const Pose &end = candidate.trajectory.back();
  const Point2 end_pos = end.position();
  const Point2 goal_pos = goal.position();
  // The probe never reaches past the goal; otherwise it would pull the robot
  // to a stop short of it.
  const double probe = std::min(params.forward_point_distance, distance(end_pos, goal_pos));
  const Point2 forward{end.x + probe * std::cos(end.theta), end.y + probe * std::sin(end.theta)};

  auto path_distance = [&](Point2 p) {
    return path.empty() ? distance(p, goal_pos) : distance_to_path(path, p);
  };

  auto &v = result.values;
  v[static_cast<std::size_t>(Critic::PathDist)] = path_distance(end_pos);
  v[static_cast<std::size_t>(Critic::PathAlign)] = path_distance(forward);
  auto goal_distance = [&](Point2 p) {
    return field && !field->empty() ? field->at(p) : distance(p, goal_pos);
  };
  v[static_cast<std::size_t>(Critic::GoalDist)] = goal_distance(end_pos);
  v[static_cast<std::size_t>(Critic::GoalAlign)] = goal_distance(forward);

  std::uint8_t worst = 0;
  const GridGeometry &g = costmap.geometry();
  for (const Pose &p : candidate.trajectory) {
    if (const auto cell = g.world_to_cell(p.position())) {
      worst = std::max(worst, costmap.cost(*cell));
    } else {
      worst = cost::kLethal;
    }
  }
  v[static_cast<std::size_t>(Critic::BaseObstacle)] = worst;

  double rotate = 0.0;
  if (distance(begin.position(), goal_pos) <= params.goal_xy_tolerance) {
    rotate = std::abs(angle_diff(end.theta, goal.theta));
    if (candidate.u.v > 0.0) {
      result.reject = true;
    }
  }
  v[static_cast<std::size_t>(Critic::RotateToGoal)] = rotate;

  const CriticVector w = weights.as_vector();
  for (std::size_t i = 0; i < kCriticCount; ++i) {
    result.weighted += w[i] * v[i];
  }
  return result;
}

std::vector<Candidate> generate_candidates(const Pose &pose, ControlInput current,
                                           const Costmap &costmap, const Footprint &footprint,
                                           const OscillationState &oscillation,
                                           const GlobalPath &path, const Pose &goal,
                                           const ParameterSet &params, const GoalField *field)
{
  auto candidates = sample_controls(dynamic_window(current, params), params);
  for (Candidate &c : candidates) {
    c.trajectory = rollout(pose, c.u, params);
  }
  filter_free(candidates, pose, current, costmap, footprint, oscillation, params);
  const CriticWeights weights = CriticWeights::from(params);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (Candidate &c : candidates) {
    if (!c.feasible) {
      c.nav_cost = c.total_cost = kInf;
      continue;
    }
    const CriticResult r = evaluate_critics(c, path, goal, costmap, weights, params, field);
    c.nav_cost_vector = r.values;
    if (r.reject) {
      c.feasible = false;
      c.rejection = Rejection::RotateToGoal;
      c.nav_cost = c.total_cost = kInf;
    } else {
      c.nav_cost = c.total_cost = r.weighted;
    }
  }
  return candidates;
}

}  // namespace hidwa
