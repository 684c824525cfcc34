// Headless acceptance run: one PASS/FAIL line per criterion, exit status 1
// if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hidwa/cli.hpp"
#include "hidwa/live_session.hpp"
#include "hidwa/trace_io.hpp"
#include "support/oracles.hpp"
#include "support/random_scripts.hpp"

using namespace hidwa;
using Clock = std::chrono::steady_clock;

namespace
{

const std::string kDir = HIDWA_SCENARIO_DIR;

const std::vector<std::string> kScenarios{"straight_corridor", "corridor_turn", "slalom",
                                          "office", "crossing", "pothole_detour"};

Scenario bundled(const std::string &name)
{
  return load_scenario_file(kDir + "/" + name + ".json");
}

std::vector<InputEvent> script(const std::string &name, double dt_c)
{
  return load_input_script(kDir + "/scripts/" + name, dt_c);
}

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const std::filesystem::path &p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct Verdict
{
  bool pass{true};
  std::string detail;
};

Verdict argmin_oracle()
{
  std::mt19937_64 rng(500);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const SharedWeights w{400.0, 800.0};
  int mismatches = 0;
  const auto start = Clock::now();
  for (int trial = 0; trial < 500; ++trial) {
    auto cands = testing::random_candidates(rng);
    const auto dwa = testing::brute_argmin(std::span<const Candidate>(cands),
                                           [](const Candidate &c) { return c.nav_cost; });
    if (select_dwa(cands).index != dwa) {
      ++mismatches;
    }
    OperatorState op;
    op.gamma = true;
    op.live = true;
    op.u_h = {0.5 + 0.5 * unit(rng), unit(rng)};
    const auto hidwa = testing::brute_argmin(std::span<const Candidate>(cands), [&](const Candidate &c) {
      return c.nav_cost + 400.0 * std::abs(op.u_h.v - c.u.v) + 800.0 * std::abs(op.u_h.omega - c.u.omega);
    });
    if (select_hidwa(cands, op, w).index != hidwa) {
      ++mismatches;
    }
  }
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d << "mismatches=" << mismatches << " runtime=" << elapsed << "s";
  return {mismatches == 0 && elapsed < 5.0, d.str()};
}

Verdict rollout_exactness()
{
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> pos(-50.0, 50.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  std::uniform_real_distribution<double> tiny_exp(-8.0, -3.0);
  const ParameterSet p;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Pose start{pos(rng), pos(rng), ang(rng)};
    ControlInput u{v(rng), w(rng)};
    if (i % 7 == 0) {
      u.omega = std::copysign(std::pow(10.0, tiny_exp(rng)), u.omega);
    }
    if (i % 50 == 0) {
      u.omega = 0.0;
    }
    const auto poses = rollout(start, u, p);
    for (std::size_t k = 0; k < poses.size(); ++k) {
      const Pose ref = testing::closed_form_pose(start, u, static_cast<double>(k) * p.rollout_step);
      worst = std::max({worst, std::abs(poses[k].x - ref.x), std::abs(poses[k].y - ref.y),
                        std::abs(angle_diff(poses[k].theta, ref.theta))});
    }
  }
  std::ostringstream d;
  d << "max_error=" << worst;
  return {worst <= 1e-9, d.str()};
}

Verdict planner_optimality()
{
  std::mt19937_64 rng(20);
  std::uniform_int_distribution<int> cell(0, 63);
  const Footprint fp{0.02};
  double worst = 0.0;
  int collisions = 0, missing = 0, unsolved_maps = 0;
  for (int map = 0; map < 20; ++map) {
    const OccupancyGrid grid = testing::random_grid(rng, 0.25);
    const Costmap cm = inflate(grid, fp, 0.05);
    bool solved = false;
    for (int attempt = 0; attempt < 50 && !solved; ++attempt) {
      const CellIndex s{cell(rng), cell(rng)};
      const CellIndex g{cell(rng), cell(rng)};
      const auto expected = testing::dijkstra_cost(cm, s, g);
      if (!expected || s == g) {
        try {
          search_grid(cm, s, g);
          if (!expected) {
            ++missing;  // found a path the oracle says does not exist
          }
        } catch (const NoPathError &) {
        }
        continue;
      }
      try {
        const GlobalPath path = plan(cm, cm.geometry().cell_center(s), cm.geometry().cell_center(g));
        worst = std::max(worst, std::abs(path.graph_cost - *expected));
        for (const Point2 &p : path.points) {
          if (footprint_collides({p.x, p.y, 0.0}, fp, cm)) {
            ++collisions;
          }
        }
        solved = true;
      } catch (const NoPathError &) {
        ++missing;
      }
    }
    unsolved_maps += solved ? 0 : 1;
  }
  std::ostringstream d;
  d << "max_cost_error=" << worst << " colliding_points=" << collisions << " disagreements=" << missing
    << " maps_without_query=" << unsolved_maps;
  return {worst <= 1e-9 && collisions == 0 && missing == 0 && unsolved_maps == 0, d.str()};
}

Verdict input_mapping()
{
  int failures = 0;
  auto near = [&](double got, double want) {
    if (!(std::abs(got - want) <= 1e-12)) {
      ++failures;
    }
  };
  ParameterSet p;
  p.v_max = 1.0;
  p.omega_max = 1.0;
  // deadzone boundary, inclusive
  ParameterSet half_meter = p;
  half_meter.gesture_span = 0.5;
  for (double a : {0.1, -0.1, 0.0, 0.05}) {
    const ControlInput u = map_joystick_sw(make_stick(a, a), p);
    near(u.v, 0.0);
    near(u.omega, 0.0);
    near(map_joystick_sj(make_stick(a, 0.7), p).omega, 0.0);
    near(map_gesture({a * 0.5, 0.0, 0.0}, half_meter).omega, 0.0);
  }
  // full deflection
  near(map_joystick_sw(make_stick(0.0, 1.0), p).v, 1.0);
  near(map_joystick_sw(make_stick(0.0, -1.0), p).v, -1.0);
  near(map_joystick_sw(make_stick(1.0, 0.0), p).omega, 1.0);
  near(map_joystick_sw(make_stick(-1.0, 0.0), p).omega, -1.0);
  near(map_joystick_sj(make_stick(1.0, -1.0), p).omega, 1.0);
  near(map_joystick_sj(make_stick(1.0, -1.0), p).v, 1.0);
  near(map_gesture({p.gesture_span, 0.0, 0.0}, p).omega, 1.0);
  near(map_gesture({-3.0 * p.gesture_span, 0.0, 0.0}, p).omega, -1.0);
  near(map_gesture({0.0, 0.0, 0.0}, p).v, 1.0);
  // quadratic midpoints
  near(map_joystick_sw(make_stick(0.5, 0.0), p).omega, 0.25);
  near(map_joystick_sw(make_stick(-0.5, 0.8), p).v, 0.64);
  near(map_joystick_sw(make_stick(-0.5, 0.8), p).omega, -0.25);
  near(map_joystick_sj(make_stick(0.3, 0.0), p).omega, 0.09);
  near(map_gesture({0.5 * p.gesture_span, 0.0, 0.0}, p).omega, 0.25);
  ParameterSet q = p;
  q.v_max = 0.7;
  q.omega_max = 1.3;
  near(map_joystick_sw(make_stick(0.5, -0.5), q).v, -0.25 * 0.7);
  near(map_joystick_sw(make_stick(0.5, -0.5), q).omega, 0.25 * 1.3);
  near(map_joystick_sj(make_stick(0.0, 0.0), q).v, 0.7);
  // odd symmetry
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = unit(rng), b = unit(rng);
    const ControlInput u = map_joystick_sw(make_stick(a, b), p);
    const ControlInput n = map_joystick_sw(make_stick(-a, -b), p);
    near(u.v, -n.v);
    near(u.omega, -n.omega);
    near(map_joystick_sj(make_stick(a, b), p).omega, -map_joystick_sj(make_stick(-a, b), p).omega);
    near(map_gesture({a * p.gesture_span, 0.0, 0.0}, p).omega,
         -map_gesture({-a * p.gesture_span, 0.0, 0.0}, p).omega);
  }
  return {failures == 0, "failures=" + std::to_string(failures)};
}

Verdict release_delay()
{
  const Scenario sc = bundled("slalom");
  const ParameterSet &p = sc.params;
  const RunResult r = run_scripted(sc, script("release_at_10.jsonl", p.dt_c), ControlMode::SharedJoystick);
  const std::int64_t release = quantize_tick(10.0, p.dt_c);
  const std::int64_t span = static_cast<std::int64_t>(std::ceil(p.delta / p.dt_c - 1e-9));
  int pseudo = 0, bad = 0;
  bool ended = false;
  for (const auto &row : r.trace) {
    const auto k = std::llround(row.t / p.dt_c);
    if (k <= release) {
      continue;
    }
    if (k <= release + span) {
      if (row.gamma == 1 && row.v_h == p.v_max && row.omega_h == 0.0) {
        ++pseudo;
      } else {
        ++bad;
      }
    } else if (row.gamma != 0) {
      ++bad;
    } else {
      ended = true;
    }
  }
  std::ostringstream d;
  d << "pseudo_ticks=" << pseudo << " expected=" << span << " violations=" << bad
    << " status=" << to_string(r.metrics.status);
  return {pseudo == 40 && span == 40 && bad == 0 && ended, d.str()};
}

Verdict safety()
{
  const double max_time = 40.0;
  int runs = 0, unsafe = 0;
  std::string first_unsafe;
  for (std::size_t m = 0; m < kScenarios.size(); ++m) {
    const std::string &name = kScenarios[m];
    const Scenario sc = bundled(name);
    for (ControlMode mode : {ControlMode::SharedJoystick, ControlMode::SharedGesture}) {
      for (int i = 0; i < 100; ++i) {
        const std::uint64_t seed = m * 100000 + static_cast<std::uint64_t>(mode) * 1000 + i;
        const auto events = testing::random_script(mode, seed, max_time, sc.params.dt_c);
        const RunResult r = run_scripted(sc, events, mode, max_time);
        ++runs;
        if (r.metrics.collisions != 0) {
          if (unsafe++ == 0) {
            first_unsafe = name + "/" + std::string(to_string(mode)) + "/" + std::to_string(i);
          }
        }
      }
    }
  }
  const Scenario corridor = bundled("straight_corridor");
  const RunResult wall = run_scripted(corridor, script("wall_run_sw.jsonl", corridor.params.dt_c),
                                      ControlMode::Switching, 20.0);
  std::ostringstream d;
  d << "maps=" << kScenarios.size() << " shared_runs=" << runs << " runs_with_collisions=" << unsafe;
  if (unsafe) {
    d << " first=" << first_unsafe;
  }
  d << " sw_wall_run_collisions=" << wall.metrics.collisions;
  return {kScenarios.size() >= 5 && unsafe == 0 && wall.metrics.collisions >= 1, d.str()};
}

Verdict detour()
{
  const Scenario sc = bundled("pothole_detour");
  const double dt = sc.params.dt_c;
  double slowest = 0.0;
  auto timed = [&](const std::vector<InputEvent> &events, ControlMode mode) {
    const auto start = Clock::now();
    RunResult r = run_scripted(sc, events, mode);
    slowest = std::max(slowest, seconds_since(start));
    return r;
  };
  const RunResult empty = timed(script("empty.jsonl", dt), ControlMode::SharedJoystick);
  const RunResult sj = timed(script("pothole_sj.jsonl", dt), ControlMode::SharedJoystick);
  const RunResult sw = timed(script("pothole_sw.jsonl", dt), ControlMode::Switching);
  const bool sj_goal = sj.metrics.status == RunStatus::GoalReached;
  const bool sw_goal = sw.metrics.status == RunStatus::GoalReached;
  std::ostringstream d;
  d << "empty_regions=" << empty.metrics.regions_not_avoided << " sj_regions=" << sj.metrics.regions_not_avoided
    << " sj_time=" << (sj_goal ? format_number(*sj.metrics.completion_time) : "none")
    << " sw_regions=" << sw.metrics.regions_not_avoided
    << " sw_time=" << (sw_goal ? format_number(*sw.metrics.completion_time) : "none")
    << " slowest_run=" << slowest << "s";
  const bool pass = empty.metrics.regions_not_avoided == 1 && sj.metrics.regions_not_avoided == 0 && sj_goal &&
                    sw.metrics.regions_not_avoided == 0 && sw_goal &&
                    *sw.metrics.completion_time > *sj.metrics.completion_time && slowest < 30.0;
  return {pass, d.str()};
}

// Runs the CLI twice per case and compares the written files byte for byte.
Verdict determinism()
{
  const auto dir = std::filesystem::temp_directory_path() / "hidwa_acceptance";
  std::filesystem::create_directories(dir);
  // random operator for the scenario with moving obstacles
  {
    const auto events = testing::random_script(ControlMode::SharedGesture, 77, 40.0, 0.05);
    std::ofstream out(dir / "random_sg.jsonl");
    for (const auto &e : events) {
      out << to_json_line(e) << '\n';
    }
  }
  struct Case
  {
    std::string scenario, mode, inputs;
  };
  const std::vector<Case> cases{
    {"pothole_detour", "sj", kDir + "/scripts/pothole_sj.jsonl"},
    {"pothole_detour", "sw", kDir + "/scripts/pothole_sw.jsonl"},
    {"crossing", "sg", (dir / "random_sg.jsonl").string()},
    {"office", "sj", kDir + "/scripts/empty.jsonl"},
  };
  int differing = 0;
  for (const auto &c : cases) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const auto trace = dir / ("trace" + std::to_string(run) + ".csv");
      const auto metrics = dir / ("metrics" + std::to_string(run) + ".json");
      const std::vector<std::string> args{"hidwa", "run", "--scenario", kDir + "/" + c.scenario + ".json",
                                          "--mode", c.mode, "--inputs", c.inputs,
                                          "--trace", trace.string(), "--metrics", metrics.string()};
      std::vector<const char *> argv;
      for (const auto &a : args) {
        argv.push_back(a.c_str());
      }
      std::ostringstream sink;
      run_cli(static_cast<int>(argv.size()), argv.data(), sink, sink);
      outputs[run] = slurp(trace) + "\n--\n" + slurp(metrics);
    }
    if (outputs[0] != outputs[1] || outputs[0].size() < 100) {
      ++differing;
    }
  }
  return {differing == 0, "cases=" + std::to_string(cases.size()) + " differing=" + std::to_string(differing)};
}

Verdict live_replay()
{
  Scenario sc = bundled("crossing");
  sc.params.max_time = 120.0;
  LiveSession live(sc, ControlMode::SharedJoystick);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> gap(0, 15);
  const ClientId driver = 1;
  live.handle(driver, parse_client_message(R"({"type": "start"})"));
  int sent = 0;
  while (!live.finished()) {
    for (int i = gap(rng); i > 0 && !live.finished(); --i) {
      live.advance();
    }
    // several messages may land between two ticks
    const int burst = 1 + gap(rng) % 3;
    for (int b = 0; b < burst; ++b) {
      std::ostringstream m;
      const double r = unit(rng);
      if (r < -0.7) {
        m << R"({"type": "button_down"})";
      } else if (r < -0.4) {
        m << R"({"type": "button_up"})";
      } else if (r < -0.2) {
        m << R"({"type": "stick", "p_x": 0, "p_y": 0})";
      } else {
        m << R"({"type": "stick", "p_x": )" << unit(rng) << R"(, "p_y": )" << unit(rng) << "}";
      }
      live.handle_raw(driver, m.str());
      ++sent;
    }
    live.handle_raw(2, R"({"type": "stick", "p_x": 1, "p_y": 1})");  // observer, ignored
    live.advance();
  }
  const auto path = std::filesystem::temp_directory_path() / "hidwa_live_recording.jsonl";
  {
    std::ofstream out(path);
    out << live.recording_jsonl();
  }
  const RunResult replay = run_scripted(sc, load_input_script(path, sc.params.dt_c), ControlMode::SharedJoystick);
  const TraceHeader h{sc.name, ControlMode::SharedJoystick, sc.params};
  const bool same = format_trace(h, live.simulation().trace()) == format_trace(h, replay.trace) &&
                    metrics_to_json(live.simulation().metrics()) == metrics_to_json(replay.metrics);
  std::ostringstream d;
  d << "messages=" << sent << " ticks=" << live.simulation().trace().size()
    << " recorded_events=" << live.recording().size() << " identical=" << (same ? "yes" : "no");
  return {same && sent > 10, d.str()};
}

}  // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
    {"argmin_oracle", argmin_oracle},
    {"rollout_exactness", rollout_exactness},
    {"planner_optimality", planner_optimality},
    {"input_mapping", input_mapping},
    {"release_pseudo_input", release_delay},
    {"collision_safety", safety},
    {"pothole_detour", detour},
    {"determinism", determinism},
    {"live_replay", live_replay},
  };
  int failed = 0;
  for (const auto &[name, check] : criteria) {
    const auto start = Clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception &e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << " (" << seconds_since(start)
              << "s)" << std::endl;
  }
  return failed ? 1 : 0;
}
