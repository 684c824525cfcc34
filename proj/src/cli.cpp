#include "hidwa/cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hidwa/scenario.hpp"
#include "hidwa/server.hpp"
#include "hidwa/simulator.hpp"
#include "hidwa/trace_io.hpp"

namespace hidwa
{
namespace
{

std::string_view rejection_name(Rejection r)
{
  switch (r) {
    case Rejection::None:
      return "none";
    case Rejection::Collision:
      return "collision";
    case Rejection::Oscillation:
      return "oscillation";
    case Rejection::RotateToGoal:
      return "rotate_to_goal";
  }
  return "none";
}

void apply_overrides(Scenario &scenario, const std::vector<std::string> &overrides)
{
  for (const auto &item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("expected key=value, got '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != text.size()) {
      throw ParameterError("parameter " + key + ": not a number: '" + text + "'");
    }
    set_parameter(scenario.params, key, value);
  }
  validate(scenario.params);
}

ControlMode mode_from(const std::string &text)
{
  auto mode = parse_control_mode(text);
  if (!mode) {
    throw std::invalid_argument("unknown mode '" + text + "'");
  }
  return *mode;
}

template <typename Write>
void write_file(const std::string &path, Write &&write)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path);
  }
  write(out);
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

struct RunArgs
{
  std::string scenario, mode = "sj", inputs, trace, metrics, dump;
  std::vector<std::string> params;
  std::optional<double> max_time;
};

int do_run(const RunArgs &a, std::ostream &out)
{
  Scenario scenario = load_scenario_file(a.scenario);
  apply_overrides(scenario, a.params);
  const ControlMode mode = mode_from(a.mode);
  std::vector<InputEvent> script;
  if (!a.inputs.empty()) {
    script = load_input_script(a.inputs, scenario.params.dt_c);
  }

  std::optional<std::ofstream> dump;
  CandidateObserver observer;
  if (!a.dump.empty()) {
    dump.emplace(a.dump, std::ios::binary);
    if (!*dump) {
      throw std::runtime_error("cannot write " + a.dump);
    }
    observer = [&dump](const WorldState &w, std::span<const Candidate> cands, const Selection &sel) {
      nlohmann::ordered_json line;
      line["tick"] = w.tick;
      line["t"] = w.t;
      line["selected"] = sel.index ? nlohmann::ordered_json(*sel.index) : nlohmann::ordered_json();
      line["recovery"] = sel.recovery;
      line["passthrough"] = sel.passthrough;
      auto &arr = line["candidates"] = nlohmann::ordered_json::array();
      for (const auto &c : cands) {
        nlohmann::ordered_json j;
        j["v"] = c.u.v;
        j["omega"] = c.u.omega;
        j["feasible"] = c.feasible;
        j["rejection"] = rejection_name(c.rejection);
        if (c.feasible) {
          j["critics"] = c.nav_cost_vector;
          j["nav_cost"] = c.nav_cost;
          j["total_cost"] = c.total_cost;
        }
        arr.push_back(std::move(j));
      }
      *dump << line.dump() << '\n';
    };
  }

  const RunResult result = run_scripted(scenario, script, mode, a.max_time, observer);
  ParameterSet header_params = scenario.params;
  if (a.max_time) {
    header_params.max_time = *a.max_time;
  }
  if (!a.trace.empty()) {
    write_file(a.trace, [&](std::ostream &o) {
      write_trace(o, {scenario.name, mode, header_params}, result.trace);
    });
  }
  if (!a.metrics.empty()) {
    write_file(a.metrics, [&](std::ostream &o) { o << metrics_to_json(result.metrics) << '\n'; });
  }
  out << to_string(result.metrics.status) << " t=" << format_number(result.metrics.sim_time)
      << " collisions=" << result.metrics.collisions
      << " regions_not_avoided=" << result.metrics.regions_not_avoided << '\n';
  return result.metrics.status == RunStatus::GoalReached ? 0 : 2;
}

struct ServeArgs
{
  int port = 8765;
  std::string scenario, mode = "sj", tick_rate = "real", trace, record;
  std::vector<std::string> params;
  bool paused = false, exit_on_finish = false;
};

Server *active_server = nullptr;

extern "C" void on_signal(int)
{
  if (active_server) {
    active_server->stop();
  }
}

int do_serve(const ServeArgs &a, std::ostream &out)
{
  ServerOptions opts;
  opts.port = static_cast<unsigned short>(a.port);
  opts.scenario = load_scenario_file(a.scenario);
  apply_overrides(opts.scenario, a.params);
  opts.mode = mode_from(a.mode);
  opts.real_time = a.tick_rate == "real";
  opts.start_paused = a.paused;
  opts.exit_on_finish = a.exit_on_finish;
  if (!a.trace.empty()) {
    opts.trace_path = a.trace;
  }
  if (!a.record.empty()) {
    opts.record_path = a.record;
  }
  Server server(std::move(opts));
  out << "listening on port " << server.port() << std::endl;
  active_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.run();
  active_server = nullptr;
  return 0;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"HI-DWA shared-control simulator"};
  app.require_subcommand(1);

  RunArgs run;
  auto *run_cmd = app.add_subcommand("run", "Run a scenario headlessly with a scripted operator");
  run_cmd->add_option("--scenario", run.scenario, "Scenario JSON")->required();
  run_cmd->add_option("--mode", run.mode, "sw, sj or sg")->check(CLI::IsMember({"sw", "sj", "sg"}));
  run_cmd->add_option("--inputs", run.inputs, "Input script (JSONL)");
  run_cmd->add_option("--trace", run.trace, "Trace CSV output");
  run_cmd->add_option("--metrics", run.metrics, "Metrics JSON output");
  run_cmd->add_option("--param", run.params, "Parameter override key=value")->take_all();
  run_cmd->add_option("--max-time", run.max_time, "Abort after this much simulated time [s]");
  run_cmd->add_option("--dump-candidates", run.dump, "Per-tick candidate dump (JSONL)");

  ServeArgs serve;
  auto *serve_cmd = app.add_subcommand("serve", "Serve a live session over WebSocket");
  serve_cmd->add_option("--port", serve.port, "TCP port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--scenario", serve.scenario, "Scenario JSON")->required();
  serve_cmd->add_option("--mode", serve.mode, "sw, sj or sg")->check(CLI::IsMember({"sw", "sj", "sg"}));
  serve_cmd->add_option("--tick-rate", serve.tick_rate, "real or fast")
    ->check(CLI::IsMember({"real", "fast"}));
  serve_cmd->add_option("--param", serve.params, "Parameter override key=value")->take_all();
  serve_cmd->add_flag("--paused", serve.paused, "Wait for a start message");
  serve_cmd->add_flag("--exit-on-finish", serve.exit_on_finish, "Exit when the run ends");
  serve_cmd->add_option("--trace", serve.trace, "Trace CSV written when the run ends");
  serve_cmd->add_option("--record", serve.record, "Input recording (JSONL) written when the run ends");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*run_cmd) {
      return do_run(run, out);
    }
    return do_serve(serve, out);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace hidwa
