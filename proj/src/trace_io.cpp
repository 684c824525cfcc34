#include "hidwa/trace_io.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hidwa
{

std::string format_number(double value)
{
  if (value == 0.0) {
    return "0";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

void write_trace(std::ostream &out, const TraceHeader &header, std::span<const TraceRow> rows)
{
  out << "# hidwa-trace v1\n";
  out << "# scenario=" << header.scenario << '\n';
  out << "# mode=" << to_string(header.mode) << '\n';
  out << "# replan_after_release=scheduler\n";
  for (const auto &key : parameter_keys()) {
    out << "# " << key << '=' << format_number(get_parameter(header.params, key)) << '\n';
  }
  out << kTraceColumns << '\n';
  for (const auto &r : rows) {
    out << format_number(r.t) << ',' << format_number(r.x) << ',' << format_number(r.y) << ','
        << format_number(r.theta) << ',' << format_number(r.v) << ',' << format_number(r.omega) << ','
        << r.gamma << ',' << to_string(r.mode) << ',' << format_number(r.v_h) << ','
        << format_number(r.omega_h) << ',' << (r.recovery ? 1 : 0) << ',';
    for (std::size_t i = 0; i < r.in_region_ids.size(); ++i) {
      out << (i ? ";" : "") << r.in_region_ids[i];
    }
    out << '\n';
  }
}

std::string format_trace(const TraceHeader &header, std::span<const TraceRow> rows)
{
  std::ostringstream out;
  write_trace(out, header, rows);
  return out.str();
}

ParsedTrace parse_trace(std::string_view text)
{
  ParsedTrace parsed;
  std::istringstream in{std::string(text)};
  std::string line;
  bool columns_seen = false;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        parsed.header[line.substr(2, eq - 2)] = line.substr(eq + 1);
      }
      continue;
    }
    if (!columns_seen) {
      if (line != kTraceColumns) {
        throw std::runtime_error("trace: unexpected column line '" + line + "'");
      }
      columns_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      f.push_back(line.substr(pos, comma - pos));
      if (comma == std::string::npos) {
        break;
      }
      pos = comma + 1;
    }
    if (f.size() != 12) {
      throw std::runtime_error("trace: row with " + std::to_string(f.size()) + " fields");
    }
    TraceRow r;
    r.t = std::stod(f[0]);
    r.x = std::stod(f[1]);
    r.y = std::stod(f[2]);
    r.theta = std::stod(f[3]);
    r.v = std::stod(f[4]);
    r.omega = std::stod(f[5]);
    r.gamma = std::stoi(f[6]);
    const auto mode = parse_control_mode(f[7]);
    if (!mode) {
      throw std::runtime_error("trace: bad mode '" + f[7] + "'");
    }
    r.mode = *mode;
    r.v_h = std::stod(f[8]);
    r.omega_h = std::stod(f[9]);
    r.recovery = f[10] == "1";
    std::size_t start = 0;
    while (start < f[11].size()) {
      const auto semi = f[11].find(';', start);
      r.in_region_ids.push_back(f[11].substr(start, semi - start));
      if (semi == std::string::npos) {
        break;
      }
      start = semi + 1;
    }
    parsed.rows.push_back(std::move(r));
  }
  return parsed;
}

std::string metrics_to_json(const Metrics &metrics)
{
  nlohmann::ordered_json j;
  j["status"] = std::string(to_string(metrics.status));
  if (metrics.completion_time) {
    j["completion_time"] = *metrics.completion_time;
  } else {
    j["completion_time"] = nullptr;
  }
  j["regions_not_avoided"] = metrics.regions_not_avoided;
  j["collisions"] = metrics.collisions;
  j["path_length"] = metrics.path_length;
  j["input_active_time"] = metrics.input_active_time;
  j["sim_time"] = metrics.sim_time;
  return j.dump(2) + "\n";
}

}  // namespace hidwa
