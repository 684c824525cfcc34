#pragma once

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hidwa/simulator.hpp"

namespace hidwa
{

// Fixed decimal formatting used by every trace field: 9 significant digits,
// negative zero printed as 0.
std::string format_number(double value);

struct TraceHeader
{
  std::string scenario;
  ControlMode mode{ControlMode::SharedJoystick};
  ParameterSet params;
};

// CSV trace: '#'-prefixed header block (scenario, mode, every parameter),
// then the column line, then one row per tick.
void write_trace(std::ostream &out, const TraceHeader &header, std::span<const TraceRow> rows);
std::string format_trace(const TraceHeader &header, std::span<const TraceRow> rows);

struct ParsedTrace
{
  std::map<std::string, std::string> header;
  std::vector<TraceRow> rows;
};

ParsedTrace parse_trace(std::string_view text);

std::string metrics_to_json(const Metrics &metrics);

inline constexpr std::string_view kTraceColumns =
  "t,x,y,theta,v,omega,gamma,mode,v_h,omega_h,recovery_flag,in_region_ids";

}  // namespace hidwa
