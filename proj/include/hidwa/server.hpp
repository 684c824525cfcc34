#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>

#include "hidwa/live_session.hpp"

namespace hidwa
{

struct ServerOptions
{
  unsigned short port{8765};
  Scenario scenario;
  ControlMode mode{ControlMode::SharedJoystick};
  // Sleep to wall-clock dt_c between ticks; false runs unpaced.
  bool real_time{true};
  bool start_paused{false};
  // Return from run() once the run reaches the goal or times out.
  bool exit_on_finish{false};
  std::optional<std::filesystem::path> trace_path;
  std::optional<std::filesystem::path> record_path;
};

// WebSocket service: one JSON document per text frame. The simulation loop
// owns the session; network threads only enqueue client messages and
// deliver encoded snapshots.
class Server
{
public:
  // Binds the listening socket; throws std::runtime_error when the port is
  // unavailable.
  explicit Server(ServerOptions options);
  ~Server();

  Server(const Server &) = delete;
  Server &operator=(const Server &) = delete;

  unsigned short port() const;

  // Blocks until stop() or, with exit_on_finish, the end of the run.
  void run();
  // Safe to call from any thread.
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hidwa
