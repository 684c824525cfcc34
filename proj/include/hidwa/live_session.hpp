#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hidwa/protocol.hpp"
#include "hidwa/simulator.hpp"

namespace hidwa
{

using ClientId = std::uint64_t;

// Interactive simulation driven by client messages. Messages are handled
// between ticks; input events are stamped with the next tick, exactly as a
// replayed input script would be quantized.
class LiveSession
{
public:
  LiveSession(Scenario scenario, ControlMode mode, bool start_paused = false);

  struct Outcome
  {
    std::optional<std::string> error;
    // Set when the message made the sender the driver.
    bool became_driver{false};
  };

  Outcome handle(ClientId client, const ClientMessage &message);
  Outcome handle_raw(ClientId client, std::string_view text);

  // Driver disconnect is an input release (button up, stick centered).
  void disconnect(ClientId client);

  // Runs one tick with the pending input unless paused or finished.
  bool advance();

  bool paused() const { return paused_; }
  bool finished() const { return sim_->finished(); }
  std::optional<ClientId> driver() const { return driver_; }
  const Simulation &simulation() const { return *sim_; }
  const Scenario &scenario() const { return scenario_; }
  ControlMode mode() const { return mode_; }
  // Incremented by reset and load_scenario.
  std::uint64_t epoch() const { return epoch_; }

  // Every input event applied so far, stamped with its tick time.
  const std::vector<InputEvent> &recording() const { return recording_; }
  std::string recording_jsonl() const;

private:
  void restart();
  void queue_input(InputEvent event);

  Scenario scenario_;
  ControlMode mode_;
  bool paused_;
  std::unique_ptr<Simulation> sim_;
  std::optional<ClientId> driver_;
  std::vector<InputEvent> pending_;
  std::vector<InputEvent> recording_;
  std::uint64_t epoch_{0};
};

}  // namespace hidwa
