#include "hidwa/live_session.hpp"

#include <sstream>

#include "hidwa/scenario.hpp"

namespace hidwa
{

LiveSession::LiveSession(Scenario scenario, ControlMode mode, bool start_paused)
: scenario_(std::move(scenario)), mode_(mode), paused_(start_paused)
{
  restart();
}

void LiveSession::restart()
{
  sim_ = std::make_unique<Simulation>(scenario_, mode_);
  pending_.clear();
  recording_.clear();
  ++epoch_;
}

void LiveSession::queue_input(InputEvent event)
{
  const std::int64_t tick = sim_->world().tick;
  event.tick = tick;
  event.t = static_cast<double>(tick) * scenario_.params.dt_c;
  pending_.push_back(event);
}

LiveSession::Outcome LiveSession::handle(ClientId client, const ClientMessage &message)
{
  Outcome outcome;
  if (driver_ && *driver_ != client) {
    outcome.error = "observers cannot send '" + std::string(to_string(message.type)) + "'";
    return outcome;
  }
  if (!driver_) {
    driver_ = client;
    outcome.became_driver = true;
  }

  if (is_input_message(message.type)) {
    queue_input(to_input_event(message, 0.0, 0));
    return outcome;
  }
  switch (message.type) {
    case ClientMessageType::SetMode:
      mode_ = *message.mode;
      sim_->set_mode(mode_);
      break;
    case ClientMessageType::LoadScenario:
      try {
        scenario_ = load_scenario(message.scenario_document);
      } catch (const std::exception &e) {
        outcome.error = std::string("load_scenario failed: ") + e.what();
        return outcome;
      }
      restart();
      break;
    case ClientMessageType::Start:
      paused_ = false;
      break;
    case ClientMessageType::Pause:
      paused_ = true;
      break;
    case ClientMessageType::Reset:
      restart();
      break;
    default:
      break;
  }
  return outcome;
}

LiveSession::Outcome LiveSession::handle_raw(ClientId client, std::string_view text)
{
  try {
    return handle(client, parse_client_message(text));
  } catch (const ProtocolError &e) {
    Outcome outcome;
    outcome.error = e.what();
    return outcome;
  }
}

void LiveSession::disconnect(ClientId client)
{
  if (!driver_ || *driver_ != client) {
    return;
  }
  driver_.reset();
  InputEvent up;
  up.kind = InputKind::ButtonUp;
  queue_input(up);
  InputEvent center;
  center.kind = InputKind::Stick;
  queue_input(center);
}

bool LiveSession::advance()
{
  if (paused_ || sim_->finished()) {
    return false;
  }
  sim_->tick(pending_);
  recording_.insert(recording_.end(), pending_.begin(), pending_.end());
  pending_.clear();
  return true;
}

std::string LiveSession::recording_jsonl() const
{
  std::ostringstream out;
  for (const auto &ev : recording_) {
    out << to_json_line(ev) << '\n';
  }
  return out.str();
}

}  // namespace hidwa
