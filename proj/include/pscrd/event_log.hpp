#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace pscrd {

// One line per event: {"hour":..,"round":..,"kind":"..",<payload fields>}.
// round is -1 for events that do not belong to a transfer round.
struct Event {
  std::int64_t hour = 0;
  std::int64_t round = -1;
  std::string kind;
  nlohmann::ordered_json payload = nlohmann::ordered_json::object();

  std::string to_line() const {
    nlohmann::ordered_json j;
    j["hour"] = hour;
    j["round"] = round;
    j["kind"] = kind;
    for (const auto& [k, v] : payload.items()) j[k] = v;
    return j.dump();
  }
};

class EventLog {
public:
  explicit EventLog(bool enabled = true) : enabled_(enabled) {}

  bool enabled() const noexcept { return enabled_; }

  void append(Event e) {
    if (enabled_) events_.push_back(std::move(e));
  }

  void append(std::int64_t hour, std::int64_t round, std::string kind,
              nlohmann::ordered_json payload = nlohmann::ordered_json::object()) {
    if (enabled_) events_.push_back(Event{hour, round, std::move(kind), std::move(payload)});
  }

  const std::vector<Event>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }

  std::string serialize() const {
    std::ostringstream out;
    for (const auto& e : events_) out << e.to_line() << '\n';
    return out.str();
  }

private:
  bool enabled_;
  std::vector<Event> events_;
};

}  // namespace pscrd
