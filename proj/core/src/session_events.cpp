#include "duplex/session_events.hpp"

namespace duplex {

std::vector<TimeInterval> event_intervals(const std::vector<UtteranceEvent>& events) {
    std::vector<TimeInterval> out;
    out.reserve(events.size());
    for (const auto& e : events) out.push_back(e.interval());
    return out;
}

}  // namespace duplex
