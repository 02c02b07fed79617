#pragma once

#include <optional>
#include <string>
#include <vector>

#include "duplex/audio.hpp"
#include "duplex/tokens.hpp"

namespace duplex {

/// One target-speaker utterance placed on the session timeline. Ground
/// truth is derived exclusively from these; interferers never appear here.
struct UtteranceEvent {
    double start = 0.0;  // absolute speech onset, seconds
    double end = 0.0;    // absolute speech offset, seconds
    std::string text;
    TurnState turn = TurnState::Complete;
    std::optional<std::string> answer;

    TimeInterval interval() const { return {start, end}; }

    bool operator==(const UtteranceEvent&) const = default;
};

std::vector<TimeInterval> event_intervals(const std::vector<UtteranceEvent>& events);

}  // namespace duplex
