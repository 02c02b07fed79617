#include "duplex/tokens.hpp"

#include <array>

namespace duplex {

namespace {

using namespace marker;

constexpr std::array<std::string_view, 10> kAllMarkers = {
    kSil, kTalk, kComplete, kInComplete, kInterrupt,
    kBackchannel, kAsrStart, kAsrEnd, kAnswerStart, kAnswerEnd,
};

bool contains_marker(std::string_view text) {
    for (auto m : kAllMarkers) {
        if (text.find(m) != std::string_view::npos) return true;
    }
    return false;
}

std::optional<VadState> vad_of_marker(std::string_view m) {
    if (m == kSil) return VadState::Sil;
    if (m == kTalk) return VadState::Talk;
    return std::nullopt;
}

std::optional<TurnState> turn_of_marker(std::string_view m) {
    if (m == kComplete) return TurnState::Complete;
    if (m == kInComplete) return TurnState::InComplete;
    if (m == kInterrupt) return TurnState::Interrupt;
    if (m == kBackchannel) return TurnState::Backchannel;
    return std::nullopt;
}

std::string_view kind_name(ParseError::Kind k) {
    switch (k) {
        case ParseError::Kind::UnterminatedSpan: return "UnterminatedSpan";
        case ParseError::Kind::UnexpectedMarker: return "UnexpectedMarker";
        case ParseError::Kind::UnknownToken: return "UnknownToken";
    }
    return "?";
}

}  // namespace

ParseError::ParseError(Kind k, std::size_t off, const std::string& msg)
    : Error(std::string(kind_name(k)) + " at offset " + std::to_string(off) + ": " + msg),
      kind(k),
      offset(off) {}

std::string_view to_string(VadState v) {
    return v == VadState::Sil ? std::string_view("SIL") : std::string_view("TALK");
}

std::string_view to_string(TurnState t) {
    switch (t) {
        case TurnState::Complete: return "Complete";
        case TurnState::InComplete: return "InComplete";
        case TurnState::Interrupt: return "Interrupt";
        case TurnState::Backchannel: return "Backchannel";
    }
    return "?";
}

VadState vad_from_string(std::string_view s) {
    if (s == "SIL") return VadState::Sil;
    if (s == "TALK") return VadState::Talk;
    throw DataError("unknown vad state: " + std::string(s));
}

TurnState turn_from_string(std::string_view s) {
    if (s == "Complete") return TurnState::Complete;
    if (s == "InComplete") return TurnState::InComplete;
    if (s == "Interrupt") return TurnState::Interrupt;
    if (s == "Backchannel") return TurnState::Backchannel;
    throw DataError("unknown turn state: " + std::string(s));
}

void validate_events(std::span<const ChunkEvent> events) {
    for (std::size_t i = 0; i < events.size(); ++i) {
        const ChunkEvent& e = events[i];
        if (e.index != i) {
            throw InvariantViolation("chunk " + std::to_string(i) + " carries index " +
                                     std::to_string(e.index));
        }
        if (e.asr_text) {
            bool transition = i > 0 && events[i - 1].vad == VadState::Talk &&
                              e.vad == VadState::Sil;
            if (!transition) {
                throw InvariantViolation("asr text outside a TALK->SIL transition at chunk " +
                                         std::to_string(i));
            }
            if (contains_marker(*e.asr_text)) {
                throw InvariantViolation("marker literal inside asr text at chunk " +
                                         std::to_string(i));
            }
        }
        if (e.turn && !e.asr_text) {
            throw InvariantViolation("turn state without asr span at chunk " + std::to_string(i));
        }
        if (e.answer_text) {
            if (!e.turn ||
                (*e.turn != TurnState::Complete && *e.turn != TurnState::Interrupt)) {
                throw InvariantViolation(
                    "answer requires turn Complete or Interrupt at chunk " + std::to_string(i));
            }
            if (contains_marker(*e.answer_text)) {
                throw InvariantViolation("marker literal inside answer text at chunk " +
                                         std::to_string(i));
            }
        }
    }
}

std::string serialize(std::span<const ChunkEvent> events) {
    validate_events(events);
    std::string out;
    for (const ChunkEvent& e : events) {
        out += e.vad == VadState::Sil ? kSil : kTalk;
        if (e.asr_text) {
            out += kAsrStart;
            out += *e.asr_text;
            out += kAsrEnd;
        }
        if (e.turn) {
            switch (*e.turn) {
                case TurnState::Complete: out += kComplete; break;
                case TurnState::InComplete: out += kInComplete; break;
                case TurnState::Interrupt: out += kInterrupt; break;
                case TurnState::Backchannel: out += kBackchannel; break;
            }
        }
        if (e.answer_text) {
            out += kAnswerStart;
            out += *e.answer_text;
            out += kAnswerEnd;
        }
    }
    return out;
}

namespace {

struct Scanner {
    std::string_view text;
    std::size_t pos = 0;

    bool done() const { return pos >= text.size(); }

    /// Marker starting exactly at `pos`, if any.
    std::optional<std::string_view> marker_here() const {
        for (auto m : kAllMarkers) {
            if (text.substr(pos, m.size()) == m) return m;
        }
        return std::nullopt;
    }

    /// Offset of the next marker occurrence at or after `pos`.
    std::optional<std::pair<std::size_t, std::string_view>> find_next_marker() const {
        std::optional<std::pair<std::size_t, std::string_view>> best;
        for (auto m : kAllMarkers) {
            std::size_t at = text.find(m, pos);
            if (at == std::string_view::npos) continue;
            if (!best || at < best->first ||
                (at == best->first && m.size() > best->second.size())) {
                best = {at, m};
            }
        }
        return best;
    }
};

}  // namespace

std::vector<ChunkEvent> parse(std::string_view text) {
    std::vector<ChunkEvent> events;
    Scanner sc{text};

    auto read_span = [&](std::string_view opener, std::string_view closer) -> std::string {
        std::size_t open_at = sc.pos;
        sc.pos += opener.size();
        auto next = sc.find_next_marker();
        if (!next) {
            throw ParseError(ParseError::Kind::UnterminatedSpan, open_at,
                             std::string(opener) + " span never closed");
        }
        if (next->second != closer) {
            throw ParseError(ParseError::Kind::UnexpectedMarker, next->first,
                             "expected " + std::string(closer) + " but found " +
                                 std::string(next->second));
        }
        std::string body(sc.text.substr(sc.pos, next->first - sc.pos));
        sc.pos = next->first + closer.size();
        return body;
    };

    while (!sc.done()) {
        auto m = sc.marker_here();
        if (!m) {
            throw ParseError(ParseError::Kind::UnknownToken, sc.pos,
                             "expected a marker, found free text");
        }
        auto vad = vad_of_marker(*m);
        if (!vad) {
            throw ParseError(ParseError::Kind::UnexpectedMarker, sc.pos,
                             std::string(*m) + " cannot open a chunk record");
        }
        ChunkEvent e;
        e.index = events.size();
        e.vad = *vad;
        sc.pos += m->size();

        // Optional ASR span, only legal on a TALK -> SIL transition chunk.
        // Span syntax is checked before placement so an unclosed span is
        // always reported as UnterminatedSpan at its opener.
        if (auto next = sc.marker_here(); next && *next == kAsrStart) {
            std::size_t open_at = sc.pos;
            std::string body = read_span(kAsrStart, kAsrEnd);
            bool transition = !events.empty() && events.back().vad == VadState::Talk &&
                              e.vad == VadState::Sil;
            if (!transition) {
                throw ParseError(ParseError::Kind::UnexpectedMarker, open_at,
                                 "asr span outside a TALK->SIL transition");
            }
            e.asr_text = std::move(body);
        }

        // Optional turn marker, requires a preceding ASR span in this chunk.
        if (auto next = sc.marker_here()) {
            if (auto turn = turn_of_marker(*next)) {
                if (!e.asr_text) {
                    throw ParseError(ParseError::Kind::UnexpectedMarker, sc.pos,
                                     std::string(*next) + " without a preceding asr span");
                }
                e.turn = *turn;
                sc.pos += next->size();
            }
        }

        // Optional answer span, requires turn Complete or Interrupt.
        if (auto next = sc.marker_here(); next && *next == kAnswerStart) {
            std::size_t open_at = sc.pos;
            std::string body = read_span(kAnswerStart, kAnswerEnd);
            bool allowed = e.turn && (*e.turn == TurnState::Complete ||
                                      *e.turn == TurnState::Interrupt);
            if (!allowed) {
                throw ParseError(ParseError::Kind::UnexpectedMarker, open_at,
                                 "answer span requires turn Complete or Interrupt");
            }
            e.answer_text = std::move(body);
        }

        // Anything else here must be the next chunk's vad marker.
        if (!sc.done()) {
            auto next = sc.marker_here();
            if (!next) {
                throw ParseError(ParseError::Kind::UnknownToken, sc.pos,
                                 "expected a marker, found free text");
            }
            if (!vad_of_marker(*next)) {
                throw ParseError(ParseError::Kind::UnexpectedMarker, sc.pos,
                                 std::string(*next) + " is not valid in this position");
            }
        }
        events.push_back(std::move(e));
    }
    return events;
}

}  // namespace duplex
