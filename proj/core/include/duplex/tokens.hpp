#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "duplex/errors.hpp"

namespace duplex {

/// Per-chunk voice activity of the target speaker.
enum class VadState { Sil, Talk };

/// Turn-taking state attached to an utterance-final chunk.
enum class TurnState { Complete, InComplete, Interrupt, Backchannel };

std::string_view to_string(VadState v);
std::string_view to_string(TurnState t);
VadState vad_from_string(std::string_view s);
TurnState turn_from_string(std::string_view s);

/// Everything the stream asserts about one audio chunk: the VAD state,
/// plus an optional ASR span, turn state and answer span at the chunk where
/// a talk-to-silence transition lands.
struct ChunkEvent {
    std::size_t index = 0;
    VadState vad = VadState::Sil;
    std::optional<std::string> asr_text;
    std::optional<TurnState> turn;
    std::optional<std::string> answer_text;

    bool operator==(const ChunkEvent&) const = default;
};

/// Literal wire markers.
namespace marker {
inline constexpr std::string_view kSil = "<SIL>";
inline constexpr std::string_view kTalk = "<TALK>";
inline constexpr std::string_view kComplete = "<Complete>";
inline constexpr std::string_view kInComplete = "<InComplete>";
inline constexpr std::string_view kInterrupt = "<Interrupt>";
inline constexpr std::string_view kBackchannel = "<Backchannel>";
inline constexpr std::string_view kAsrStart = "<AsrStart>";
inline constexpr std::string_view kAsrEnd = "<AsrEnd>";
inline constexpr std::string_view kAnswerStart = "<AnswerStart>";
inline constexpr std::string_view kAnswerEnd = "<AnswerEnd>";
}  // namespace marker

struct ParseError : Error {
    enum class Kind { UnterminatedSpan, UnexpectedMarker, UnknownToken };

    ParseError(Kind k, std::size_t off, const std::string& msg);

    Kind kind;
    std::size_t offset;  // byte offset into the token text
};

/// Event-list invariant violations detected at serialize time.
struct InvariantViolation : Error {
    using Error::Error;
};

/// Validate the cross-chunk invariants of an event list:
///  - indexes are 0..n-1 in order
///  - asr_text only at a TALK -> SIL transition chunk
///  - turn only with asr_text
///  - answer_text only with turn Complete or Interrupt
///  - no marker literal inside span text
void validate_events(std::span<const ChunkEvent> events);

/// Render an event list to token text. Per chunk: vad marker, optional
/// <AsrStart>text<AsrEnd>, optional turn marker, optional
/// <AnswerStart>text<AnswerEnd>. Throws InvariantViolation on bad input.
std::string serialize(std::span<const ChunkEvent> events);

/// Parse token text back to events. Inverse of serialize on valid input;
/// rejects anything else with a positioned ParseError. Empty input is an
/// empty event list.
std::vector<ChunkEvent> parse(std::string_view text);

}  // namespace duplex
