#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "duplex/labeler.hpp"
#include "duplex/tokens.hpp"

namespace duplex {

/// What the frontend (model or oracle) emits for one chunk. Structural
/// invariants match ChunkEvent.
struct FrontendOutput {
    VadState vad = VadState::Sil;
    std::optional<std::string> asr_text;
    std::optional<TurnState> turn;
    std::optional<std::string> answer_text;
    std::size_t max_decode_len = 0;  // decoding cap L; 0 = uncapped

    bool operator==(const FrontendOutput&) const = default;
};

enum class ActionType {
    KeepListening,
    TriggerAsrDecode,
    Respond,
    HaltPlayback,
    ContinuePlayback,
    NoOp,
};

std::string_view to_string(ActionType a);
ActionType action_from_string(std::string_view s);

struct Action {
    ActionType type = ActionType::NoOp;
    std::string text;        // response text for Respond
    int latency_chunks = 0;  // chunks between the observed trigger and this action

    bool operator==(const Action&) const = default;
};

enum class ControllerPhase { Idle, UserSpeaking, Responding };

std::string_view to_string(ControllerPhase p);

/// Full controller state between chunks. The phase is derived: Responding
/// iff playback is active, UserSpeaking while the user is mid-utterance or
/// a partial transcript is pending, Idle otherwise.
struct ControllerState {
    ControllerPhase phase = ControllerPhase::Idle;
    std::string pending_transcript;
    int playback_remaining_chunks = 0;
    VadState last_vad = VadState::Sil;

    bool playback_active() const { return playback_remaining_chunks > 0; }
};

struct ControllerConfig {
    int chunk_ms = 600;
    double chars_per_second = 8.0;  // simulated playback speed of answers
};

struct StepResult {
    ControllerState state;
    std::vector<Action> actions;
};

/// Deterministic pure transition function of the full-duplex interaction
/// state machine. Turn states are acted on only at TALK -> SIL transitions;
/// turn markers arriving elsewhere are ignored. Throws ProtocolError on
/// structurally invalid output (turn without ASR, answer with a turn that
/// cannot carry one).
StepResult controller_step(const ControllerState& state, const FrontendOutput& out,
                           const ControllerConfig& cfg);

/// Reference frontend: replays the ground-truth label of chunk k field for
/// field. Throws DataError when k is out of bounds.
FrontendOutput oracle_step(const std::vector<ChunkEvent>& ground_truth, std::size_t k);

struct FlipProbs {
    double vad = 0.0;       // flip the VAD state
    double turn = 0.0;      // replace the turn with a uniformly different class
    double char_sub = 0.0;  // substitute each ASR character
};

/// Noisy frontend for metric calibration: flips fields of the ground truth
/// in place, deterministically for a given seed. The answer field is
/// reconciled with the flipped turn so outputs stay structurally valid.
class PerturbedOracle {
public:
    PerturbedOracle(const std::vector<ChunkEvent>& ground_truth, FlipProbs probs,
                    std::uint64_t seed);

    FrontendOutput step(std::size_t k);

private:
    const std::vector<ChunkEvent>& truth_;
    FlipProbs probs_;
    Rng rng_;
};

/// Per-chunk trace record: everything the evaluation harness consumes.
struct TraceStep {
    std::size_t chunk_index = 0;
    FrontendOutput output;
    ControllerPhase phase_after = ControllerPhase::Idle;
    bool playback_active = false;
    std::vector<Action> actions;
};

struct SessionTrace {
    std::string session_id;
    std::string model;  // "oracle" or "perturbed"
    std::vector<TraceStep> steps;
    bool failed = false;
    std::string error;
};

using FrontendFn = std::function<FrontendOutput(std::size_t chunk_index)>;

/// Drive the controller across every chunk of a sample. Protocol errors
/// mark the trace failed instead of propagating.
SessionTrace run_session(const TrainingSample& sample, const FrontendFn& frontend,
                         const ControllerConfig& cfg, const std::string& model_name);

SessionTrace run_session_oracle(const TrainingSample& sample, const ControllerConfig& cfg);
SessionTrace run_session_perturbed(const TrainingSample& sample, const ControllerConfig& cfg,
                                   FlipProbs probs, std::uint64_t seed);

void write_traces_jsonl(const std::filesystem::path& path,
                        const std::vector<SessionTrace>& traces);
std::vector<SessionTrace> read_traces_jsonl(const std::filesystem::path& path);

}  // namespace duplex
