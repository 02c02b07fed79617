#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "duplex/audio.hpp"
#include "duplex/config.hpp"
#include "duplex/rng.hpp"
#include "duplex/session_events.hpp"
#include "duplex/transcript.hpp"

namespace duplex {

enum class ScenarioKind { PureNoise, InterferenceSpeaker, NormalInteraction, BargeIn };

std::string_view to_string(ScenarioKind k);
ScenarioKind scenario_from_string(std::string_view s);

/// One clean-speech pool entry: a single utterance with word timings and,
/// when annotated, a turn label plus the answer a completed query earns.
struct SpeechAsset {
    std::string audio;  // relative to the pool root
    std::string speaker_id;
    std::string text;
    TimedTranscript words;
    std::optional<TurnState> turn_label;
    std::optional<std::string> answer;

    double speech_duration() const { return words.speech_end() - words.speech_start(); }
};

struct AudioAsset {
    std::string audio;
};

/// Asset manifests for session synthesis, loaded from JSONL pool files.
struct AssetPools {
    std::filesystem::path root;
    std::vector<SpeechAsset> speech;
    std::vector<SpeechAsset> interference;
    std::vector<AudioAsset> noise;
    std::vector<AudioAsset> impulse_responses;  // optional; parametric IRs otherwise
    std::vector<AudioAsset> agent_responses;
    std::map<std::string, std::string> references;  // speaker_id -> audio

    std::filesystem::path resolve(const std::string& rel) const { return root / rel; }
};

/// Load pools from `<dir>/{speech,interference,noise,irs,agent,references}.jsonl`.
/// Missing optional pools (irs) yield empty vectors; speech/noise are required.
AssetPools load_asset_pools(const std::filesystem::path& dir);

struct ScriptUtterance {
    SpeechAsset asset;
    double gap_before_s = 0.0;  // silence between previous utterance (or t=0) and this file
    bool target_voice = true;   // false: speaker-consistency negative, labeled non-target
};

struct ScriptInterferer {
    std::string audio;
    double offset_s = 0.0;
    double snr_db = 0.0;  // level below the session's reference RMS
};

struct ScriptEcho {
    std::string agent_audio;
    std::string ir_audio;  // empty: parametric IR from the script seed
    double drive = 2.0;
    double start_s = 0.0;
    double level_db = 0.0;               // echo below target active RMS
    std::optional<double> stop_s;        // playback halted here (interrupt barge-in)
};

/// Declarative description of one session; rendering it with the same seed
/// reproduces the mixture byte-identically.
struct SessionScript {
    std::string id;
    ScenarioKind kind = ScenarioKind::NormalInteraction;
    std::uint64_t seed = 0;
    std::string reference_audio;
    std::vector<ScriptUtterance> utterances;
    double tail_gap_s = 0.0;
    std::optional<double> fixed_duration_s;  // sessions with no target speech
    std::vector<ScriptInterferer> interferers;
    std::string noise_audio;
    double noise_snr_db = 10.0;      // vs target; vs nominal RMS when no target
    std::size_t noise_tile_offset = 0;
    std::optional<ScriptEcho> echo;
};

struct RenderMeta {
    std::uint64_t seed = 0;
    double noise_gain = 0.0;
    double rescale = 1.0;
    double requested_snr_db = 0.0;
    bool has_target = false;
    std::optional<TimeInterval> echo_window;  // actual rendered extent
    std::vector<TimeInterval> interferer_windows;
};

/// A rendered session: final mixture plus the per-stem decomposition and
/// the exact ground-truth event timeline.
struct SessionRender {
    std::string id;
    ScenarioKind kind = ScenarioKind::NormalInteraction;
    std::string reference_audio;
    Waveform mixture;
    Waveform clean_target;
    Waveform noise_stem;
    Waveform interferer_stem;
    Waveform echo_stem;
    std::vector<UtteranceEvent> events;
    RenderMeta meta;

    double duration_s() const { return mixture.duration_s(); }
};

struct PlacedUtterance {
    Waveform audio;
    TimedTranscript words;  // times relative to the utterance audio
    std::string text;
    TurnState turn = TurnState::Complete;
    std::optional<std::string> answer;
    bool target_voice = true;
};

struct Assembly {
    Waveform clean;                      // target-voice audio only
    Waveform swapped;                    // voice-consistency negatives
    std::vector<UtteranceEvent> events;  // target speech intervals
    std::vector<TimeInterval> placements;  // every utterance file extent
};

/// Concatenate utterances separated by the given silences (one entry per
/// boundary between consecutive utterances). Event times are cumulative
/// placement plus each utterance's word-timing extent.
Assembly assemble_dialogue(const std::vector<PlacedUtterance>& utterances,
                           const std::vector<double>& gaps_between_s);

/// Build a session script for the requested scenario from the pools.
/// Deterministic for a given seed. Throws DataError when the pools cannot
/// support the scenario.
SessionScript generate_scenario(ScenarioKind kind, const AssetPools& pools,
                                const PipelineConfig& cfg, std::uint64_t seed,
                                const std::string& id);

/// Render a script to waveform stems + events. Same script, same bytes.
SessionRender render_session(const SessionScript& script, const AssetPools& pools,
                             const PipelineConfig& cfg);

/// Persist a rendered session: mixture.wav, clean.wav, events.json, meta.json.
void write_session(const std::filesystem::path& dir, const SessionRender& render,
                   const SessionScript& script);

/// Labeling-stage view of a persisted session.
struct StoredSession {
    std::string id;
    ScenarioKind kind = ScenarioKind::NormalInteraction;
    std::string reference_audio;
    std::string mixture_audio;  // relative to the session dir
    double duration_s = 0.0;
    std::vector<UtteranceEvent> events;
};

StoredSession read_session(const std::filesystem::path& dir);

}  // namespace duplex
