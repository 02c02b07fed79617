#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "duplex/session_events.hpp"
#include "duplex/tokens.hpp"

namespace duplex {

/// Per-chunk VAD ground truth: chunk k is TALK iff its overlap with target
/// speech totals at least `overlap_min_ms`. Events must lie inside the
/// session.
std::vector<VadState> label_vad_chunks(const std::vector<UtteranceEvent>& events,
                                       double session_duration_s, int chunk_ms,
                                       int overlap_min_ms);

struct LabeledChunks {
    std::vector<ChunkEvent> events;
    std::size_t virtual_tail_chunks = 0;  // 1 when a terminal SIL chunk was appended
    std::size_t fused_flushes = 0;        // transitions that flushed >1 utterance
};

/// Attach ASR spans, turn states and answers at every TALK -> SIL
/// transition. An utterance still open at the final chunk is flushed on an
/// appended virtual silent chunk so its span is never lost. A transition
/// with no finished utterance is an alignment bug and throws.
LabeledChunks attach_semantic_events(const std::vector<VadState>& vad_labels,
                                     const std::vector<UtteranceEvent>& events,
                                     int chunk_ms);

/// Index of the transition chunk that will flush `utterance`, given the
/// planned event list (used by scenario generation to place barge-ins).
std::size_t transition_chunk_for(const std::vector<UtteranceEvent>& events,
                                 std::size_t utterance_index, double session_duration_s,
                                 int chunk_ms, int overlap_min_ms);

struct SampleMeta {
    std::string kind;
    std::uint64_t seed = 0;
    std::size_t fused_flushes = 0;
    double duration_s = 0.0;
};

/// One streaming training sample: reference audio, system prompt, the
/// chunked mixture and one label record per chunk.
struct TrainingSample {
    std::string id;
    std::string ref_audio;      // relative to the manifest directory
    std::string system_prompt;
    std::string mixture_audio;  // relative to the manifest directory
    int chunk_ms = 600;
    std::size_t chunk_count = 0;  // includes virtual tail chunks
    std::size_t virtual_tail_chunks = 0;
    std::string tokens;  // serialize(labels), the wire-format ground truth
    std::vector<ChunkEvent> labels;
    SampleMeta meta;

    bool operator==(const TrainingSample&) const = default;
};

/// Assemble and validate a sample; labels must cover every audio chunk
/// plus any virtual tail. `audio_chunks` is the chunk count of the mixture.
TrainingSample emit_training_sample(const std::string& id, const std::string& ref_audio,
                                    const std::string& system_prompt,
                                    const std::string& mixture_audio, int chunk_ms,
                                    std::size_t audio_chunks, const LabeledChunks& labeled,
                                    const SampleMeta& meta);

void write_samples_jsonl(const std::filesystem::path& path,
                         const std::vector<TrainingSample>& samples);
std::vector<TrainingSample> read_samples_jsonl(const std::filesystem::path& path);

}  // namespace duplex
