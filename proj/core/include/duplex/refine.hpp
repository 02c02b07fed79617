#pragma once

#include "duplex/audio.hpp"
#include "duplex/errors.hpp"
#include "duplex/transcript.hpp"

namespace duplex {

struct NoVoicedRegion : AudioError {
    NoVoicedRegion() : AudioError("no frame reaches the voicing threshold") {}
};

struct RefineConfig {
    double frame_ms = 25.0;
    double hop_ms = 10.0;
    double pad_ms = 15.0;         // symmetric boundary padding, 10..20 ms
    double zcr_absorb = 0.35;     // sub-threshold frames above this ZCR extend voiced runs
};

struct WordBounds {
    double start = 0.0;  // seconds, relative to the clip
    double end = 0.0;
};

/// Locate the voiced region inside a single word clip and pad it
/// symmetrically. `threshold` comes from dynamic_threshold() over the whole
/// utterance. Throws NoVoicedRegion when nothing reaches the threshold.
WordBounds refine_word(const Waveform& clip, double threshold, const RefineConfig& cfg = {});

/// Refine every coarse entry: slice, analyze, pad, map back to absolute
/// times. Entries whose clip has no voiced region keep their coarse times
/// and are flagged as fallbacks. Padded boundaries that would overlap are
/// split at the midpoint of the overlap.
TimedTranscript refine_transcript(const Waveform& w, const TimedTranscript& coarse,
                                  const RefineConfig& cfg = {});

}  // namespace duplex
