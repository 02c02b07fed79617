#pragma once

#include <span>
#include <vector>

#include "duplex/audio.hpp"

namespace duplex {

/// Per-frame short-time energy and zero-crossing rate.
struct FrameFeatures {
    double frame_ms = 25.0;
    double hop_ms = 10.0;
    std::vector<double> energy;  // mean square per frame, >= 0
    std::vector<double> zcr;     // sign changes / (frame length - 1), in [0, 1]

    std::size_t frame_count() const { return energy.size(); }
};

/// Frame the clip and compute energy + ZCR per frame. The clip must be at
/// least one frame long. frame_ms >= hop_ms > 0.
FrameFeatures frame_features(const Waveform& clip, double frame_ms = 25.0, double hop_ms = 10.0);

/// Linear-interpolation percentile of a multiset, p in [0, 100].
double percentile(std::span<const double> values, double p);

/// Voicing threshold from the utterance-global energy distribution:
/// P5 + 0.15 * (P95 - P5). Throws DataError on an empty series.
double dynamic_threshold(std::span<const double> global_energy);

}  // namespace duplex
