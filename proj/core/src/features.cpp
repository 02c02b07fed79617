#include "duplex/features.hpp"

#include <algorithm>
#include <cmath>

#include "duplex/errors.hpp"

namespace duplex {

FrameFeatures frame_features(const Waveform& clip, double frame_ms, double hop_ms) {
    if (!(hop_ms > 0.0) || frame_ms < hop_ms) {
        throw ConfigError("require frame_ms >= hop_ms > 0");
    }
    std::size_t frame_len = seconds_to_samples(frame_ms * 1e-3, clip.sample_rate);
    std::size_t hop_len = seconds_to_samples(hop_ms * 1e-3, clip.sample_rate);
    if (frame_len < 2 || hop_len < 1) throw ConfigError("frame/hop too short for sample rate");
    if (clip.size() < frame_len) throw AudioError("clip shorter than one frame");

    FrameFeatures ff;
    ff.frame_ms = frame_ms;
    ff.hop_ms = hop_ms;
    std::size_t frames = 1 + (clip.size() - frame_len) / hop_len;
    ff.energy.resize(frames);
    ff.zcr.resize(frames);
    for (std::size_t k = 0; k < frames; ++k) {
        const float* s = clip.samples.data() + k * hop_len;
        double acc = 0.0;
        std::size_t crossings = 0;
        for (std::size_t i = 0; i < frame_len; ++i) {
            acc += static_cast<double>(s[i]) * static_cast<double>(s[i]);
            if (i + 1 < frame_len && s[i] * s[i + 1] < 0.0f) ++crossings;
        }
        ff.energy[k] = acc / static_cast<double>(frame_len);
        ff.zcr[k] = static_cast<double>(crossings) / static_cast<double>(frame_len - 1);
    }
    return ff;
}

double percentile(std::span<const double> values, double p) {
    if (values.empty()) throw DataError("percentile of empty series");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() == 1) return sorted[0];
    double h = (static_cast<double>(sorted.size()) - 1.0) * p / 100.0;
    h = std::clamp(h, 0.0, static_cast<double>(sorted.size()) - 1.0);
    std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double dynamic_threshold(std::span<const double> global_energy) {
    if (global_energy.empty()) throw DataError("dynamic_threshold needs a non-empty series");
    double p5 = percentile(global_energy, 5.0);
    double p95 = percentile(global_energy, 95.0);
    return p5 + 0.15 * (p95 - p5);
}

}  // namespace duplex
