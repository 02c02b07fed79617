#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "duplex/rng.hpp"

namespace duplex {

inline constexpr int kDefaultSampleRate = 16000;

/// Half-open time interval [start, end) in seconds.
struct TimeInterval {
    double start = 0.0;
    double end = 0.0;

    double duration() const { return end - start; }
};

/// Mono PCM sample buffer. All DSP in the library operates on this type.
struct Waveform {
    std::vector<float> samples;
    int sample_rate = kDefaultSampleRate;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }

    static Waveform silence(std::size_t n, int rate = kDefaultSampleRate) {
        return Waveform{std::vector<float>(n, 0.0f), rate};
    }
    static Waveform silence_s(double seconds, int rate = kDefaultSampleRate);
};

/// Fixed-duration slice of a session stream. Only the final chunk of a
/// stream may carry padding.
struct Chunk {
    std::vector<float> samples;
    std::size_t index = 0;
    std::size_t padded_samples = 0;
};

std::size_t seconds_to_samples(double t, int sample_rate);

/// Root-mean-square over an optional interval (whole waveform by default).
/// Empty range yields 0. Throws AudioError if the range is out of bounds.
double rms(const Waveform& w, std::optional<TimeInterval> range = std::nullopt);

/// RMS over the union of intervals (used for active-speech-region energy).
double rms_over(const Waveform& w, std::span<const TimeInterval> intervals);

struct MixResult {
    Waveform mixed;
    double noise_gain = 0.0;
};

/// Adds `noise` to `target` so that the target's active-region RMS sits
/// `snr_db` decibels above the scaled noise RMS. Noise is circularly tiled
/// or cropped to the target length starting at `noise_offset` samples.
/// Throws NoiseSilent / TargetSilent when either level is zero.
MixResult mix_at_snr(const Waveform& target, const Waveform& noise, double snr_db,
                     std::span<const TimeInterval> active_region,
                     std::size_t noise_offset = 0);
MixResult mix_at_snr(const Waveform& target, const Waveform& noise, double snr_db,
                     TimeInterval active_region, std::size_t noise_offset = 0);

/// Circularly tile or crop `w` to exactly `n` samples, reading from
/// `offset` (mod length).
Waveform fit_length(const Waveform& w, std::size_t n, std::size_t offset = 0);

struct ConvolutionResult {
    Waveform wave;
    bool normalized = false;  // true when the raw result peaked above 1.0
    double peak = 0.0;        // peak magnitude before normalization
};

/// Full linear convolution; output length = len(signal) + len(ir) - 1.
/// The result is peak-normalized only when its magnitude exceeds 1.0.
ConvolutionResult convolve_ir(const Waveform& signal, std::span<const float> ir);

/// Memoryless saturating nonlinearity y = tanh(drive * x): odd, monotone,
/// output in (-1, 1). Models the nonlinear part of an echo path.
Waveform soft_clip(const Waveform& w, double drive);

/// Sample-wise sum of `insert` into a copy of `base` starting at
/// `offset_s` seconds. The insert must fit inside the base.
Waveform overlay_at(const Waveform& base, const Waveform& insert, double offset_s);

/// In-place variant used by the session renderer to avoid stem copies.
void overlay_into(Waveform& base, const Waveform& insert, double offset_s);

/// Split into fixed-duration chunks; the final chunk is zero-padded.
/// Empty input yields zero chunks.
std::vector<Chunk> segment_chunks(const Waveform& w, int chunk_ms = 600);

/// Number of chunks segment_chunks would produce for `n` samples.
std::size_t chunk_count(std::size_t n, int chunk_ms, int sample_rate);
std::size_t chunk_length_samples(int chunk_ms, int sample_rate);

/// Scale all samples by `factor`.
void apply_gain(Waveform& w, double factor);

double peak_magnitude(const Waveform& w);

/// Parametric echo-path impulse response: unit direct path followed by an
/// exponentially decaying random tail. Peak magnitude is 1.
std::vector<float> make_exponential_ir(std::size_t taps, double decay_ms, int sample_rate,
                                       Rng& rng);

}  // namespace duplex
