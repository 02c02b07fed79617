#include "duplex/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "duplex/errors.hpp"

namespace duplex {

Waveform Waveform::silence_s(double seconds, int rate) {
    return silence(seconds_to_samples(seconds, rate), rate);
}

std::size_t seconds_to_samples(double t, int sample_rate) {
    if (t < 0.0) throw AudioError("negative time offset");
    return static_cast<std::size_t>(std::llround(t * sample_rate));
}

namespace {

double sum_squares(std::span<const float> s) {
    double acc = 0.0;
    for (float v : s) acc += static_cast<double>(v) * static_cast<double>(v);
    return acc;
}

std::pair<std::size_t, std::size_t> interval_to_span(const Waveform& w, TimeInterval r) {
    if (r.start < 0.0 || r.end < r.start) throw AudioError("invalid time interval");
    std::size_t a = seconds_to_samples(r.start, w.sample_rate);
    std::size_t b = seconds_to_samples(r.end, w.sample_rate);
    if (b > w.size()) throw AudioError("interval extends past end of waveform");
    return {a, b};
}

}  // namespace

double rms(const Waveform& w, std::optional<TimeInterval> range) {
    std::size_t a = 0, b = w.size();
    if (range) std::tie(a, b) = interval_to_span(w, *range);
    if (b <= a) return 0.0;
    double ms = sum_squares(std::span(w.samples).subspan(a, b - a)) / static_cast<double>(b - a);
    return std::sqrt(ms);
}

double rms_over(const Waveform& w, std::span<const TimeInterval> intervals) {
    double acc = 0.0;
    std::size_t count = 0;
    for (const auto& r : intervals) {
        auto [a, b] = interval_to_span(w, r);
        if (b <= a) continue;
        acc += sum_squares(std::span(w.samples).subspan(a, b - a));
        count += b - a;
    }
    if (count == 0) return 0.0;
    return std::sqrt(acc / static_cast<double>(count));
}

Waveform fit_length(const Waveform& w, std::size_t n, std::size_t offset) {
    if (w.empty()) throw AudioError("cannot tile an empty waveform");
    Waveform out;
    out.sample_rate = w.sample_rate;
    out.samples.resize(n);
    std::size_t m = w.size();
    std::size_t pos = offset % m;
    for (std::size_t i = 0; i < n; ++i) {
        out.samples[i] = w.samples[pos];
        if (++pos == m) pos = 0;
    }
    return out;
}

MixResult mix_at_snr(const Waveform& target, const Waveform& noise, double snr_db,
                     std::span<const TimeInterval> active_region, std::size_t noise_offset) {
    Waveform fitted = fit_length(noise, target.size(), noise_offset);
    double noise_rms = rms(fitted);
    if (noise_rms <= 0.0) throw NoiseSilent();
    double target_rms = active_region.empty() ? rms(target) : rms_over(target, active_region);
    if (target_rms <= 0.0) throw TargetSilent();

    double gain = (target_rms / noise_rms) * std::pow(10.0, -snr_db / 20.0);
    MixResult result;
    result.noise_gain = gain;
    result.mixed = target;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        result.mixed.samples[i] +=
            static_cast<float>(gain * static_cast<double>(fitted.samples[i]));
    }
    return result;
}

MixResult mix_at_snr(const Waveform& target, const Waveform& noise, double snr_db,
                     TimeInterval active_region, std::size_t noise_offset) {
    return mix_at_snr(target, noise, snr_db, std::span(&active_region, 1), noise_offset);
}

ConvolutionResult convolve_ir(const Waveform& signal, std::span<const float> ir) {
    if (ir.empty()) throw AudioError("impulse response is empty");
    ConvolutionResult result;
    result.wave.sample_rate = signal.sample_rate;
    if (signal.empty()) return result;

    std::size_t n = signal.size(), m = ir.size();
    std::vector<double> acc(n + m - 1, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double h = ir[j];
        if (h == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) acc[i + j] += h * signal.samples[i];
    }
    double peak = 0.0;
    for (double v : acc) peak = std::max(peak, std::abs(v));
    result.peak = peak;
    double scale = 1.0;
    if (peak > 1.0) {
        scale = 1.0 / peak;
        result.normalized = true;
    }
    result.wave.samples.resize(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) {
        result.wave.samples[i] = static_cast<float>(acc[i] * scale);
    }
    return result;
}

Waveform soft_clip(const Waveform& w, double drive) {
    if (!(drive > 0.0)) throw AudioError("soft_clip drive must be positive");
    Waveform out;
    out.sample_rate = w.sample_rate;
    out.samples.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        out.samples[i] = static_cast<float>(std::tanh(drive * static_cast<double>(w.samples[i])));
    }
    return out;
}

void overlay_into(Waveform& base, const Waveform& insert, double offset_s) {
    if (offset_s < 0.0) throw OffsetOutOfRange("overlay offset is negative");
    std::size_t off = seconds_to_samples(offset_s, base.sample_rate);
    if (off + insert.size() > base.size()) {
        throw OffsetOutOfRange("overlay extends past end of base waveform");
    }
    // Sums may transiently exceed unity; the session renderer rescales.
    for (std::size_t i = 0; i < insert.size(); ++i) {
        base.samples[off + i] += insert.samples[i];
    }
}

Waveform overlay_at(const Waveform& base, const Waveform& insert, double offset_s) {
    Waveform out = base;
    overlay_into(out, insert, offset_s);
    return out;
}

std::size_t chunk_length_samples(int chunk_ms, int sample_rate) {
    if (chunk_ms <= 0) throw AudioError("chunk duration must be positive");
    return static_cast<std::size_t>(chunk_ms) * static_cast<std::size_t>(sample_rate) / 1000;
}

std::size_t chunk_count(std::size_t n, int chunk_ms, int sample_rate) {
    std::size_t len = chunk_length_samples(chunk_ms, sample_rate);
    return (n + len - 1) / len;
}

std::vector<Chunk> segment_chunks(const Waveform& w, int chunk_ms) {
    std::size_t len = chunk_length_samples(chunk_ms, w.sample_rate);
    std::vector<Chunk> chunks;
    if (w.empty()) return chunks;
    std::size_t total = chunk_count(w.size(), chunk_ms, w.sample_rate);
    chunks.reserve(total);
    for (std::size_t k = 0; k < total; ++k) {
        Chunk c;
        c.index = k;
        c.samples.assign(len, 0.0f);
        std::size_t begin = k * len;
        std::size_t avail = std::min(len, w.size() - begin);
        std::memcpy(c.samples.data(), w.samples.data() + begin, avail * sizeof(float));
        c.padded_samples = len - avail;
        chunks.push_back(std::move(c));
    }
    return chunks;
}

void apply_gain(Waveform& w, double factor) {
    for (float& v : w.samples) v = static_cast<float>(factor * static_cast<double>(v));
}

double peak_magnitude(const Waveform& w) {
    double peak = 0.0;
    for (float v : w.samples) peak = std::max(peak, std::abs(static_cast<double>(v)));
    return peak;
}

std::vector<float> make_exponential_ir(std::size_t taps, double decay_ms, int sample_rate,
                                       Rng& rng) {
    if (taps == 0) throw AudioError("impulse response needs at least one tap");
    std::vector<float> ir(taps, 0.0f);
    ir[0] = 1.0f;
    double tau = decay_ms * 1e-3 * sample_rate;
    for (std::size_t n = 1; n < taps; ++n) {
        double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
        double level = rng.uniform(0.05, 0.4) * std::exp(-static_cast<double>(n) / tau);
        ir[n] = static_cast<float>(sign * level);
    }
    return ir;
}

}  // namespace duplex
