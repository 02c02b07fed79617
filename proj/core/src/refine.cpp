#include "duplex/refine.hpp"

#include <algorithm>
#include <cmath>

#include "duplex/features.hpp"

namespace duplex {

namespace {

// Frames below the energy threshold but rich in high-frequency content get
// absorbed into adjacent voiced runs; this keeps fricative onsets/offsets.
void absorb_high_zcr(std::vector<bool>& voiced, const FrameFeatures& ff, double zcr_absorb) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t k = 0; k < voiced.size(); ++k) {
            if (voiced[k] || ff.zcr[k] <= zcr_absorb) continue;
            bool next_to_voiced = (k > 0 && voiced[k - 1]) ||
                                  (k + 1 < voiced.size() && voiced[k + 1]);
            if (next_to_voiced) {
                voiced[k] = true;
                changed = true;
            }
        }
    }
}

// Sample-precise edge search inside one frame: first/last sample whose
// magnitude reaches the amplitude implied by the energy threshold.
double onset_in_frame(const Waveform& clip, std::size_t frame_start, std::size_t frame_len,
                      double amp_threshold) {
    std::size_t end = std::min(frame_start + frame_len, clip.size());
    for (std::size_t i = frame_start; i < end; ++i) {
        if (std::abs(static_cast<double>(clip.samples[i])) >= amp_threshold) {
            return static_cast<double>(i) / clip.sample_rate;
        }
    }
    return static_cast<double>(frame_start) / clip.sample_rate;
}

double offset_in_frame(const Waveform& clip, std::size_t frame_start, std::size_t frame_len,
                       double amp_threshold) {
    std::size_t end = std::min(frame_start + frame_len, clip.size());
    for (std::size_t i = end; i > frame_start; --i) {
        if (std::abs(static_cast<double>(clip.samples[i - 1])) >= amp_threshold) {
            return static_cast<double>(i) / clip.sample_rate;
        }
    }
    return static_cast<double>(end) / clip.sample_rate;
}

}  // namespace

WordBounds refine_word(const Waveform& clip, double threshold, const RefineConfig& cfg) {
    FrameFeatures ff = frame_features(clip, cfg.frame_ms, cfg.hop_ms);
    std::vector<bool> voiced(ff.frame_count());
    bool any = false;
    for (std::size_t k = 0; k < voiced.size(); ++k) {
        voiced[k] = ff.energy[k] >= threshold;
        any = any || voiced[k];
    }
    if (!any) throw NoVoicedRegion();
    absorb_high_zcr(voiced, ff, cfg.zcr_absorb);

    std::size_t first = 0;
    while (!voiced[first]) ++first;
    std::size_t last = voiced.size() - 1;
    while (!voiced[last]) --last;

    std::size_t frame_len = seconds_to_samples(cfg.frame_ms * 1e-3, clip.sample_rate);
    std::size_t hop_len = seconds_to_samples(cfg.hop_ms * 1e-3, clip.sample_rate);
    double amp = std::sqrt(threshold);

    double t_on = onset_in_frame(clip, first * hop_len, frame_len, amp);
    double t_off = offset_in_frame(clip, last * hop_len, frame_len, amp);
    if (t_off < t_on) std::swap(t_on, t_off);

    double pad = cfg.pad_ms * 1e-3;
    WordBounds b;
    b.start = std::max(0.0, t_on - pad);
    b.end = std::min(clip.duration_s(), t_off + pad);
    if (!(b.start < b.end)) {
        b.start = std::max(0.0, t_on);
        b.end = std::min(clip.duration_s(), std::max(t_off, b.start + 1e-4));
    }
    return b;
}

TimedTranscript refine_transcript(const Waveform& w, const TimedTranscript& coarse,
                                  const RefineConfig& cfg) {
    coarse.validate();
    double dur = w.duration_s();
    for (const auto& e : coarse.entries) {
        if (e.start < 0.0 || e.end > dur + 1e-9) {
            throw DataError("coarse entry [" + std::to_string(e.start) + ", " +
                            std::to_string(e.end) + "] outside waveform of " +
                            std::to_string(dur) + " s");
        }
    }

    TimedTranscript refined;
    refined.source = TimedTranscript::Source::Refined;
    if (coarse.entries.empty()) return refined;

    double threshold = dynamic_threshold(frame_features(w, cfg.frame_ms, cfg.hop_ms).energy);

    for (const auto& e : coarse.entries) {
        WordEntry out = e;
        out.fallback = false;
        std::size_t a = seconds_to_samples(e.start, w.sample_rate);
        std::size_t b = std::min(seconds_to_samples(e.end, w.sample_rate), w.size());
        Waveform clip{std::vector<float>(w.samples.begin() + a, w.samples.begin() + b),
                      w.sample_rate};
        try {
            WordBounds bounds = refine_word(clip, threshold, cfg);
            out.start = e.start + bounds.start;
            out.end = e.start + bounds.end;
        } catch (const AudioError&) {
            // NoVoicedRegion or a clip shorter than one frame: keep the
            // coarse boundaries so transcript/audio alignment survives.
            out.fallback = true;
        }
        refined.entries.push_back(out);
    }

    // Padding can push adjacent words into each other; share the midpoint.
    for (std::size_t i = 0; i + 1 < refined.entries.size(); ++i) {
        WordEntry& a = refined.entries[i];
        WordEntry& b = refined.entries[i + 1];
        if (a.end > b.start) {
            double mid = 0.5 * (a.end + b.start);
            mid = std::clamp(mid, a.start + 1e-4, b.end - 1e-4);
            a.end = mid;
            b.start = mid;
        }
    }
    refined.validate();
    return refined;
}

}  // namespace duplex
