#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace duplex {

/// Inclusive numeric range; degenerate (lo == hi) means "fixed".
struct Range {
    double lo = 0.0;
    double hi = 0.0;

    bool degenerate() const { return lo == hi; }
};

/// All tunables of the synthesis/labeling/simulation pipeline in one
/// declarative object. Loadable from JSON; command line flags override.
struct PipelineConfig {
    int sample_rate = 16000;
    int chunk_ms = 600;

    Range snr_db{0.0, 20.0};              // noise vs target active-region RMS
    Range interferer_snr_db{0.0, 15.0};   // per competing talker
    Range interferer_count{1.0, 2.0};
    Range echo_to_target_db{0.0, 10.0};   // echo level below target speech
    Range gap_s{0.5, 3.0};                // silence before/between/after utterances
    double session_target_s = 50.0;
    double session_tolerance = 0.2;       // +/- fraction on session_target_s
    double nominal_rms = 0.05;            // level anchor for sessions with no target

    // timestamp refinement
    double frame_ms = 25.0;
    double hop_ms = 10.0;
    double pad_ms = 15.0;
    double zcr_absorb = 0.35;

    // chunk labeling
    int overlap_min_ms = 60;

    // controller simulation
    double chars_per_second = 8.0;  // simulated playback speed of answers
    double alpha = 0.5;             // text/state loss weight

    double voice_swap_prob = 0.0;   // speaker-consistency negatives
    double echo_drive = 2.0;        // echo-path saturation drive

    std::string system_prompt =
        "You are the streaming speech front end of a voice assistant. Anchor on the "
        "reference speaker, report voice activity per chunk, transcribe finished "
        "utterances, classify turn intent, and answer completed queries.";

    std::uint64_t seed = 1234;

    /// Throws ConfigError when ranges are inverted or values are senseless.
    void validate() const;
};

PipelineConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const PipelineConfig& cfg);

}  // namespace duplex
