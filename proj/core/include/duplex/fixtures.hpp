#pragma once

#include <cstdint>
#include <filesystem>

#include "duplex/audio.hpp"
#include "duplex/scenario.hpp"

namespace duplex {

/// Parameters for the synthetic demo asset bank: tone-burst "speech" with
/// exact word timings, pseudo-random noise beds, parametric echo paths and
/// agent playback clips. Enough to drive the whole pipeline end to end
/// without any external corpus.
struct FixtureSpec {
    std::size_t speakers = 4;
    std::size_t completes_per_speaker = 5;
    std::size_t incompletes_per_speaker = 4;
    std::size_t interrupts_per_speaker = 3;
    std::size_t backchannels_per_speaker = 2;
    std::size_t interference_utterances = 10;
    std::size_t noise_files = 4;
    std::size_t impulse_responses = 3;
    std::size_t agent_responses = 4;
    int sample_rate = kDefaultSampleRate;
    std::uint64_t seed = 20240601;
};

/// Generate the asset bank under `dir` and write the pool manifests
/// ({speech,interference,noise,irs,agent,references}.jsonl). Returns the
/// loaded pools.
AssetPools make_demo_assets(const std::filesystem::path& dir, const FixtureSpec& spec = {});

/// A tone burst with linear attack/release ramps, planted at `offset_s`.
void plant_tone(Waveform& w, double offset_s, double duration_s, double freq_hz,
                double amplitude, double ramp_s = 0.004);

}  // namespace duplex
