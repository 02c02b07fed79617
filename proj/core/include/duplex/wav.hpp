#pragma once

#include <filesystem>

#include "duplex/audio.hpp"

namespace duplex {

/// Read a RIFF/PCM WAV file. Only 16-bit signed little-endian mono is
/// accepted. Throws DataError on malformed or unsupported files.
Waveform read_wav(const std::filesystem::path& path);

/// Write 16-bit signed little-endian mono PCM. Samples must already be in
/// [-1, 1]; out-of-range input is an error, never a silent wrap.
void write_wav(const std::filesystem::path& path, const Waveform& w);

/// Linear-interpolation resampler.
Waveform resample_linear(const Waveform& w, int target_rate);

/// read_wav plus resampling to `target_rate` when the file rate differs.
Waveform load_waveform(const std::filesystem::path& path, int target_rate = kDefaultSampleRate);

}  // namespace duplex
