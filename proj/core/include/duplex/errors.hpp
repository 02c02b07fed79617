#pragma once

#include <stdexcept>
#include <string>

namespace duplex {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid arguments, malformed configuration, bad ranges.
struct ConfigError : Error {
    using Error::Error;
};

/// Malformed or inconsistent input data (manifests, transcripts, sessions).
struct DataError : Error {
    using Error::Error;
};

/// DSP precondition violations (silent stems, bad offsets, empty kernels).
struct AudioError : Error {
    using Error::Error;
};

struct NoiseSilent : AudioError {
    NoiseSilent() : AudioError("noise has zero RMS") {}
};

struct TargetSilent : AudioError {
    TargetSilent() : AudioError("target active region has zero RMS") {}
};

struct OffsetOutOfRange : AudioError {
    explicit OffsetOutOfRange(const std::string& msg) : AudioError(msg) {}
};

/// A frontend output stream broke the chunk protocol; the session is failed.
struct ProtocolError : Error {
    using Error::Error;
};

}  // namespace duplex
