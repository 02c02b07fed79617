#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace duplex {

struct WordEntry {
    std::string text;
    double start = 0.0;  // seconds
    double end = 0.0;
    bool fallback = false;  // refinement kept the coarse boundaries
};

/// Ordered word/character entries with start/end times for one utterance.
struct TimedTranscript {
    enum class Source { Coarse, Refined };

    std::vector<WordEntry> entries;
    Source source = Source::Coarse;

    /// Throws DataError unless entries are strictly ordered, non-overlapping
    /// and each has start < end.
    void validate() const;

    double speech_start() const;
    double speech_end() const;
};

/// One line of a transcript manifest (coarse input or refined output).
struct TranscriptRecord {
    std::string audio_path;
    std::string speaker_id;
    std::string text;
    TimedTranscript transcript;
};

std::vector<TranscriptRecord> read_transcript_jsonl(const std::filesystem::path& path);
void write_transcript_jsonl(const std::filesystem::path& path,
                            const std::vector<TranscriptRecord>& records);

}  // namespace duplex
