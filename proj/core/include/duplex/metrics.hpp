#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "duplex/controller.hpp"
#include "duplex/labeler.hpp"
#include "duplex/tokens.hpp"

namespace duplex {

/// Chunk-level VAD confusion counts; TALK is the positive class.
struct VadConfusion {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    double accuracy() const;
    /// With zero predicted positives: 1.0 when fn == 0 (vacuously clean),
    /// else 0.0.
    double precision() const;
    /// With zero reference positives: 1.0 (vacuous).
    double recall() const;
    double f1() const;
};

/// Harmonic mean of precision/recall expressed in the same unit as the
/// inputs (ratios or percentages).
double f1_score(double precision, double recall);

VadConfusion vad_confusion(const std::vector<VadState>& pred, const std::vector<VadState>& ref);

/// Unit-cost Levenshtein distance over code points.
std::size_t edit_distance(const std::vector<char32_t>& a, const std::vector<char32_t>& b);

/// Character-level error rate after whitespace/punctuation normalization:
/// edit_distance / len(ref). The reference must normalize non-empty.
double edit_distance_wer(const std::string& hyp, const std::string& ref);

struct ClassAccuracy {
    std::size_t correct = 0;
    std::size_t support = 0;

    double accuracy() const { return static_cast<double>(correct) / support; }
};

/// Per-class accuracy with supports; classes absent from the reference are
/// omitted. Lengths must match.
std::map<TurnState, ClassAccuracy> turn_accuracy(const std::vector<TurnState>& pred,
                                                 const std::vector<TurnState>& ref);

struct WerTotals {
    std::size_t distance = 0;
    std::size_t ref_len = 0;
    std::size_t utterances = 0;
    std::size_t missing_hyp = 0;  // reference spans with no predicted span

    double wer() const { return ref_len == 0 ? 0.0 : static_cast<double>(distance) / ref_len; }
};

struct BargeInStats {
    std::map<int, std::size_t> latency_chunks;  // latency -> count
    std::size_t interrupts = 0;
    std::size_t halted = 0;
    std::size_t missed = 0;  // labeled interrupts with no HaltPlayback after them
};

struct MetricsReport {
    VadConfusion vad;
    WerTotals wer;
    std::map<TurnState, ClassAccuracy> turn;
    BargeInStats barge_in;
    std::size_t sessions_evaluated = 0;
    std::size_t sessions_failed = 0;
};

/// Score traces against their ground-truth samples, matched by session id.
/// Failed sessions are excluded from every metric and only counted.
/// Throws DataError on unmatched ids or an empty session set.
MetricsReport run_evaluation(const std::vector<SessionTrace>& traces,
                             const std::vector<TrainingSample>& ground_truth);

void write_report_json(const std::filesystem::path& path, const MetricsReport& report);
MetricsReport read_report_json(const std::filesystem::path& path);

/// Human-readable summary table.
std::string format_report(const MetricsReport& report);

}  // namespace duplex
