#include "duplex/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "duplex/errors.hpp"
#include "duplex/text.hpp"

namespace duplex {

using nlohmann::json;

double VadConfusion::accuracy() const {
    std::size_t n = total();
    if (n == 0) throw DataError("vad confusion over zero chunks");
    return static_cast<double>(tp + tn) / static_cast<double>(n);
}

double VadConfusion::precision() const {
    if (tp + fp == 0) return fn == 0 ? 1.0 : 0.0;
    return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double VadConfusion::recall() const {
    if (tp + fn == 0) return 1.0;
    return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double f1_score(double precision, double recall) {
    if (precision + recall <= 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double VadConfusion::f1() const { return f1_score(precision(), recall()); }

VadConfusion vad_confusion(const std::vector<VadState>& pred, const std::vector<VadState>& ref) {
    if (pred.size() != ref.size()) {
        throw DataError("vad metric length mismatch: " + std::to_string(pred.size()) + " vs " +
                        std::to_string(ref.size()));
    }
    VadConfusion c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        bool p = pred[i] == VadState::Talk;
        bool r = ref[i] == VadState::Talk;
        if (p && r) ++c.tp;
        else if (p && !r) ++c.fp;
        else if (!p && r) ++c.fn;
        else ++c.tn;
    }
    return c;
}

std::size_t edit_distance(const std::vector<char32_t>& a, const std::vector<char32_t>& b) {
    std::size_t n = a.size(), m = b.size();
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double edit_distance_wer(const std::string& hyp, const std::string& ref) {
    std::vector<char32_t> r = normalize_for_wer(ref);
    if (r.empty()) throw DataError("reference is empty after normalization");
    std::vector<char32_t> h = normalize_for_wer(hyp);
    return static_cast<double>(edit_distance(h, r)) / static_cast<double>(r.size());
}

std::map<TurnState, ClassAccuracy> turn_accuracy(const std::vector<TurnState>& pred,
                                                 const std::vector<TurnState>& ref) {
    if (pred.size() != ref.size()) {
        throw DataError("turn metric length mismatch: " + std::to_string(pred.size()) + " vs " +
                        std::to_string(ref.size()));
    }
    std::map<TurnState, ClassAccuracy> by_class;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        ClassAccuracy& c = by_class[ref[i]];
        ++c.support;
        if (pred[i] == ref[i]) ++c.correct;
    }
    return by_class;
}

MetricsReport run_evaluation(const std::vector<SessionTrace>& traces,
                             const std::vector<TrainingSample>& ground_truth) {
    if (traces.empty()) throw DataError("no traces to evaluate");
    std::unordered_map<std::string, const TrainingSample*> by_id;
    for (const auto& s : ground_truth) by_id[s.id] = &s;

    MetricsReport rep;
    std::vector<TurnState> turn_pred, turn_ref;

    for (const SessionTrace& trace : traces) {
        auto it = by_id.find(trace.session_id);
        if (it == by_id.end()) {
            throw DataError("trace for unknown session id: " + trace.session_id);
        }
        const TrainingSample& sample = *it->second;
        if (trace.failed) {
            ++rep.sessions_failed;
            continue;
        }
        if (trace.steps.size() != sample.labels.size()) {
            throw DataError("trace for " + trace.session_id + " has " +
                            std::to_string(trace.steps.size()) + " steps for " +
                            std::to_string(sample.labels.size()) + " labels");
        }
        ++rep.sessions_evaluated;

        for (std::size_t k = 0; k < sample.labels.size(); ++k) {
            const ChunkEvent& ref = sample.labels[k];
            const FrontendOutput& out = trace.steps[k].output;

            bool p = out.vad == VadState::Talk;
            bool r = ref.vad == VadState::Talk;
            if (p && r) ++rep.vad.tp;
            else if (p && !r) ++rep.vad.fp;
            else if (!p && r) ++rep.vad.fn;
            else ++rep.vad.tn;

            if (ref.asr_text) {
                std::vector<char32_t> rcp = normalize_for_wer(*ref.asr_text);
                std::vector<char32_t> hcp = normalize_for_wer(out.asr_text.value_or(""));
                rep.wer.distance += edit_distance(hcp, rcp);
                rep.wer.ref_len += rcp.size();
                ++rep.wer.utterances;
                if (!out.asr_text) ++rep.wer.missing_hyp;
            }
            if (ref.turn) {
                turn_ref.push_back(*ref.turn);
                // a missing prediction scores as a wrong class
                turn_pred.push_back(out.turn.value_or(*ref.turn == TurnState::Complete
                                                          ? TurnState::InComplete
                                                          : TurnState::Complete));
            }
        }

        // Barge-in latency: labeled interrupt transition -> HaltPlayback.
        std::vector<std::size_t> halts;
        for (const auto& step : trace.steps) {
            for (const auto& a : step.actions) {
                if (a.type == ActionType::HaltPlayback) halts.push_back(step.chunk_index);
            }
        }
        std::size_t next_halt = 0;
        for (const ChunkEvent& ref : sample.labels) {
            if (!ref.turn || *ref.turn != TurnState::Interrupt) continue;
            ++rep.barge_in.interrupts;
            while (next_halt < halts.size() && halts[next_halt] < ref.index) ++next_halt;
            if (next_halt < halts.size()) {
                int latency = static_cast<int>(halts[next_halt] - ref.index);
                ++rep.barge_in.latency_chunks[latency];
                ++rep.barge_in.halted;
                ++next_halt;
            } else {
                ++rep.barge_in.missed;
            }
        }
    }

    if (rep.sessions_evaluated == 0) {
        throw DataError("every session failed; nothing to evaluate");
    }
    rep.turn = turn_accuracy(turn_pred, turn_ref);
    return rep;
}

void write_report_json(const std::filesystem::path& path, const MetricsReport& rep) {
    json j;
    j["vad"] = {{"tp", rep.vad.tp},
                {"fp", rep.vad.fp},
                {"tn", rep.vad.tn},
                {"fn", rep.vad.fn},
                {"accuracy", rep.vad.accuracy()},
                {"precision", rep.vad.precision()},
                {"recall", rep.vad.recall()},
                {"f1", rep.vad.f1()}};
    j["wer"] = {{"distance", rep.wer.distance},
                {"ref_len", rep.wer.ref_len},
                {"utterances", rep.wer.utterances},
                {"missing_hyp", rep.wer.missing_hyp},
                {"wer", rep.wer.wer()}};
    json turn = json::object();
    for (const auto& [cls, acc] : rep.turn) {
        turn[std::string(to_string(cls))] = {{"correct", acc.correct},
                                             {"support", acc.support},
                                             {"accuracy", acc.accuracy()}};
    }
    j["turn_accuracy"] = std::move(turn);
    json lat = json::object();
    for (const auto& [l, n] : rep.barge_in.latency_chunks) lat[std::to_string(l)] = n;
    j["barge_in"] = {{"latency_chunks", std::move(lat)},
                     {"interrupts", rep.barge_in.interrupts},
                     {"halted", rep.barge_in.halted},
                     {"missed", rep.barge_in.missed}};
    j["sessions"] = {{"evaluated", rep.sessions_evaluated}, {"failed", rep.sessions_failed}};

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write report: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw DataError("failed writing report: " + path.string());
}

MetricsReport read_report_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open report: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    MetricsReport rep;
    rep.vad.tp = j.at("vad").at("tp").get<std::size_t>();
    rep.vad.fp = j.at("vad").at("fp").get<std::size_t>();
    rep.vad.tn = j.at("vad").at("tn").get<std::size_t>();
    rep.vad.fn = j.at("vad").at("fn").get<std::size_t>();
    rep.wer.distance = j.at("wer").at("distance").get<std::size_t>();
    rep.wer.ref_len = j.at("wer").at("ref_len").get<std::size_t>();
    rep.wer.utterances = j.at("wer").at("utterances").get<std::size_t>();
    rep.wer.missing_hyp = j.at("wer").at("missing_hyp").get<std::size_t>();
    for (const auto& [name, v] : j.at("turn_accuracy").items()) {
        ClassAccuracy acc;
        acc.correct = v.at("correct").get<std::size_t>();
        acc.support = v.at("support").get<std::size_t>();
        rep.turn[turn_from_string(name)] = acc;
    }
    for (const auto& [lat, n] : j.at("barge_in").at("latency_chunks").items()) {
        rep.barge_in.latency_chunks[std::stoi(lat)] = n.get<std::size_t>();
    }
    rep.barge_in.interrupts = j.at("barge_in").at("interrupts").get<std::size_t>();
    rep.barge_in.halted = j.at("barge_in").at("halted").get<std::size_t>();
    rep.barge_in.missed = j.at("barge_in").at("missed").get<std::size_t>();
    rep.sessions_evaluated = j.at("sessions").at("evaluated").get<std::size_t>();
    rep.sessions_failed = j.at("sessions").at("failed").get<std::size_t>();
    return rep;
}

std::string format_report(const MetricsReport& rep) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(4);
    os << "sessions evaluated " << rep.sessions_evaluated << ", failed " << rep.sessions_failed
       << "\n";
    os << "vad   acc " << rep.vad.accuracy() << "  prec " << rep.vad.precision() << "  rec "
       << rep.vad.recall() << "  f1 " << rep.vad.f1() << "  (chunks " << rep.vad.total()
       << ")\n";
    os << "wer   " << rep.wer.wer() << "  (edits " << rep.wer.distance << " / ref chars "
       << rep.wer.ref_len << ", utterances " << rep.wer.utterances << ")\n";
    os << "turn  ";
    if (rep.turn.empty()) os << "(no turn events)";
    for (const auto& [cls, acc] : rep.turn) {
        os << to_string(cls) << " " << acc.accuracy() << " (" << acc.correct << "/"
           << acc.support << ")  ";
    }
    os << "\n";
    os << "barge-in  interrupts " << rep.barge_in.interrupts << "  halted "
       << rep.barge_in.halted << "  missed " << rep.barge_in.missed << "  latencies {";
    bool first = true;
    for (const auto& [l, n] : rep.barge_in.latency_chunks) {
        if (!first) os << ", ";
        os << l << ": " << n;
        first = false;
    }
    os << "}\n";
    return os.str();
}

}  // namespace duplex
