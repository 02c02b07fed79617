#include "duplex/labeler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "duplex/errors.hpp"

namespace duplex {

using nlohmann::json;

namespace {

double overlap_s(double a0, double a1, double b0, double b1) {
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

}  // namespace

std::vector<VadState> label_vad_chunks(const std::vector<UtteranceEvent>& events,
                                       double session_duration_s, int chunk_ms,
                                       int overlap_min_ms) {
    if (chunk_ms <= 0) throw ConfigError("chunk_ms must be positive");
    double chunk_s = chunk_ms * 1e-3;
    double min_overlap = overlap_min_ms * 1e-3;
    for (const auto& e : events) {
        if (e.start < -1e-9 || e.end > session_duration_s + 1e-9 || e.end <= e.start) {
            throw DataError("event [" + std::to_string(e.start) + ", " + std::to_string(e.end) +
                            "] outside session of " + std::to_string(session_duration_s) + " s");
        }
    }

    std::size_t chunks =
        static_cast<std::size_t>(std::ceil(session_duration_s / chunk_s - 1e-9));
    std::vector<VadState> labels(chunks, VadState::Sil);
    for (std::size_t k = 0; k < chunks; ++k) {
        double c0 = k * chunk_s;
        double c1 = c0 + chunk_s;
        double total = 0.0;
        for (const auto& e : events) total += overlap_s(c0, c1, e.start, e.end);
        if (total >= min_overlap - 1e-12) labels[k] = VadState::Talk;
    }
    return labels;
}

LabeledChunks attach_semantic_events(const std::vector<VadState>& vad_labels,
                                     const std::vector<UtteranceEvent>& events,
                                     int chunk_ms) {
    double chunk_s = chunk_ms * 1e-3;
    std::vector<UtteranceEvent> sorted = events;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.end < b.end; });

    LabeledChunks out;
    out.events.reserve(vad_labels.size() + 1);
    std::size_t next_event = 0;

    auto flush_finished = [&](ChunkEvent& chunk, double finished_before) {
        std::size_t first = next_event;
        std::string text;
        while (next_event < sorted.size() && sorted[next_event].end <= finished_before + 1e-9) {
            if (!text.empty()) text += ' ';
            text += sorted[next_event].text;
            ++next_event;
        }
        if (next_event == first) {
            throw DataError("TALK->SIL transition at chunk " + std::to_string(chunk.index) +
                            " has no finished utterance; label/event alignment is broken");
        }
        // Utterances fused into one talk run share a span; the last one's
        // turn decides the action.
        const UtteranceEvent& last = sorted[next_event - 1];
        chunk.asr_text = std::move(text);
        chunk.turn = last.turn;
        if (last.turn == TurnState::Complete || last.turn == TurnState::Interrupt) {
            chunk.answer_text = last.answer;
        }
        if (next_event - first > 1) ++out.fused_flushes;
    };

    for (std::size_t k = 0; k < vad_labels.size(); ++k) {
        ChunkEvent e;
        e.index = k;
        e.vad = vad_labels[k];
        bool transition = k > 0 && vad_labels[k - 1] == VadState::Talk &&
                          vad_labels[k] == VadState::Sil;
        if (transition) flush_finished(e, (k + 1) * chunk_s);
        out.events.push_back(std::move(e));
    }

    if (next_event < sorted.size()) {
        // Session ended while the target was still in TALK: append a
        // virtual silent chunk so the final utterance's span survives.
        if (vad_labels.empty() || vad_labels.back() != VadState::Talk) {
            throw DataError("unflushed utterance without a trailing TALK run");
        }
        ChunkEvent tail;
        tail.index = vad_labels.size();
        tail.vad = VadState::Sil;
        flush_finished(tail, std::numeric_limits<double>::infinity());
        out.events.push_back(std::move(tail));
        out.virtual_tail_chunks = 1;
    }
    return out;
}

std::size_t transition_chunk_for(const std::vector<UtteranceEvent>& events,
                                 std::size_t utterance_index, double session_duration_s,
                                 int chunk_ms, int overlap_min_ms) {
    if (utterance_index >= events.size()) throw DataError("utterance index out of range");
    auto vad = label_vad_chunks(events, session_duration_s, chunk_ms, overlap_min_ms);
    double chunk_s = chunk_ms * 1e-3;
    double end = events[utterance_index].end;
    for (std::size_t k = 1; k < vad.size(); ++k) {
        bool transition = vad[k - 1] == VadState::Talk && vad[k] == VadState::Sil;
        if (transition && (k + 1) * chunk_s >= end - 1e-9) return k;
    }
    return vad.size();  // flushes on the virtual tail chunk
}

TrainingSample emit_training_sample(const std::string& id, const std::string& ref_audio,
                                    const std::string& system_prompt,
                                    const std::string& mixture_audio, int chunk_ms,
                                    std::size_t audio_chunks, const LabeledChunks& labeled,
                                    const SampleMeta& meta) {
    if (audio_chunks == 0) throw DataError("session " + id + " has zero chunks");
    if (ref_audio.empty()) throw DataError("session " + id + " has no reference audio");
    if (labeled.events.size() != audio_chunks + labeled.virtual_tail_chunks) {
        throw DataError("session " + id + ": " + std::to_string(labeled.events.size()) +
                        " labels for " + std::to_string(audio_chunks) + " audio chunks (+" +
                        std::to_string(labeled.virtual_tail_chunks) + " virtual)");
    }
    TrainingSample s;
    s.id = id;
    s.ref_audio = ref_audio;
    s.system_prompt = system_prompt;
    s.mixture_audio = mixture_audio;
    s.chunk_ms = chunk_ms;
    s.chunk_count = labeled.events.size();
    s.virtual_tail_chunks = labeled.virtual_tail_chunks;
    s.labels = labeled.events;
    s.tokens = serialize(s.labels);
    s.meta = meta;
    s.meta.fused_flushes = labeled.fused_flushes;
    return s;
}

namespace {

json chunk_event_to_json(const ChunkEvent& e) {
    json j;
    j["index"] = e.index;
    j["vad"] = std::string(to_string(e.vad));
    if (e.asr_text) j["asr"] = *e.asr_text;
    if (e.turn) j["turn"] = std::string(to_string(*e.turn));
    if (e.answer_text) j["answer"] = *e.answer_text;
    return j;
}

ChunkEvent chunk_event_from_json(const json& j) {
    ChunkEvent e;
    e.index = j.at("index").get<std::size_t>();
    e.vad = vad_from_string(j.at("vad").get<std::string>());
    if (j.contains("asr")) e.asr_text = j.at("asr").get<std::string>();
    if (j.contains("turn")) e.turn = turn_from_string(j.at("turn").get<std::string>());
    if (j.contains("answer")) e.answer_text = j.at("answer").get<std::string>();
    return e;
}

}  // namespace

void write_samples_jsonl(const std::filesystem::path& path,
                         const std::vector<TrainingSample>& samples) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write samples manifest: " + path.string());
    for (const auto& s : samples) {
        json j;
        j["id"] = s.id;
        j["ref_audio"] = s.ref_audio;
        j["system_prompt"] = s.system_prompt;
        j["mixture_audio"] = s.mixture_audio;
        j["chunk_ms"] = s.chunk_ms;
        j["chunk_count"] = s.chunk_count;
        j["virtual_tail_chunks"] = s.virtual_tail_chunks;
        j["tokens"] = s.tokens;
        json events = json::array();
        for (const auto& e : s.labels) events.push_back(chunk_event_to_json(e));
        j["events"] = std::move(events);
        j["meta"] = {{"kind", s.meta.kind},
                     {"seed", s.meta.seed},
                     {"fused_flushes", s.meta.fused_flushes},
                     {"duration_s", s.meta.duration_s}};
        out << j.dump() << '\n';
    }
    if (!out) throw DataError("failed writing samples manifest: " + path.string());
}

std::vector<TrainingSample> read_samples_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open samples manifest: " + path.string());
    std::vector<TrainingSample> samples;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        TrainingSample s;
        s.id = j.at("id").get<std::string>();
        s.ref_audio = j.at("ref_audio").get<std::string>();
        s.system_prompt = j.at("system_prompt").get<std::string>();
        s.mixture_audio = j.at("mixture_audio").get<std::string>();
        s.chunk_ms = j.at("chunk_ms").get<int>();
        s.chunk_count = j.at("chunk_count").get<std::size_t>();
        s.virtual_tail_chunks = j.at("virtual_tail_chunks").get<std::size_t>();
        s.tokens = j.at("tokens").get<std::string>();
        for (const auto& ej : j.at("events")) s.labels.push_back(chunk_event_from_json(ej));
        const auto& m = j.at("meta");
        s.meta.kind = m.at("kind").get<std::string>();
        s.meta.seed = m.at("seed").get<std::uint64_t>();
        s.meta.fused_flushes = m.at("fused_flushes").get<std::size_t>();
        s.meta.duration_s = m.at("duration_s").get<double>();
        if (s.labels.size() != s.chunk_count) {
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": label count does not match chunk_count");
        }
        if (s.tokens != serialize(s.labels)) {
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": tokens field does not match serialized events");
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

}  // namespace duplex
