#include "duplex/transcript.hpp"

#include <fstream>

#include <json.hpp>

#include "duplex/errors.hpp"

namespace duplex {

using nlohmann::json;

void TimedTranscript::validate() const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (!(e.start < e.end)) {
            throw DataError("transcript entry " + std::to_string(i) + " has start >= end");
        }
        if (i > 0 && entries[i - 1].end > e.start + 1e-9) {
            throw DataError("transcript entries " + std::to_string(i - 1) + " and " +
                            std::to_string(i) + " overlap");
        }
    }
}

double TimedTranscript::speech_start() const {
    if (entries.empty()) throw DataError("empty transcript has no speech extent");
    return entries.front().start;
}

double TimedTranscript::speech_end() const {
    if (entries.empty()) throw DataError("empty transcript has no speech extent");
    return entries.back().end;
}

std::vector<TranscriptRecord> read_transcript_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open transcript manifest: " + path.string());
    std::vector<TranscriptRecord> records;
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
        TranscriptRecord rec;
        rec.audio_path = j.at("audio_path").get<std::string>();
        rec.speaker_id = j.value("speaker_id", "");
        rec.text = j.value("text", "");
        rec.transcript.source = j.value("source", "coarse") == "refined"
                                    ? TimedTranscript::Source::Refined
                                    : TimedTranscript::Source::Coarse;
        for (const auto& wj : j.at("words")) {
            WordEntry w;
            w.text = wj.at("w").get<std::string>();
            w.start = wj.at("start").get<double>();
            w.end = wj.at("end").get<double>();
            w.fallback = wj.value("fallback", false);
            rec.transcript.entries.push_back(std::move(w));
        }
        records.push_back(std::move(rec));
    }
    return records;
}

void write_transcript_jsonl(const std::filesystem::path& path,
                            const std::vector<TranscriptRecord>& records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write transcript manifest: " + path.string());
    for (const auto& rec : records) {
        json j;
        j["audio_path"] = rec.audio_path;
        j["speaker_id"] = rec.speaker_id;
        j["text"] = rec.text;
        bool refined = rec.transcript.source == TimedTranscript::Source::Refined;
        j["source"] = refined ? "refined" : "coarse";
        json words = json::array();
        for (const auto& w : rec.transcript.entries) {
            json wj{{"w", w.text}, {"start", w.start}, {"end", w.end}};
            if (refined) wj["fallback"] = w.fallback;
            words.push_back(std::move(wj));
        }
        j["words"] = std::move(words);
        out << j.dump() << '\n';
    }
    if (!out) throw DataError("failed writing transcript manifest: " + path.string());
}

}  // namespace duplex
