#include "duplex/fixtures.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "duplex/errors.hpp"
#include "duplex/wav.hpp"

namespace duplex {

using nlohmann::json;

void plant_tone(Waveform& w, double offset_s, double duration_s, double freq_hz,
                double amplitude, double ramp_s) {
    std::size_t begin = seconds_to_samples(offset_s, w.sample_rate);
    std::size_t len = seconds_to_samples(duration_s, w.sample_rate);
    if (begin + len > w.size()) throw AudioError("tone extends past end of buffer");
    std::size_t ramp = seconds_to_samples(ramp_s, w.sample_rate);
    double step = 2.0 * std::numbers::pi * freq_hz / w.sample_rate;
    for (std::size_t i = 0; i < len; ++i) {
        double env = 1.0;
        if (i < ramp) env = static_cast<double>(i) / ramp;
        if (len - 1 - i < ramp) env = std::min(env, static_cast<double>(len - 1 - i) / ramp);
        w.samples[begin + i] +=
            static_cast<float>(amplitude * env * std::sin(step * static_cast<double>(i)));
    }
}

namespace {

const char* kSyllables[] = {"ka", "mo", "ri", "ta", "su", "ne", "lo", "vi",
                            "da", "pe", "cho", "ba", "gu", "sha", "mi", "to"};

std::string make_word(Rng& rng) {
    std::string w;
    std::size_t syl = 2 + rng.uniform_index(3);
    for (std::size_t i = 0; i < syl; ++i) w += kSyllables[rng.uniform_index(16)];
    return w;
}

std::string make_sentence(Rng& rng, std::size_t min_chars) {
    std::string s;
    while (s.size() < min_chars) {
        if (!s.empty()) s += ' ';
        s += make_word(rng);
    }
    return s;
}

struct BuiltUtterance {
    Waveform audio;
    TimedTranscript words;
    std::string text;
};

/// Tone-burst words with exact timings: 0.1 s lead, 0.08-0.25 s gaps,
/// 0.1 s tail. The file length is speech_end + 0.1 by construction.
BuiltUtterance build_utterance(Rng& rng, std::size_t n_words, double base_freq,
                               int sample_rate, double word_lo = 0.18, double word_hi = 0.4) {
    BuiltUtterance u;
    struct Planted {
        std::string text;
        double start, end, freq, amp;
    };
    std::vector<Planted> plan;
    double cursor = 0.1;
    for (std::size_t i = 0; i < n_words; ++i) {
        if (i > 0) cursor += rng.uniform(0.08, 0.25);
        Planted p;
        p.text = make_word(rng);
        p.start = cursor;
        p.end = cursor + rng.uniform(word_lo, word_hi);
        p.freq = base_freq * rng.uniform(0.85, 1.2);
        p.amp = rng.uniform(0.3, 0.5);
        cursor = p.end;
        plan.push_back(std::move(p));
    }
    double total = cursor + 0.1;
    u.audio = Waveform::silence_s(total, sample_rate);
    for (const Planted& p : plan) {
        plant_tone(u.audio, p.start, p.end - p.start, p.freq, p.amp);
        WordEntry w;
        w.text = p.text;
        w.start = p.start;
        w.end = p.end;
        u.words.entries.push_back(std::move(w));
        if (!u.text.empty()) u.text += ' ';
        u.text += p.text;
    }
    return u;
}

Waveform build_noise(Rng& rng, double duration_s, int sample_rate, double level) {
    Waveform w = Waveform::silence_s(duration_s, sample_rate);
    for (float& v : w.samples) v = static_cast<float>(rng.uniform(-level, level));
    return w;
}

json words_json(const TimedTranscript& t) {
    json words = json::array();
    for (const auto& w : t.entries) {
        words.push_back(json{{"w", w.text}, {"start", w.start}, {"end", w.end}});
    }
    return words;
}

}  // namespace

AssetPools make_demo_assets(const std::filesystem::path& dir, const FixtureSpec& spec) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "speech");
    fs::create_directories(dir / "interference");
    fs::create_directories(dir / "noise");
    fs::create_directories(dir / "irs");
    fs::create_directories(dir / "agent");
    fs::create_directories(dir / "refs");

    Rng rng(spec.seed);
    std::ofstream speech(dir / "speech.jsonl", std::ios::trunc);
    std::ofstream interference(dir / "interference.jsonl", std::ios::trunc);
    std::ofstream noise(dir / "noise.jsonl", std::ios::trunc);
    std::ofstream irs(dir / "irs.jsonl", std::ios::trunc);
    std::ofstream agent(dir / "agent.jsonl", std::ios::trunc);
    std::ofstream refs(dir / "references.jsonl", std::ios::trunc);
    if (!speech || !interference || !noise || !irs || !agent || !refs) {
        throw DataError("cannot create fixture manifests under " + dir.string());
    }

    std::size_t file_no = 0;
    auto emit_speech = [&](std::ofstream& manifest, const std::string& subdir,
                           const std::string& speaker, const BuiltUtterance& u,
                           const char* turn, const std::string* answer) {
        char name[64];
        std::snprintf(name, sizeof(name), "%s/utt_%04zu.wav", subdir.c_str(), file_no++);
        write_wav(dir / name, u.audio);
        json j;
        j["audio_path"] = name;
        j["speaker_id"] = speaker;
        j["text"] = u.text;
        j["words"] = words_json(u.words);
        if (turn != nullptr) j["turn_label"] = turn;
        if (answer != nullptr) j["answer"] = *answer;
        manifest << j.dump() << '\n';
    };

    for (std::size_t s = 0; s < spec.speakers; ++s) {
        std::string speaker = "spk_" + std::to_string(s);
        double base_freq = 220.0 + 60.0 * static_cast<double>(s);

        for (std::size_t i = 0; i < spec.completes_per_speaker; ++i) {
            BuiltUtterance u = build_utterance(rng, 2 + rng.uniform_index(4), base_freq,
                                               spec.sample_rate);
            std::string answer = make_sentence(rng, 64);
            emit_speech(speech, "speech", speaker, u, "Complete", &answer);
        }
        for (std::size_t i = 0; i < spec.incompletes_per_speaker; ++i) {
            BuiltUtterance u = build_utterance(rng, 2 + rng.uniform_index(3), base_freq,
                                               spec.sample_rate);
            emit_speech(speech, "speech", speaker, u, "InComplete", nullptr);
        }
        for (std::size_t i = 0; i < spec.interrupts_per_speaker; ++i) {
            BuiltUtterance u = build_utterance(rng, 1 + rng.uniform_index(2), base_freq,
                                               spec.sample_rate, 0.15, 0.3);
            std::string answer = make_sentence(rng, 24);
            emit_speech(speech, "speech", speaker, u, "Interrupt", &answer);
        }
        for (std::size_t i = 0; i < spec.backchannels_per_speaker; ++i) {
            BuiltUtterance u =
                build_utterance(rng, 1, base_freq, spec.sample_rate, 0.15, 0.25);
            emit_speech(speech, "speech", speaker, u, "Backchannel", nullptr);
        }

        // 3-5 s enrollment clip anchoring this speaker.
        BuiltUtterance ref = build_utterance(rng, 6 + rng.uniform_index(4), base_freq,
                                             spec.sample_rate, 0.3, 0.5);
        while (ref.audio.duration_s() < 3.0) {
            ref = build_utterance(rng, 8, base_freq, spec.sample_rate, 0.3, 0.5);
        }
        std::string ref_name = "refs/ref_" + speaker + ".wav";
        write_wav(dir / ref_name, ref.audio);
        refs << json{{"speaker_id", speaker}, {"audio_path", ref_name}}.dump() << '\n';
    }

    for (std::size_t i = 0; i < spec.interference_utterances; ++i) {
        std::string speaker = "intf_" + std::to_string(i % 3);
        double base_freq = 500.0 + 45.0 * static_cast<double>(i % 3);
        BuiltUtterance u =
            build_utterance(rng, 3 + rng.uniform_index(5), base_freq, spec.sample_rate);
        emit_speech(interference, "interference", speaker, u, nullptr, nullptr);
    }

    for (std::size_t i = 0; i < spec.noise_files; ++i) {
        double dur = rng.uniform(6.0, 18.0);
        Waveform w = build_noise(rng, dur, spec.sample_rate, 0.17);
        if (i % 2 == 1) plant_tone(w, 0.0, dur, 50.0, 0.05, 0.05);  // mains hum flavor
        std::string name = "noise/noise_" + std::to_string(i) + ".wav";
        write_wav(dir / name, w);
        noise << json{{"audio_path", name}}.dump() << '\n';
    }

    for (std::size_t i = 0; i < spec.impulse_responses; ++i) {
        Rng ir_rng = rng.child("ir" + std::to_string(i));
        std::vector<float> taps = make_exponential_ir(96, rng.uniform(6.0, 16.0),
                                                      spec.sample_rate, ir_rng);
        Waveform w{std::move(taps), spec.sample_rate};
        std::string name = "irs/ir_" + std::to_string(i) + ".wav";
        write_wav(dir / name, w);
        irs << json{{"audio_path", name}}.dump() << '\n';
    }

    for (std::size_t i = 0; i < spec.agent_responses; ++i) {
        double dur = rng.uniform(3.2, 6.0);
        Waveform w = Waveform::silence_s(dur, spec.sample_rate);
        double cursor = 0.05;
        while (cursor + 0.5 < dur) {
            double len = rng.uniform(0.2, 0.45);
            plant_tone(w, cursor, len, rng.uniform(750.0, 1200.0), rng.uniform(0.25, 0.4));
            cursor += len + rng.uniform(0.05, 0.15);
        }
        std::string name = "agent/agent_" + std::to_string(i) + ".wav";
        write_wav(dir / name, w);
        agent << json{{"audio_path", name}}.dump() << '\n';
    }

    speech.close();
    interference.close();
    noise.close();
    irs.close();
    agent.close();
    refs.close();
    return load_asset_pools(dir);
}

}  // namespace duplex
