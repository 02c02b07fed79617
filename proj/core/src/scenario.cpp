#include "duplex/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "duplex/errors.hpp"
#include "duplex/labeler.hpp"
#include "duplex/text.hpp"
#include "duplex/wav.hpp"

namespace duplex {

using nlohmann::json;

std::string_view to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::PureNoise: return "pure_noise";
        case ScenarioKind::InterferenceSpeaker: return "interference";
        case ScenarioKind::NormalInteraction: return "normal";
        case ScenarioKind::BargeIn: return "barge_in";
    }
    return "?";
}

ScenarioKind scenario_from_string(std::string_view s) {
    if (s == "pure_noise") return ScenarioKind::PureNoise;
    if (s == "interference") return ScenarioKind::InterferenceSpeaker;
    if (s == "normal") return ScenarioKind::NormalInteraction;
    if (s == "barge_in") return ScenarioKind::BargeIn;
    throw DataError("unknown scenario kind: " + std::string(s));
}

namespace {

SpeechAsset speech_asset_from_json(const json& j, const std::string& where) {
    SpeechAsset a;
    a.audio = j.at("audio_path").get<std::string>();
    a.speaker_id = j.value("speaker_id", "");
    a.text = j.value("text", "");
    for (const auto& wj : j.at("words")) {
        WordEntry w;
        w.text = wj.at("w").get<std::string>();
        w.start = wj.at("start").get<double>();
        w.end = wj.at("end").get<double>();
        a.words.entries.push_back(std::move(w));
    }
    a.words.validate();
    if (a.words.entries.empty()) throw DataError(where + ": utterance has no words");
    if (j.contains("turn_label")) {
        a.turn_label = turn_from_string(j.at("turn_label").get<std::string>());
    }
    if (j.contains("answer")) a.answer = j.at("answer").get<std::string>();
    if (a.turn_label) {
        bool needs_answer = *a.turn_label == TurnState::Complete ||
                            *a.turn_label == TurnState::Interrupt;
        if (needs_answer != a.answer.has_value()) {
            throw DataError(where + ": answer must be present iff turn is Complete or Interrupt");
        }
    }
    return a;
}

template <typename PerLine>
void for_each_jsonl(const std::filesystem::path& path, bool required, PerLine&& fn) {
    std::ifstream in(path);
    if (!in) {
        if (required) throw DataError("cannot open manifest: " + path.string());
        return;
    }
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
        fn(j, path.string() + ":" + std::to_string(lineno));
    }
}

}  // namespace

AssetPools load_asset_pools(const std::filesystem::path& dir) {
    AssetPools pools;
    pools.root = dir;
    for_each_jsonl(dir / "speech.jsonl", true, [&](const json& j, const std::string& where) {
        pools.speech.push_back(speech_asset_from_json(j, where));
    });
    for_each_jsonl(dir / "interference.jsonl", false,
                   [&](const json& j, const std::string& where) {
                       pools.interference.push_back(speech_asset_from_json(j, where));
                   });
    for_each_jsonl(dir / "noise.jsonl", true, [&](const json& j, const std::string&) {
        pools.noise.push_back(AudioAsset{j.at("audio_path").get<std::string>()});
    });
    for_each_jsonl(dir / "irs.jsonl", false, [&](const json& j, const std::string&) {
        pools.impulse_responses.push_back(AudioAsset{j.at("audio_path").get<std::string>()});
    });
    for_each_jsonl(dir / "agent.jsonl", false, [&](const json& j, const std::string&) {
        pools.agent_responses.push_back(AudioAsset{j.at("audio_path").get<std::string>()});
    });
    for_each_jsonl(dir / "references.jsonl", false, [&](const json& j, const std::string&) {
        pools.references[j.at("speaker_id").get<std::string>()] =
            j.at("audio_path").get<std::string>();
    });
    if (pools.speech.empty()) throw DataError("speech pool is empty: " + dir.string());
    if (pools.noise.empty()) throw DataError("noise pool is empty: " + dir.string());
    if (pools.references.empty()) throw DataError("reference pool is empty: " + dir.string());
    return pools;
}

Assembly assemble_dialogue(const std::vector<PlacedUtterance>& utterances,
                           const std::vector<double>& gaps_between_s) {
    if (utterances.empty()) throw DataError("assemble_dialogue needs at least one utterance");
    if (!gaps_between_s.empty() && gaps_between_s.size() != utterances.size() - 1) {
        throw DataError("need one gap per utterance boundary");
    }
    int rate = utterances.front().audio.sample_rate;

    Assembly out;
    double cursor = 0.0;
    std::vector<double> offsets;
    for (std::size_t i = 0; i < utterances.size(); ++i) {
        if (utterances[i].audio.sample_rate != rate) {
            throw DataError("mixed sample rates in dialogue");
        }
        if (i > 0) cursor += gaps_between_s.empty() ? 0.0 : gaps_between_s[i - 1];
        offsets.push_back(cursor);
        out.placements.push_back({cursor, cursor + utterances[i].audio.duration_s()});
        cursor += utterances[i].audio.duration_s();
    }

    std::size_t total = seconds_to_samples(cursor, rate);
    out.clean = Waveform::silence(total, rate);
    out.swapped = Waveform::silence(total, rate);
    for (std::size_t i = 0; i < utterances.size(); ++i) {
        const PlacedUtterance& u = utterances[i];
        overlay_into(u.target_voice ? out.clean : out.swapped, u.audio, offsets[i]);
        if (!u.target_voice) continue;  // consistency negatives stay out of ground truth
        UtteranceEvent e;
        e.start = offsets[i] + u.words.speech_start();
        e.end = offsets[i] + u.words.speech_end();
        e.text = u.text;
        e.turn = u.turn;
        e.answer = u.answer;
        out.events.push_back(std::move(e));
    }
    return out;
}

namespace {

double utterance_file_duration(const SpeechAsset& a) {
    // word timings bound the speech; files carry a small trailing margin
    return a.words.speech_end() + 0.1;
}

double playback_duration_s(const std::string& answer, const PipelineConfig& cfg) {
    return static_cast<double>(utf8_length(answer)) / cfg.chars_per_second;
}

std::size_t playback_chunks(const std::string& answer, const PipelineConfig& cfg) {
    return static_cast<std::size_t>(
        std::ceil(playback_duration_s(answer, cfg) / (cfg.chunk_ms * 1e-3) - 1e-9));
}

/// Gap long enough that some chunk between two utterances stays below the
/// TALK overlap threshold regardless of grid alignment.
double fusion_safe_gap(const PipelineConfig& cfg) {
    return 2.0 * cfg.chunk_ms * 1e-3 - 2.0 * cfg.overlap_min_ms * 1e-3 + 0.1;
}

std::vector<const SpeechAsset*> with_label(const std::vector<SpeechAsset>& pool,
                                           const std::string& speaker, TurnState label) {
    std::vector<const SpeechAsset*> out;
    for (const auto& a : pool) {
        if (a.speaker_id == speaker && a.turn_label && *a.turn_label == label) out.push_back(&a);
    }
    return out;
}

const SpeechAsset& pick(const std::vector<const SpeechAsset*>& pool, Rng& rng) {
    return *pool[rng.uniform_index(pool.size())];
}

/// Absolute placement of a script's utterances: file start times, target
/// events and total duration.
struct Placement {
    std::vector<double> file_start;
    std::vector<UtteranceEvent> events;
    double duration_s = 0.0;
};

Placement place_script(const SessionScript& script) {
    Placement p;
    double cursor = 0.0;
    for (const ScriptUtterance& u : script.utterances) {
        cursor += u.gap_before_s;
        p.file_start.push_back(cursor);
        if (u.target_voice) {
            UtteranceEvent e;
            e.start = cursor + u.asset.words.speech_start();
            e.end = cursor + u.asset.words.speech_end();
            e.text = u.asset.text;
            e.turn = u.asset.turn_label.value_or(TurnState::Complete);
            e.answer = u.asset.answer;
            p.events.push_back(std::move(e));
        }
        cursor += utterance_file_duration(u.asset);
    }
    p.duration_s = cursor + script.tail_gap_s;
    if (script.fixed_duration_s) p.duration_s = *script.fixed_duration_s;
    return p;
}

}  // namespace

SessionScript generate_scenario(ScenarioKind kind, const AssetPools& pools,
                                const PipelineConfig& cfg, std::uint64_t seed,
                                const std::string& id) {
    Rng rng(seed);
    SessionScript script;
    script.id = id;
    script.kind = kind;
    script.seed = seed;

    double target_len = cfg.session_target_s *
                        rng.uniform(1.0 - cfg.session_tolerance, 1.0 + cfg.session_tolerance);

    script.noise_audio = pools.noise[rng.uniform_index(pools.noise.size())].audio;
    script.noise_snr_db = rng.uniform(cfg.snr_db.lo, cfg.snr_db.hi);
    script.noise_tile_offset = static_cast<std::size_t>(rng.next_u64() & 0xFFFFF);

    std::vector<std::string> speakers;
    speakers.reserve(pools.references.size());
    for (const auto& [spk, _] : pools.references) speakers.push_back(spk);
    std::string speaker = speakers[rng.uniform_index(speakers.size())];
    script.reference_audio = pools.references.at(speaker);

    auto sample_gap = [&] { return rng.uniform(cfg.gap_s.lo, cfg.gap_s.hi); };

    auto add_interferers = [&](double session_len) {
        if (pools.interference.empty()) return;
        auto n = static_cast<std::size_t>(
            rng.uniform_int(static_cast<std::int64_t>(cfg.interferer_count.lo),
                            static_cast<std::int64_t>(cfg.interferer_count.hi)));
        for (std::size_t i = 0; i < n; ++i) {
            const SpeechAsset& a =
                pools.interference[rng.uniform_index(pools.interference.size())];
            double dur = utterance_file_duration(a);
            if (dur >= session_len) continue;
            ScriptInterferer inf;
            inf.audio = a.audio;
            inf.offset_s = rng.uniform(0.0, session_len - dur);
            inf.snr_db = rng.uniform(cfg.interferer_snr_db.lo, cfg.interferer_snr_db.hi);
            script.interferers.push_back(std::move(inf));
        }
    };

    switch (kind) {
        case ScenarioKind::PureNoise: {
            script.fixed_duration_s = target_len;
            return script;
        }
        case ScenarioKind::InterferenceSpeaker: {
            if (pools.interference.empty()) {
                throw DataError("interference pool required for interference scenario");
            }
            script.fixed_duration_s = target_len;
            add_interferers(target_len);
            if (script.interferers.empty()) {
                throw DataError("no interference asset fits a session of " +
                                std::to_string(target_len) + " s");
            }
            return script;
        }
        case ScenarioKind::NormalInteraction: {
            auto completes = with_label(pools.speech, speaker, TurnState::Complete);
            auto incompletes = with_label(pools.speech, speaker, TurnState::InComplete);
            if (completes.empty()) {
                throw DataError("speech pool lacks Complete utterances for speaker " + speaker);
            }
            double cursor = 0.0;
            bool first = true;
            while (true) {
                bool want_complete = incompletes.empty() || rng.bernoulli(0.6);
                const SpeechAsset& a = pick(want_complete ? completes : incompletes, rng);
                double gap = sample_gap();
                double dur = utterance_file_duration(a);
                if (!first && cursor + gap + dur + cfg.gap_s.lo > target_len) break;
                ScriptUtterance u;
                u.asset = a;
                u.gap_before_s = gap;
                u.target_voice = !rng.bernoulli(cfg.voice_swap_prob);
                script.utterances.push_back(std::move(u));
                cursor += gap + dur;
                first = false;
                if (cursor + cfg.gap_s.lo >= target_len) break;
            }
            script.tail_gap_s = sample_gap();
            break;
        }
        case ScenarioKind::BargeIn: {
            if (pools.agent_responses.empty()) {
                throw DataError("agent response pool required for barge-in scenario");
            }
            auto completes = with_label(pools.speech, speaker, TurnState::Complete);
            auto interrupts = with_label(pools.speech, speaker, TurnState::Interrupt);
            auto backchannels = with_label(pools.speech, speaker, TurnState::Backchannel);
            auto incompletes = with_label(pools.speech, speaker, TurnState::InComplete);
            if (completes.empty()) {
                throw DataError("barge-in scenario needs a Complete utterance for speaker " +
                                speaker);
            }
            bool use_interrupt =
                backchannels.empty() || (!interrupts.empty() && rng.bernoulli(0.5));
            if (use_interrupt && interrupts.empty()) {
                throw DataError("barge-in scenario needs Interrupt or Backchannel utterances");
            }
            const SpeechAsset& barge = pick(use_interrupt ? interrupts : backchannels, rng);
            const SpeechAsset& query = pick(completes, rng);

            const AudioAsset& agent =
                pools.agent_responses[rng.uniform_index(pools.agent_responses.size())];
            double agent_len =
                load_waveform(pools.resolve(agent.audio), cfg.sample_rate).duration_s();
            if (agent_len < 2.5) {
                throw DataError("agent response shorter than 2.5 s cannot host a barge-in: " +
                                agent.audio);
            }

            double core = utterance_file_duration(query) + fusion_safe_gap(cfg) +
                          utterance_file_duration(barge) + agent_len + 3.0;
            double cursor = 0.0;
            bool first = true;
            while (!incompletes.empty()) {
                const SpeechAsset& filler = pick(incompletes, rng);
                double gap = sample_gap();
                double dur = utterance_file_duration(filler);
                if (cursor + gap + dur + core > target_len) break;
                ScriptUtterance u;
                u.asset = filler;
                u.gap_before_s = gap;
                script.utterances.push_back(std::move(u));
                cursor += gap + dur;
                first = false;
            }
            (void)first;

            ScriptUtterance uq;
            uq.asset = query;
            uq.gap_before_s = sample_gap();
            script.utterances.push_back(std::move(uq));

            double delta = rng.uniform(0.4, 0.9);
            double frac = rng.uniform(0.35, 0.6);
            ScriptUtterance ub;
            ub.asset = barge;
            ub.gap_before_s = std::max(fusion_safe_gap(cfg), delta + frac * agent_len);
            script.utterances.push_back(std::move(ub));

            ScriptEcho echo;
            echo.agent_audio = agent.audio;
            if (!pools.impulse_responses.empty()) {
                echo.ir_audio =
                    pools.impulse_responses[rng.uniform_index(pools.impulse_responses.size())]
                        .audio;
            }
            echo.drive = cfg.echo_drive;
            echo.level_db = rng.uniform(cfg.echo_to_target_db.lo, cfg.echo_to_target_db.hi);
            script.echo = std::move(echo);

            script.tail_gap_s = std::max(fusion_safe_gap(cfg), sample_gap());
            break;
        }
    }

    Placement placed = place_script(script);

    if (script.echo) {
        // The echo window models system playback of the query's answer; it
        // opens just after the query and the barge-in lands inside it.
        std::size_t nq = script.utterances.size() - 2;
        const SpeechAsset& query = script.utterances[nq].asset;
        double query_end = placed.file_start[nq] + query.words.speech_end();
        script.echo->start_s = query_end + 0.4;

        std::size_t k1 = transition_chunk_for(placed.events, placed.events.size() - 2,
                                              placed.duration_s, cfg.chunk_ms,
                                              cfg.overlap_min_ms);
        std::size_t k2 = transition_chunk_for(placed.events, placed.events.size() - 1,
                                              placed.duration_s, cfg.chunk_ms,
                                              cfg.overlap_min_ms);
        std::size_t n = playback_chunks(query.answer.value_or(""), cfg);
        if (!(k1 < k2 && k2 <= k1 + n)) {
            throw DataError(
                "cannot schedule barge-in inside simulated playback for " + id + ": answer of " +
                std::to_string(utf8_length(query.answer.value_or(""))) + " chars covers " +
                std::to_string(n) + " chunks but the barge-in transition lands " +
                std::to_string(k2 - k1) +
                " chunks after the query; provide longer answers or lower chars_per_second");
        }
        if (script.utterances.back().asset.turn_label == TurnState::Interrupt) {
            // Physical playback stops once the system acts on the interrupt.
            script.echo->stop_s =
                std::min(placed.duration_s, (k2 + 1) * (cfg.chunk_ms * 1e-3) + 0.2);
        }
    }

    return script;
}

SessionRender render_session(const SessionScript& script, const AssetPools& pools,
                             const PipelineConfig& cfg) {
    Rng rng(script.seed);

    SessionRender render;
    render.id = script.id;
    render.kind = script.kind;
    render.reference_audio = script.reference_audio;

    // Target stem and events.
    std::vector<double> gaps;
    std::vector<PlacedUtterance> placed;
    Waveform swapped_stem;
    if (!script.utterances.empty()) {
        double lead = script.utterances.front().gap_before_s;
        for (std::size_t i = 0; i < script.utterances.size(); ++i) {
            const ScriptUtterance& su = script.utterances[i];
            if (i > 0) gaps.push_back(su.gap_before_s);
            PlacedUtterance pu;
            pu.audio = load_waveform(pools.resolve(su.asset.audio), cfg.sample_rate);
            // pad the file to the nominal extent used at placement time
            std::size_t want =
                seconds_to_samples(utterance_file_duration(su.asset), cfg.sample_rate);
            if (pu.audio.size() < want) pu.audio.samples.resize(want, 0.0f);
            if (pu.audio.size() > want) pu.audio.samples.resize(want);
            pu.words = su.asset.words;
            pu.text = su.asset.text;
            pu.turn = su.asset.turn_label.value_or(TurnState::Complete);
            pu.answer = su.asset.answer;
            pu.target_voice = su.target_voice;
            placed.push_back(std::move(pu));
        }
        Assembly assembly = assemble_dialogue(placed, gaps);

        double total_s = lead + assembly.clean.duration_s() + script.tail_gap_s;
        std::size_t total = seconds_to_samples(total_s, cfg.sample_rate);
        render.clean_target = Waveform::silence(total, cfg.sample_rate);
        overlay_into(render.clean_target, assembly.clean, lead);
        swapped_stem = Waveform::silence(total, cfg.sample_rate);
        overlay_into(swapped_stem, assembly.swapped, lead);
        for (UtteranceEvent e : assembly.events) {
            e.start += lead;
            e.end += lead;
            render.events.push_back(std::move(e));
        }
    } else {
        double dur = script.fixed_duration_s.value_or(cfg.session_target_s);
        render.clean_target = Waveform::silence_s(dur, cfg.sample_rate);
        swapped_stem = Waveform::silence(render.clean_target.size(), cfg.sample_rate);
    }

    std::size_t total = render.clean_target.size();
    auto intervals = event_intervals(render.events);
    bool has_target = !render.events.empty();
    double target_rms = has_target ? rms_over(render.clean_target, intervals) : cfg.nominal_rms;
    if (has_target && target_rms <= 0.0) throw TargetSilent();

    // Competing talkers.
    render.interferer_stem = std::move(swapped_stem);
    render.interferer_stem.sample_rate = cfg.sample_rate;
    for (const ScriptInterferer& inf : script.interferers) {
        Waveform w = load_waveform(pools.resolve(inf.audio), cfg.sample_rate);
        double w_rms = rms(w);
        if (w_rms <= 0.0) throw AudioError("interferer is silent: " + inf.audio);
        double gain = (target_rms / w_rms) * std::pow(10.0, -inf.snr_db / 20.0);
        apply_gain(w, gain);
        if (seconds_to_samples(inf.offset_s, cfg.sample_rate) + w.size() > total) {
            std::size_t keep = total - seconds_to_samples(inf.offset_s, cfg.sample_rate);
            w.samples.resize(keep);
        }
        overlay_into(render.interferer_stem, w, inf.offset_s);
        render.meta.interferer_windows.push_back(
            {inf.offset_s, inf.offset_s + w.duration_s()});
    }

    // System echo through the electro-acoustic path.
    render.echo_stem = Waveform::silence(total, cfg.sample_rate);
    if (script.echo) {
        const ScriptEcho& e = *script.echo;
        Waveform agent = load_waveform(pools.resolve(e.agent_audio), cfg.sample_rate);
        std::vector<float> ir;
        if (!e.ir_audio.empty()) {
            ir = load_waveform(pools.resolve(e.ir_audio), cfg.sample_rate).samples;
        } else {
            Rng ir_rng = rng.child("ir");
            ir = make_exponential_ir(96, 12.0, cfg.sample_rate, ir_rng);
        }
        Waveform echoed = soft_clip(convolve_ir(agent, ir).wave, e.drive);
        double stop = e.stop_s.value_or(e.start_s + echoed.duration_s());
        double max_len = std::max(0.0, stop - e.start_s);
        std::size_t keep = std::min(echoed.size(), seconds_to_samples(max_len, cfg.sample_rate));
        echoed.samples.resize(keep);
        if (keep > 0) {
            // short release ramp where playback was cut
            std::size_t ramp = std::min<std::size_t>(keep, cfg.sample_rate / 100);
            if (e.stop_s) {
                for (std::size_t i = 0; i < ramp; ++i) {
                    echoed.samples[keep - 1 - i] *=
                        static_cast<float>(static_cast<double>(i) / ramp);
                }
            }
            double echo_rms = rms(echoed);
            if (echo_rms > 0.0) {
                double gain = (target_rms / echo_rms) * std::pow(10.0, -e.level_db / 20.0);
                apply_gain(echoed, gain);
            }
            std::size_t off = seconds_to_samples(e.start_s, cfg.sample_rate);
            if (off + echoed.size() > total) {
                echoed.samples.resize(total > off ? total - off : 0);
            }
            if (!echoed.empty()) {
                overlay_into(render.echo_stem, echoed, e.start_s);
                render.meta.echo_window = TimeInterval{e.start_s, e.start_s + echoed.duration_s()};
            }
        }
    }

    // Background noise at the scripted SNR.
    Waveform noise_src = load_waveform(pools.resolve(script.noise_audio), cfg.sample_rate);
    Waveform fitted = fit_length(noise_src, total, script.noise_tile_offset);
    double noise_rms = rms(fitted);
    if (noise_rms <= 0.0) throw NoiseSilent();
    double noise_gain;
    if (has_target) {
        MixResult mr = mix_at_snr(render.clean_target, noise_src, script.noise_snr_db,
                                  intervals, script.noise_tile_offset);
        noise_gain = mr.noise_gain;
    } else {
        noise_gain = (cfg.nominal_rms / noise_rms) * std::pow(10.0, -script.noise_snr_db / 20.0);
    }
    render.noise_stem = std::move(fitted);
    apply_gain(render.noise_stem, noise_gain);

    // Mixture = sum of stems, then one uniform rescale if it peaks.
    render.mixture = Waveform::silence(total, cfg.sample_rate);
    for (std::size_t i = 0; i < total; ++i) {
        double v = static_cast<double>(render.clean_target.samples[i]) +
                   static_cast<double>(render.interferer_stem.samples[i]) +
                   static_cast<double>(render.echo_stem.samples[i]) +
                   static_cast<double>(render.noise_stem.samples[i]);
        render.mixture.samples[i] = static_cast<float>(v);
    }
    double peak = peak_magnitude(render.mixture);
    double rescale = 1.0;
    if (peak > 0.999) {
        rescale = 0.999 / peak;
        apply_gain(render.mixture, rescale);
        apply_gain(render.clean_target, rescale);
        apply_gain(render.interferer_stem, rescale);
        apply_gain(render.echo_stem, rescale);
        apply_gain(render.noise_stem, rescale);
    }

    render.meta.seed = script.seed;
    render.meta.noise_gain = noise_gain;
    render.meta.rescale = rescale;
    render.meta.requested_snr_db = script.noise_snr_db;
    render.meta.has_target = has_target;
    return render;
}

namespace {

json interval_to_json(const TimeInterval& t) {
    return json{{"start", t.start}, {"end", t.end}};
}

json event_to_json(const UtteranceEvent& e) {
    json j{{"start", e.start}, {"end", e.end}, {"text", e.text},
           {"turn", std::string(to_string(e.turn))}};
    if (e.answer) j["answer"] = *e.answer;
    return j;
}

UtteranceEvent event_from_json(const json& j) {
    UtteranceEvent e;
    e.start = j.at("start").get<double>();
    e.end = j.at("end").get<double>();
    e.text = j.at("text").get<std::string>();
    e.turn = turn_from_string(j.at("turn").get<std::string>());
    if (j.contains("answer")) e.answer = j.at("answer").get<std::string>();
    return e;
}

json script_to_json(const SessionScript& s) {
    json j;
    j["id"] = s.id;
    j["kind"] = std::string(to_string(s.kind));
    j["seed"] = s.seed;
    j["reference_audio"] = s.reference_audio;
    j["tail_gap_s"] = s.tail_gap_s;
    if (s.fixed_duration_s) j["fixed_duration_s"] = *s.fixed_duration_s;
    json utts = json::array();
    for (const auto& u : s.utterances) {
        json uj;
        uj["audio_path"] = u.asset.audio;
        uj["speaker_id"] = u.asset.speaker_id;
        uj["text"] = u.asset.text;
        json words = json::array();
        for (const auto& w : u.asset.words.entries) {
            words.push_back(json{{"w", w.text}, {"start", w.start}, {"end", w.end}});
        }
        uj["words"] = std::move(words);
        if (u.asset.turn_label) uj["turn_label"] = std::string(to_string(*u.asset.turn_label));
        if (u.asset.answer) uj["answer"] = *u.asset.answer;
        uj["gap_before_s"] = u.gap_before_s;
        uj["target_voice"] = u.target_voice;
        utts.push_back(std::move(uj));
    }
    j["utterances"] = std::move(utts);
    json infs = json::array();
    for (const auto& i : s.interferers) {
        infs.push_back(json{{"audio_path", i.audio}, {"offset_s", i.offset_s},
                            {"snr_db", i.snr_db}});
    }
    j["interferers"] = std::move(infs);
    j["noise_audio"] = s.noise_audio;
    j["noise_snr_db"] = s.noise_snr_db;
    j["noise_tile_offset"] = s.noise_tile_offset;
    if (s.echo) {
        json ej{{"agent_audio", s.echo->agent_audio}, {"ir_audio", s.echo->ir_audio},
                {"drive", s.echo->drive},           {"start_s", s.echo->start_s},
                {"level_db", s.echo->level_db}};
        if (s.echo->stop_s) ej["stop_s"] = *s.echo->stop_s;
        j["echo"] = std::move(ej);
    }
    return j;
}

}  // namespace

void write_session(const std::filesystem::path& dir, const SessionRender& render,
                   const SessionScript& script) {
    std::filesystem::create_directories(dir);
    write_wav(dir / "mixture.wav", render.mixture);
    write_wav(dir / "clean.wav", render.clean_target);

    json ev;
    ev["session_id"] = render.id;
    ev["kind"] = std::string(to_string(render.kind));
    ev["duration_s"] = render.duration_s();
    ev["reference_audio"] = render.reference_audio;
    ev["mixture_audio"] = "mixture.wav";
    json events = json::array();
    for (const auto& e : render.events) events.push_back(event_to_json(e));
    ev["events"] = std::move(events);
    std::ofstream evf(dir / "events.json", std::ios::trunc);
    if (!evf) throw DataError("cannot write " + (dir / "events.json").string());
    evf << ev.dump(2) << '\n';

    json meta;
    meta["seed"] = render.meta.seed;
    meta["noise_gain"] = render.meta.noise_gain;
    meta["rescale"] = render.meta.rescale;
    meta["requested_snr_db"] = render.meta.requested_snr_db;
    meta["has_target"] = render.meta.has_target;
    if (render.meta.echo_window) meta["echo_window"] = interval_to_json(*render.meta.echo_window);
    json infw = json::array();
    for (const auto& w : render.meta.interferer_windows) infw.push_back(interval_to_json(w));
    meta["interferer_windows"] = std::move(infw);
    meta["script"] = script_to_json(script);
    std::ofstream metaf(dir / "meta.json", std::ios::trunc);
    if (!metaf) throw DataError("cannot write " + (dir / "meta.json").string());
    metaf << meta.dump(2) << '\n';
}

StoredSession read_session(const std::filesystem::path& dir) {
    std::ifstream in(dir / "events.json");
    if (!in) throw DataError("cannot open " + (dir / "events.json").string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError((dir / "events.json").string() + ": " + e.what());
    }
    StoredSession s;
    s.id = j.at("session_id").get<std::string>();
    s.kind = scenario_from_string(j.at("kind").get<std::string>());
    s.reference_audio = j.at("reference_audio").get<std::string>();
    s.mixture_audio = j.at("mixture_audio").get<std::string>();
    s.duration_s = j.at("duration_s").get<double>();
    for (const auto& ej : j.at("events")) s.events.push_back(event_from_json(ej));
    return s;
}

}  // namespace duplex
