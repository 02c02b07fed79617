#include "duplex/controller.hpp"

#include <cmath>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "duplex/errors.hpp"
#include "duplex/text.hpp"

namespace duplex {

using nlohmann::json;

std::string_view to_string(ActionType a) {
    switch (a) {
        case ActionType::KeepListening: return "keep_listening";
        case ActionType::TriggerAsrDecode: return "trigger_asr_decode";
        case ActionType::Respond: return "respond";
        case ActionType::HaltPlayback: return "halt_playback";
        case ActionType::ContinuePlayback: return "continue_playback";
        case ActionType::NoOp: return "noop";
    }
    return "?";
}

ActionType action_from_string(std::string_view s) {
    if (s == "keep_listening") return ActionType::KeepListening;
    if (s == "trigger_asr_decode") return ActionType::TriggerAsrDecode;
    if (s == "respond") return ActionType::Respond;
    if (s == "halt_playback") return ActionType::HaltPlayback;
    if (s == "continue_playback") return ActionType::ContinuePlayback;
    if (s == "noop") return ActionType::NoOp;
    throw DataError("unknown action type: " + std::string(s));
}

std::string_view to_string(ControllerPhase p) {
    switch (p) {
        case ControllerPhase::Idle: return "idle";
        case ControllerPhase::UserSpeaking: return "user_speaking";
        case ControllerPhase::Responding: return "responding";
    }
    return "?";
}

namespace {

void validate_output(const FrontendOutput& out) {
    if (out.turn && !out.asr_text) {
        throw ProtocolError("turn state without an asr span");
    }
    if (out.answer_text) {
        if (!out.turn ||
            (*out.turn != TurnState::Complete && *out.turn != TurnState::Interrupt)) {
            throw ProtocolError("answer requires turn Complete or Interrupt");
        }
    }
    if (out.max_decode_len > 0 && out.asr_text &&
        utf8_length(*out.asr_text) > out.max_decode_len) {
        throw ProtocolError("asr span exceeds the decoding cap");
    }
}

int playback_chunks_for(const std::string& text, const ControllerConfig& cfg) {
    double seconds = static_cast<double>(utf8_length(text)) / cfg.chars_per_second;
    return static_cast<int>(std::ceil(seconds / (cfg.chunk_ms * 1e-3) - 1e-9));
}

ControllerPhase derive_phase(const ControllerState& s) {
    if (s.playback_active()) return ControllerPhase::Responding;
    if (s.last_vad == VadState::Talk || !s.pending_transcript.empty()) {
        return ControllerPhase::UserSpeaking;
    }
    return ControllerPhase::Idle;
}

}  // namespace

StepResult controller_step(const ControllerState& state, const FrontendOutput& out,
                           const ControllerConfig& cfg) {
    validate_output(out);

    StepResult res;
    ControllerState& ns = res.state;
    ns = state;

    // Playback audible during this chunk, then the clock ticks.
    bool playback_now = ns.playback_remaining_chunks > 0;
    if (playback_now) --ns.playback_remaining_chunks;

    bool transition = state.last_vad == VadState::Talk && out.vad == VadState::Sil;

    auto respond = [&](const std::string& text) {
        res.actions.push_back({ActionType::Respond, text, 0});
        ns.pending_transcript.clear();
        ns.playback_remaining_chunks = playback_chunks_for(text, cfg);
    };

    if (transition) {
        // Talk-to-silence is the decode trigger; decisions happen here.
        res.actions.push_back({ActionType::TriggerAsrDecode, "", 0});
        if (out.asr_text) {
            // Turn markers outside a transition are ignored by contract, so
            // only this path consults them.
            TurnState turn = out.turn.value_or(TurnState::InComplete);
            switch (turn) {
                case TurnState::Complete: {
                    if (!ns.pending_transcript.empty()) ns.pending_transcript += ' ';
                    ns.pending_transcript += *out.asr_text;
                    respond(out.answer_text.value_or(""));
                    break;
                }
                case TurnState::InComplete: {
                    if (!ns.pending_transcript.empty()) ns.pending_transcript += ' ';
                    ns.pending_transcript += *out.asr_text;
                    res.actions.push_back({ActionType::KeepListening, "", 0});
                    break;
                }
                case TurnState::Interrupt: {
                    if (playback_now) {
                        res.actions.push_back({ActionType::HaltPlayback, "", 0});
                        ns.playback_remaining_chunks = 0;
                    }
                    if (!ns.pending_transcript.empty()) ns.pending_transcript += ' ';
                    ns.pending_transcript += *out.asr_text;
                    respond(out.answer_text.value_or(""));
                    break;
                }
                case TurnState::Backchannel: {
                    // Acknowledgment only: not part of any query, playback
                    // is never disturbed.
                    res.actions.push_back(playback_now
                                              ? Action{ActionType::ContinuePlayback, "", 0}
                                              : Action{ActionType::NoOp, "", 0});
                    break;
                }
            }
        }
        // A transition with no decoded text leaves the state as-is; any
        // pending partial utterance keeps us in UserSpeaking.
    } else if (out.vad == VadState::Talk) {
        res.actions.push_back({ActionType::KeepListening, "", 0});
    } else {
        res.actions.push_back({ActionType::NoOp, "", 0});
    }

    ns.last_vad = out.vad;
    ns.phase = derive_phase(ns);
    return res;
}

FrontendOutput oracle_step(const std::vector<ChunkEvent>& ground_truth, std::size_t k) {
    if (k >= ground_truth.size()) {
        throw DataError("oracle_step index " + std::to_string(k) + " out of bounds");
    }
    const ChunkEvent& e = ground_truth[k];
    FrontendOutput out;
    out.vad = e.vad;
    out.asr_text = e.asr_text;
    out.turn = e.turn;
    out.answer_text = e.answer_text;
    return out;
}

PerturbedOracle::PerturbedOracle(const std::vector<ChunkEvent>& ground_truth, FlipProbs probs,
                                 std::uint64_t seed)
    : truth_(ground_truth), probs_(probs), rng_(seed) {
    auto check = [](double p, const char* name) {
        if (p < 0.0 || p > 1.0) {
            throw ConfigError(std::string("flip probability ") + name + " must be in [0, 1]");
        }
    };
    check(probs.vad, "vad");
    check(probs.turn, "turn");
    check(probs.char_sub, "char_sub");
}

FrontendOutput PerturbedOracle::step(std::size_t k) {
    FrontendOutput out = oracle_step(truth_, k);

    if (rng_.bernoulli(probs_.vad)) {
        out.vad = out.vad == VadState::Sil ? VadState::Talk : VadState::Sil;
    }
    if (out.turn && rng_.bernoulli(probs_.turn)) {
        constexpr TurnState kAll[] = {TurnState::Complete, TurnState::InComplete,
                                      TurnState::Interrupt, TurnState::Backchannel};
        TurnState replacement;
        do {
            replacement = kAll[rng_.uniform_index(4)];
        } while (replacement == *out.turn);
        out.turn = replacement;
        // keep the output structurally valid for the flipped class
        if (*out.turn == TurnState::InComplete || *out.turn == TurnState::Backchannel) {
            out.answer_text.reset();
        }
    }
    if (out.asr_text && probs_.char_sub > 0.0) {
        static constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
        std::vector<char32_t> cps = utf8_decode(*out.asr_text);
        for (char32_t& cp : cps) {
            if (!rng_.bernoulli(probs_.char_sub)) continue;
            char32_t sub;
            do {
                sub = static_cast<char32_t>(kAlphabet[rng_.uniform_index(kAlphabet.size())]);
            } while (sub == cp);
            cp = sub;
        }
        out.asr_text = utf8_encode(cps);
    }
    return out;
}

SessionTrace run_session(const TrainingSample& sample, const FrontendFn& frontend,
                         const ControllerConfig& cfg, const std::string& model_name) {
    SessionTrace trace;
    trace.session_id = sample.id;
    trace.model = model_name;
    ControllerState state;
    for (std::size_t k = 0; k < sample.chunk_count; ++k) {
        TraceStep step;
        step.chunk_index = k;
        step.output = frontend(k);
        try {
            StepResult r = controller_step(state, step.output, cfg);
            state = r.state;
            step.actions = std::move(r.actions);
        } catch (const ProtocolError& e) {
            trace.failed = true;
            trace.error = e.what();
            trace.steps.push_back(std::move(step));
            break;
        }
        step.phase_after = state.phase;
        step.playback_active = state.playback_active();
        trace.steps.push_back(std::move(step));
    }
    return trace;
}

SessionTrace run_session_oracle(const TrainingSample& sample, const ControllerConfig& cfg) {
    return run_session(
        sample, [&](std::size_t k) { return oracle_step(sample.labels, k); }, cfg, "oracle");
}

SessionTrace run_session_perturbed(const TrainingSample& sample, const ControllerConfig& cfg,
                                   FlipProbs probs, std::uint64_t seed) {
    auto oracle = std::make_shared<PerturbedOracle>(sample.labels, probs, seed);
    return run_session(
        sample, [oracle](std::size_t k) { return oracle->step(k); }, cfg, "perturbed");
}

namespace {

json output_to_json(const FrontendOutput& o) {
    json j;
    j["vad"] = std::string(to_string(o.vad));
    if (o.asr_text) j["asr"] = *o.asr_text;
    if (o.turn) j["turn"] = std::string(to_string(*o.turn));
    if (o.answer_text) j["answer"] = *o.answer_text;
    return j;
}

FrontendOutput output_from_json(const json& j) {
    FrontendOutput o;
    o.vad = vad_from_string(j.at("vad").get<std::string>());
    if (j.contains("asr")) o.asr_text = j.at("asr").get<std::string>();
    if (j.contains("turn")) o.turn = turn_from_string(j.at("turn").get<std::string>());
    if (j.contains("answer")) o.answer_text = j.at("answer").get<std::string>();
    return o;
}

ControllerPhase phase_from_string(std::string_view s) {
    if (s == "idle") return ControllerPhase::Idle;
    if (s == "user_speaking") return ControllerPhase::UserSpeaking;
    if (s == "responding") return ControllerPhase::Responding;
    throw DataError("unknown controller phase: " + std::string(s));
}

}  // namespace

void write_traces_jsonl(const std::filesystem::path& path,
                        const std::vector<SessionTrace>& traces) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write trace file: " + path.string());
    for (const auto& t : traces) {
        for (const auto& s : t.steps) {
            json j;
            j["session_id"] = t.session_id;
            j["chunk_index"] = s.chunk_index;
            j["output"] = output_to_json(s.output);
            j["state"] = {{"phase", std::string(to_string(s.phase_after))},
                          {"playback_active", s.playback_active}};
            json actions = json::array();
            for (const auto& a : s.actions) {
                json aj{{"type", std::string(to_string(a.type))},
                        {"latency_chunks", a.latency_chunks}};
                if (a.type == ActionType::Respond) aj["text"] = a.text;
                actions.push_back(std::move(aj));
            }
            j["actions"] = std::move(actions);
            out << j.dump() << '\n';
        }
        json summary;
        summary["session_id"] = t.session_id;
        summary["summary"] = true;
        summary["model"] = t.model;
        summary["chunks"] = t.steps.size();
        summary["failed"] = t.failed;
        if (t.failed) summary["error"] = t.error;
        out << summary.dump() << '\n';
    }
    if (!out) throw DataError("failed writing trace file: " + path.string());
}

std::vector<SessionTrace> read_traces_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open trace file: " + path.string());
    std::vector<SessionTrace> traces;
    SessionTrace current;
    bool open = false;
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
        std::string sid = j.at("session_id").get<std::string>();
        if (open && sid != current.session_id) {
            throw DataError(path.string() + ":" + std::to_string(lineno) +
                            ": interleaved sessions in trace file");
        }
        if (j.value("summary", false)) {
            if (!open) current.session_id = sid;
            current.model = j.value("model", "");
            current.failed = j.value("failed", false);
            current.error = j.value("error", "");
            if (j.at("chunks").get<std::size_t>() != current.steps.size()) {
                throw DataError(path.string() + ":" + std::to_string(lineno) +
                                ": chunk count mismatch in summary");
            }
            traces.push_back(std::move(current));
            current = SessionTrace{};
            open = false;
            continue;
        }
        if (!open) {
            current.session_id = sid;
            open = true;
        }
        TraceStep s;
        s.chunk_index = j.at("chunk_index").get<std::size_t>();
        s.output = output_from_json(j.at("output"));
        s.phase_after = phase_from_string(j.at("state").at("phase").get<std::string>());
        s.playback_active = j.at("state").at("playback_active").get<bool>();
        for (const auto& aj : j.at("actions")) {
            Action a;
            a.type = action_from_string(aj.at("type").get<std::string>());
            a.latency_chunks = aj.at("latency_chunks").get<int>();
            if (aj.contains("text")) a.text = aj.at("text").get<std::string>();
            s.actions.push_back(std::move(a));
        }
        current.steps.push_back(std::move(s));
    }
    if (open) throw DataError(path.string() + ": trace file ends without a session summary");
    return traces;
}

}  // namespace duplex
