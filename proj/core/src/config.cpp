#include "duplex/config.hpp"

#include <fstream>

#include <json.hpp>

#include "duplex/errors.hpp"

namespace duplex {

using nlohmann::json;

namespace {

void check_range(const Range& r, const char* name, bool allow_negative = false) {
    if (r.hi < r.lo) throw ConfigError(std::string(name) + " range is inverted");
    if (!allow_negative && r.lo < 0.0) throw ConfigError(std::string(name) + " must be >= 0");
}

Range range_from(const json& j, const char* key, Range fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (v.is_number()) return Range{v.get<double>(), v.get<double>()};
    if (v.is_array() && v.size() == 2) return Range{v[0].get<double>(), v[1].get<double>()};
    throw ConfigError(std::string(key) + " must be a number or [lo, hi]");
}

}  // namespace

void PipelineConfig::validate() const {
    if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
    if (chunk_ms <= 0) throw ConfigError("chunk_ms must be positive");
    check_range(snr_db, "snr_db", true);
    check_range(interferer_snr_db, "interferer_snr_db", true);
    check_range(echo_to_target_db, "echo_to_target_db", true);
    check_range(interferer_count, "interferer_count");
    check_range(gap_s, "gap_s");
    if (gap_s.lo <= 0.0) throw ConfigError("gap_s must be positive");
    if (session_target_s <= 0.0) throw ConfigError("session_target_s must be positive");
    if (session_tolerance < 0.0 || session_tolerance >= 1.0) {
        throw ConfigError("session_tolerance must be in [0, 1)");
    }
    if (nominal_rms <= 0.0 || nominal_rms > 1.0) throw ConfigError("nominal_rms out of range");
    if (!(hop_ms > 0.0) || frame_ms < hop_ms) throw ConfigError("require frame_ms >= hop_ms > 0");
    if (pad_ms < 0.0) throw ConfigError("pad_ms must be >= 0");
    if (overlap_min_ms < 0 || overlap_min_ms > chunk_ms) {
        throw ConfigError("overlap_min_ms must be in [0, chunk_ms]");
    }
    if (chars_per_second <= 0.0) throw ConfigError("chars_per_second must be positive");
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must be in [0, 1]");
    if (voice_swap_prob < 0.0 || voice_swap_prob > 1.0) {
        throw ConfigError("voice_swap_prob must be in [0, 1]");
    }
    if (echo_drive <= 0.0) throw ConfigError("echo_drive must be positive");
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config parse failure in " + path.string() + ": " + e.what());
    }

    PipelineConfig cfg;
    cfg.sample_rate = j.value("sample_rate", cfg.sample_rate);
    cfg.chunk_ms = j.value("chunk_ms", cfg.chunk_ms);
    cfg.snr_db = range_from(j, "snr_db", cfg.snr_db);
    cfg.interferer_snr_db = range_from(j, "interferer_snr_db", cfg.interferer_snr_db);
    cfg.interferer_count = range_from(j, "interferer_count", cfg.interferer_count);
    cfg.echo_to_target_db = range_from(j, "echo_to_target_db", cfg.echo_to_target_db);
    cfg.gap_s = range_from(j, "gap_s", cfg.gap_s);
    cfg.session_target_s = j.value("session_target_s", cfg.session_target_s);
    cfg.session_tolerance = j.value("session_tolerance", cfg.session_tolerance);
    cfg.nominal_rms = j.value("nominal_rms", cfg.nominal_rms);
    cfg.frame_ms = j.value("frame_ms", cfg.frame_ms);
    cfg.hop_ms = j.value("hop_ms", cfg.hop_ms);
    cfg.pad_ms = j.value("pad_ms", cfg.pad_ms);
    cfg.zcr_absorb = j.value("zcr_absorb", cfg.zcr_absorb);
    cfg.overlap_min_ms = j.value("overlap_min_ms", cfg.overlap_min_ms);
    cfg.chars_per_second = j.value("chars_per_second", cfg.chars_per_second);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.voice_swap_prob = j.value("voice_swap_prob", cfg.voice_swap_prob);
    cfg.echo_drive = j.value("echo_drive", cfg.echo_drive);
    cfg.system_prompt = j.value("system_prompt", cfg.system_prompt);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.validate();
    return cfg;
}

void save_config(const std::filesystem::path& path, const PipelineConfig& cfg) {
    json j;
    j["sample_rate"] = cfg.sample_rate;
    j["chunk_ms"] = cfg.chunk_ms;
    j["snr_db"] = {cfg.snr_db.lo, cfg.snr_db.hi};
    j["interferer_snr_db"] = {cfg.interferer_snr_db.lo, cfg.interferer_snr_db.hi};
    j["interferer_count"] = {cfg.interferer_count.lo, cfg.interferer_count.hi};
    j["echo_to_target_db"] = {cfg.echo_to_target_db.lo, cfg.echo_to_target_db.hi};
    j["gap_s"] = {cfg.gap_s.lo, cfg.gap_s.hi};
    j["session_target_s"] = cfg.session_target_s;
    j["session_tolerance"] = cfg.session_tolerance;
    j["nominal_rms"] = cfg.nominal_rms;
    j["frame_ms"] = cfg.frame_ms;
    j["hop_ms"] = cfg.hop_ms;
    j["pad_ms"] = cfg.pad_ms;
    j["zcr_absorb"] = cfg.zcr_absorb;
    j["overlap_min_ms"] = cfg.overlap_min_ms;
    j["chars_per_second"] = cfg.chars_per_second;
    j["alpha"] = cfg.alpha;
    j["voice_swap_prob"] = cfg.voice_swap_prob;
    j["echo_drive"] = cfg.echo_drive;
    j["system_prompt"] = cfg.system_prompt;
    j["seed"] = cfg.seed;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write config file: " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace duplex
