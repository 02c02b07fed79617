#include "duplex/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "duplex/errors.hpp"

namespace duplex {

namespace {

constexpr double kWriteTolerance = 1.0 + 1e-6;

void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    os.write(b, 4);
}

void put_u16(std::ostream& os, std::uint16_t v) {
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
    os.write(b, 2);
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t get_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

Waveform read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open wav file: " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw DataError("not a RIFF/WAVE file: " + path.string());
    }

    int sample_rate = 0;
    int channels = 0;
    int bits = 0;
    const unsigned char* data = nullptr;
    std::size_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        std::uint32_t chunk_size = get_u32(bytes.data() + pos + 4);
        const unsigned char* body = bytes.data() + pos + 8;
        if (pos + 8 + chunk_size > bytes.size()) {
            throw DataError("truncated wav chunk in " + path.string());
        }
        if (std::memcmp(bytes.data() + pos, "fmt ", 4) == 0) {
            if (chunk_size < 16) throw DataError("malformed fmt chunk in " + path.string());
            std::uint16_t format = get_u16(body);
            channels = get_u16(body + 2);
            sample_rate = static_cast<int>(get_u32(body + 4));
            bits = get_u16(body + 14);
            if (format != 1) throw DataError("only PCM wav is supported: " + path.string());
        } else if (std::memcmp(bytes.data() + pos, "data", 4) == 0) {
            data = body;
            data_len = chunk_size;
        }
        pos += 8 + chunk_size + (chunk_size & 1u);
    }

    if (sample_rate <= 0 || data == nullptr) {
        throw DataError("missing fmt or data chunk in " + path.string());
    }
    if (channels != 1) throw DataError("only mono wav is supported: " + path.string());
    if (bits != 16) throw DataError("only 16-bit PCM is supported: " + path.string());

    Waveform w;
    w.sample_rate = sample_rate;
    std::size_t n = data_len / 2;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::int16_t s = static_cast<std::int16_t>(data[2 * i] | (data[2 * i + 1] << 8));
        w.samples[i] = static_cast<float>(s) / 32767.0f;
    }
    return w;
}

void write_wav(const std::filesystem::path& path, const Waveform& w) {
    if (w.sample_rate <= 0) throw DataError("waveform has invalid sample rate");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write wav file: " + path.string());

    std::uint32_t data_bytes = static_cast<std::uint32_t>(w.size() * 2);
    out.write("RIFF", 4);
    put_u32(out, 36 + data_bytes);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(out, 16);
    put_u16(out, 1);  // PCM
    put_u16(out, 1);  // mono
    put_u32(out, static_cast<std::uint32_t>(w.sample_rate));
    put_u32(out, static_cast<std::uint32_t>(w.sample_rate * 2));
    put_u16(out, 2);
    put_u16(out, 16);
    out.write("data", 4);
    put_u32(out, data_bytes);

    for (float v : w.samples) {
        double x = static_cast<double>(v);
        if (std::abs(x) > kWriteTolerance) {
            throw AudioError("sample magnitude " + std::to_string(x) +
                             " exceeds 1.0; rescale before writing " + path.string());
        }
        long q = std::lround(x * 32767.0);
        q = std::max(-32767l, std::min(32767l, q));
        put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
    if (!out) throw DataError("failed writing wav file: " + path.string());
}

Waveform resample_linear(const Waveform& w, int target_rate) {
    if (target_rate <= 0) throw AudioError("target sample rate must be positive");
    if (w.sample_rate == target_rate || w.empty()) {
        Waveform out = w;
        out.sample_rate = target_rate;
        return out;
    }
    Waveform out;
    out.sample_rate = target_rate;
    double ratio = static_cast<double>(w.sample_rate) / target_rate;
    std::size_t n = static_cast<std::size_t>(
        std::llround(static_cast<double>(w.size()) * target_rate / w.sample_rate));
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double src = static_cast<double>(i) * ratio;
        std::size_t i0 = static_cast<std::size_t>(src);
        if (i0 >= w.size() - 1) {
            out.samples[i] = w.samples.back();
            continue;
        }
        double frac = src - static_cast<double>(i0);
        out.samples[i] = static_cast<float>((1.0 - frac) * w.samples[i0] + frac * w.samples[i0 + 1]);
    }
    return out;
}

Waveform load_waveform(const std::filesystem::path& path, int target_rate) {
    Waveform w = read_wav(path);
    if (w.sample_rate != target_rate) w = resample_linear(w, target_rate);
    return w;
}

}  // namespace duplex
