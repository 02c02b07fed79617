#include "duplex/text.hpp"

#include <cctype>

namespace duplex {

std::vector<char32_t> utf8_decode(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char b = static_cast<unsigned char>(s[i]);
        char32_t cp = 0xFFFD;
        std::size_t len = 1;
        if (b < 0x80) {
            cp = b;
        } else if ((b >> 5) == 0x6 && i + 1 < s.size()) {
            cp = static_cast<char32_t>((b & 0x1F) << 6 | (s[i + 1] & 0x3F));
            len = 2;
        } else if ((b >> 4) == 0xE && i + 2 < s.size()) {
            cp = static_cast<char32_t>((b & 0x0F) << 12 | (s[i + 1] & 0x3F) << 6 |
                                       (s[i + 2] & 0x3F));
            len = 3;
        } else if ((b >> 3) == 0x1E && i + 3 < s.size()) {
            cp = static_cast<char32_t>((b & 0x07) << 18 | (s[i + 1] & 0x3F) << 12 |
                                       (s[i + 2] & 0x3F) << 6 | (s[i + 3] & 0x3F));
            len = 4;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string utf8_encode(const std::vector<char32_t>& cps) {
    std::string out;
    for (char32_t cp : cps) {
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }
    return out;
}

std::size_t utf8_length(std::string_view s) {
    return utf8_decode(s).size();
}

std::vector<char32_t> normalize_for_wer(std::string_view s) {
    std::vector<char32_t> out;
    for (char32_t cp : utf8_decode(s)) {
        if (cp < 0x80) {
            unsigned char c = static_cast<unsigned char>(cp);
            if (std::isspace(c) || std::ispunct(c)) continue;
            out.push_back(static_cast<char32_t>(std::tolower(c)));
        } else if (cp == 0x3000 || cp == 0x3001 || cp == 0x3002 || cp == 0xFF0C ||
                   cp == 0xFF01 || cp == 0xFF1F || cp == 0xFF1B || cp == 0xFF1A) {
            continue;  // common fullwidth punctuation
        } else {
            out.push_back(cp);
        }
    }
    return out;
}

}  // namespace duplex
