#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace duplex {

/// Decode UTF-8 into code points. Invalid bytes decode as U+FFFD.
std::vector<char32_t> utf8_decode(std::string_view s);

std::string utf8_encode(const std::vector<char32_t>& cps);

std::size_t utf8_length(std::string_view s);

/// Lowercase ASCII, drop whitespace and punctuation; other code points
/// (e.g. CJK) pass through. The unit stream scored by the WER metric.
std::vector<char32_t> normalize_for_wer(std::string_view s);

}  // namespace duplex
