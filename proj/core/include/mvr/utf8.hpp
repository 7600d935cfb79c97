#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mvr::utf8 {

bool is_valid(std::string_view text) noexcept;

// Splits on Unicode White_Space code points; no punctuation handling.
// Invalid sequences are treated as non-space bytes.
std::vector<std::string_view> split_whitespace(std::string_view text);

std::size_t word_count(std::string_view text);

}  // namespace mvr::utf8
