#include "mvr/utf8.hpp"

#include <cstdint>
#include <optional>

namespace mvr::utf8 {
namespace {

struct Decoded {
    char32_t code_point;
    std::size_t length;
};

std::optional<Decoded> decode_at(std::string_view text, std::size_t pos) noexcept {
    const auto byte = [&](std::size_t i) { return static_cast<std::uint8_t>(text[i]); };
    const std::uint8_t lead = byte(pos);
    std::size_t length = 0;
    char32_t cp = 0;
    if (lead < 0x80) {
        return Decoded{lead, 1};
    } else if ((lead & 0xE0) == 0xC0) {
        length = 2;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        length = 3;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        length = 4;
        cp = lead & 0x07;
    } else {
        return std::nullopt;
    }
    if (pos + length > text.size()) {
        return std::nullopt;
    }
    for (std::size_t i = 1; i < length; ++i) {
        const std::uint8_t cont = byte(pos + i);
        if ((cont & 0xC0) != 0x80) {
            return std::nullopt;
        }
        cp = (cp << 6) | (cont & 0x3F);
    }
    // overlong forms, surrogates, out of range
    static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[length] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        return std::nullopt;
    }
    return Decoded{cp, length};
}

bool is_white_space(char32_t cp) noexcept {
    return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 || cp == 0xA0 ||
           cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 || cp == 0x2029 ||
           cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

}  // namespace

bool is_valid(std::string_view text) noexcept {
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto d = decode_at(text, pos);
        if (!d) {
            return false;
        }
        pos += d->length;
    }
    return true;
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
    std::vector<std::string_view> words;
    std::size_t pos = 0;
    std::size_t word_start = std::string_view::npos;
    while (pos < text.size()) {
        auto d = decode_at(text, pos);
        const std::size_t len = d ? d->length : 1;
        const bool space = d && is_white_space(d->code_point);
        if (space) {
            if (word_start != std::string_view::npos) {
                words.push_back(text.substr(word_start, pos - word_start));
                word_start = std::string_view::npos;
            }
        } else if (word_start == std::string_view::npos) {
            word_start = pos;
        }
        pos += len;
    }
    if (word_start != std::string_view::npos) {
        words.push_back(text.substr(word_start));
    }
    return words;
}

std::size_t word_count(std::string_view text) {
    return split_whitespace(text).size();
}

}  // namespace mvr::utf8
