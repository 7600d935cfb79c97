#include "mvr/binary_io.hpp"

#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "mvr/error.hpp"

namespace mvr {

void ByteReader::need(std::size_t n, std::string_view what) const {
    if (remaining() < n) {
        fail(ErrorCode::FormatError,
             fmt::format("truncated input at byte offset {}: need {} bytes for {}, {} left", pos_, n,
                         what, remaining()));
    }
}

std::uint64_t ByteReader::get_le(int n, std::string_view what) {
    need(static_cast<std::size_t>(n), what);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
        v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(n);
    return v;
}

std::uint8_t ByteReader::u8(std::string_view what) {
    return static_cast<std::uint8_t>(get_le(1, what));
}

std::uint16_t ByteReader::u16(std::string_view what) {
    return static_cast<std::uint16_t>(get_le(2, what));
}

std::uint32_t ByteReader::u32(std::string_view what) {
    return static_cast<std::uint32_t>(get_le(4, what));
}

std::uint64_t ByteReader::u64(std::string_view what) {
    return get_le(8, what);
}

std::string_view ByteReader::str(std::size_t n, std::string_view what) {
    need(n, what);
    std::string_view s(reinterpret_cast<const char*>(data_.data() + pos_), n);
    pos_ += n;
    return s;
}

void ByteReader::skip(std::size_t n, std::string_view what) {
    need(n, what);
    pos_ += n;
}

Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::IoError, fmt::format("cannot open '{}' for reading", path.string()));
    }
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        fail(ErrorCode::IoError, fmt::format("read error on '{}'", path.string()));
    }
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(ErrorCode::IoError, fmt::format("cannot open '{}' for writing", path.string()));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
        fail(ErrorCode::IoError, fmt::format("write error on '{}'", path.string()));
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    Bytes bytes = read_file(path);
    return std::string(bytes.begin(), bytes.end());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace mvr
