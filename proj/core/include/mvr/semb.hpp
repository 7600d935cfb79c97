#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "mvr/binary_io.hpp"
#include "mvr/gallery.hpp"

namespace mvr {

// SEMB: source-tagged multi-embedding gallery file, little-endian.
//
//   header   "SEMB" | version u16 (=1) | dim u32 | item_count u64 | flags u8
//   item     id_len u16 | id bytes | K u8 | K x record
//   record   source_kind u8 | label_len u8 | label bytes | dim x f32
//
// flags bit 0 marks a normalized gallery; other bits must be zero.
inline constexpr std::uint16_t kSembVersion = 1;
inline constexpr std::uint8_t kSembFlagNormalized = 0x01;

Bytes encode_gallery(const GalleryIndex& gallery);

/// Parses and fully validates a SEMB byte stream. Any malformed input throws
/// FormatError (with the byte offset), DimensionMismatch or DuplicateItemId;
/// nothing partially decoded is returned.
GalleryIndex decode_gallery(std::span<const std::uint8_t> bytes);

GalleryIndex load_gallery(const std::filesystem::path& path);
void save_gallery(const GalleryIndex& gallery, const std::filesystem::path& path);

}  // namespace mvr
