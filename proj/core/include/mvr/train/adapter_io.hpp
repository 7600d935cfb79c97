#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "mvr/binary_io.hpp"
#include "mvr/train/infonce.hpp"

namespace mvr::train {

// SADP checkpoint, little-endian:
//   "SADP" | version u16 (=1) | d_in u32 | d_out u32 | tau f64 | d_in*d_out f32 (row-major)
inline constexpr std::uint16_t kSadpVersion = 1;

Bytes encode_adapter(const AdapterParams& params);
AdapterParams decode_adapter(std::span<const std::uint8_t> bytes);

void save_adapter(const AdapterParams& params, const std::filesystem::path& path);
AdapterParams load_adapter(const std::filesystem::path& path);

}  // namespace mvr::train
