#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mvr/train/sampler.hpp"

namespace mvr::train {

// How vectors are written inside training JSON-Lines: as number arrays or
// as base64 of little-endian f32 bytes.
enum class VectorEncoding { Inline, Base64 };

std::optional<VectorEncoding> parse_vector_encoding(std::string_view name);

// One sample per line:
//   {"item_id": "...",
//    "regions": {"left_upper": {"text": "...", "image_embedding": V, "text_embedding": V}, ...},
//    "summary": {...}}            <- optional
// A missing region or embedding throws IncompleteSample; other problems
// throw FormatError naming the line.
std::vector<RegionalTrainSample> parse_train_samples(std::string_view jsonl, VectorEncoding encoding);
std::vector<RegionalTrainSample> load_train_samples(const std::filesystem::path& path,
                                                    VectorEncoding encoding);

std::string format_train_samples(const std::vector<RegionalTrainSample>& samples,
                                 VectorEncoding encoding);
void save_train_samples(const std::vector<RegionalTrainSample>& samples,
                        const std::filesystem::path& path, VectorEncoding encoding);

std::string base64_encode_f32(std::span<const double> values);
std::vector<double> base64_decode_f32(std::string_view text);

}  // namespace mvr::train
