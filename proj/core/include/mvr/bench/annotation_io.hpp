#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvr/bench/tiering.hpp"

namespace mvr::bench {

// {"image_id", "width", "height", "bbox": [x, y, w, h], "caption", "mask_count"?}
std::vector<AnnotatedSample> parse_annotations(std::string_view jsonl);
std::vector<AnnotatedSample> load_annotations(const std::filesystem::path& path);
std::string format_annotations(std::span<const AnnotatedSample> samples);

// One line per tier: {"image_id", "level", "crop": [x, y, w, h], "caption"}
std::string format_tiers(std::span<const TierSet> tiers);

// {"image_id", "verdict"}
std::string format_verdicts(std::span<const AnnotatedSample> samples,
                            std::span<const FilterVerdict> verdicts);

}  // namespace mvr::bench
