#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "mvr/bench/geometry.hpp"

namespace mvr::bench {

struct AnnotatedSample {
    std::string image_id;
    ImageSize image;
    Rect bbox;
    std::string caption;
    std::optional<std::int64_t> mask_count;

    bool operator==(const AnnotatedSample&) const = default;
};

/// Throws InvalidArgument unless the image has positive size, the bbox has
/// positive size and lies inside the image, the caption is non-empty and
/// mask_count (when present) is non-negative.
void validate(const AnnotatedSample& sample);

enum class TierLevel { FullRes, Zoom2, Zoom3 };

std::string_view to_string(TierLevel level);

struct TierCrop {
    TierLevel level = TierLevel::FullRes;
    Rect crop;
    bool contains_bbox = false;

    bool operator==(const TierCrop&) const = default;
};

// The three difficulty levels of one sample. The caption is shared by all
// of them.
struct TierSet {
    std::string image_id;
    std::string caption;
    std::array<TierCrop, 3> tiers;
};

/// full_res is the whole image; zoom2 / zoom3 are the 2x2 / 3x3 grid cells
/// that overlap the bbox most, grown until they contain it.
TierSet build_tiers(const AnnotatedSample& sample);

enum class FilterVerdict { Keep, RejectBboxTooLarge, FlagShortCaption };

std::string_view to_string(FilterVerdict verdict);

inline constexpr std::int64_t kMaxBboxRatioNumerator = 1;  // ratio limit 1/5
inline constexpr std::int64_t kMaxBboxRatioDenominator = 5;
inline constexpr std::size_t kMinCaptionWords = 8;

/// Rejects samples whose bbox covers more than 20% of the image; otherwise
/// flags captions of fewer than 8 whitespace-separated words. The ratio test
/// is done in exact integer arithmetic.
FilterVerdict auto_filter(const AnnotatedSample& sample);

}  // namespace mvr::bench
