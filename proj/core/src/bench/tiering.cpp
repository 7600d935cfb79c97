#include "mvr/bench/tiering.hpp"

#include <fmt/format.h>

#include "mvr/error.hpp"
#include "mvr/utf8.hpp"

namespace mvr::bench {

void validate(const AnnotatedSample& sample) {
    const auto bad = [&](std::string_view why) {
        fail(ErrorCode::InvalidArgument, fmt::format("sample '{}': {}", sample.image_id, why));
    };
    if (sample.image_id.empty()) {
        bad("empty image_id");
    }
    if (sample.image.width <= 0 || sample.image.height <= 0) {
        bad("image size must be positive");
    }
    if (sample.bbox.w <= 0 || sample.bbox.h <= 0 || sample.bbox.x < 0 || sample.bbox.y < 0) {
        bad("bbox must have non-negative origin and positive size");
    }
    if (!sample.image.bounds().contains(sample.bbox)) {
        bad("bbox extends outside the image");
    }
    if (sample.caption.empty()) {
        bad("empty caption");
    }
    if (sample.mask_count && *sample.mask_count < 0) {
        bad("negative mask_count");
    }
}

std::string_view to_string(TierLevel level) {
    switch (level) {
        case TierLevel::FullRes: return "full_res";
        case TierLevel::Zoom2: return "zoom2";
        case TierLevel::Zoom3: return "zoom3";
    }
    return "unknown";
}

TierSet build_tiers(const AnnotatedSample& sample) {
    validate(sample);
    TierSet out{sample.image_id, sample.caption, {}};
    const Rect whole = sample.image.bounds();
    out.tiers[0] = {TierLevel::FullRes, whole, whole.contains(sample.bbox)};
    const std::array<std::pair<TierLevel, int>, 2> zooms = {{{TierLevel::Zoom2, 2}, {TierLevel::Zoom3, 3}}};
    for (std::size_t i = 0; i < zooms.size(); ++i) {
        const auto [level, n] = zooms[i];
        const auto choice = select_cell(sample.image, sample.bbox, n);
        const Rect cell = grid_cells(sample.image, n)[choice.index];
        const Rect crop = extend_to_include(cell, sample.bbox, sample.image);
        out.tiers[i + 1] = {level, crop, crop.contains(sample.bbox)};
    }
    return out;
}

std::string_view to_string(FilterVerdict verdict) {
    switch (verdict) {
        case FilterVerdict::Keep: return "keep";
        case FilterVerdict::RejectBboxTooLarge: return "reject_bbox_too_large";
        case FilterVerdict::FlagShortCaption: return "flag_short_caption";
    }
    return "unknown";
}

FilterVerdict auto_filter(const AnnotatedSample& sample) {
    validate(sample);
    // bbox / image > 1/5  <=>  5 * bbox > image
    if (sample.bbox.area() * kMaxBboxRatioDenominator > sample.image.width * sample.image.height *
                                                            kMaxBboxRatioNumerator) {
        return FilterVerdict::RejectBboxTooLarge;
    }
    if (utf8::word_count(sample.caption) < kMinCaptionWords) {
        return FilterVerdict::FlagShortCaption;
    }
    return FilterVerdict::Keep;
}

}  // namespace mvr::bench
