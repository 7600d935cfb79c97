#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvr/embedding.hpp"

namespace mvr::train {

enum class Region : std::uint8_t { LeftUpper = 0, RightUpper = 1, LeftLower = 2, RightLower = 3, Summary = 4 };

inline constexpr std::array<std::string_view, 5> kRegionLabels = {
    "left_upper", "right_upper", "left_lower", "right_lower", "summary"};

std::string_view to_string(Region region);
std::optional<Region> parse_region(std::string_view label);

// One region of an image: the regional-prompt image embedding plus the
// caption written for that region and its text embedding.
struct RegionPair {
    std::string text;
    EmbeddingVector image;
    EmbeddingVector text_embedding;

    bool operator==(const RegionPair&) const = default;
};

struct RegionalTrainSample {
    std::string item_id;
    // Indexed by Region (left_upper, right_upper, left_lower, right_lower).
    std::array<RegionPair, 4> regions;
    // Whole-image pair, only consulted by RegionPolicy::Summary.
    std::optional<RegionPair> summary;

    bool operator==(const RegionalTrainSample&) const = default;
};

struct TrainBatch {
    std::vector<std::string> item_ids;
    std::vector<EmbeddingVector> images;
    std::vector<EmbeddingVector> texts;
    std::vector<Region> regions;

    std::size_t size() const noexcept { return images.size(); }
};

enum class RegionPolicy {
    Random,   // one of the four regions, uniformly, per sample
    Summary,  // always the summary pair (merged-caption ablation)
};

// std::mt19937_64's output sequence is fixed by the standard; everything
// random in training is derived from it with the helpers below so runs are
// reproducible across standard libraries.
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection; bound must be positive.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

/// In-place Fisher-Yates shuffle driven by uniform_index.
void shuffle_indices(std::span<std::size_t> indices, Rng& rng);

/// Throws IncompleteSample when a region (or, for Summary, the summary pair)
/// is missing or has inconsistent dimensions.
void validate_sample(const RegionalTrainSample& sample, RegionPolicy policy = RegionPolicy::Random);

/// One (image, text) pair per sample, both taken from the same region. Item
/// ids must be distinct (InvalidArgument). Deterministic in `seed`.
TrainBatch random_regional_choice(std::span<const RegionalTrainSample* const> samples,
                                  std::uint64_t seed, RegionPolicy policy = RegionPolicy::Random);

TrainBatch random_regional_choice(std::span<const RegionalTrainSample> samples, std::uint64_t seed,
                                  RegionPolicy policy = RegionPolicy::Random);

}  // namespace mvr::train
