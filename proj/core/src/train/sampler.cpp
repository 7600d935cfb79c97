#include "mvr/train/sampler.hpp"

#include <limits>
#include <unordered_set>

#include <fmt/format.h>

#include "mvr/error.hpp"

namespace mvr::train {

std::string_view to_string(Region region) {
    return kRegionLabels[static_cast<std::size_t>(region)];
}

std::optional<Region> parse_region(std::string_view label) {
    for (std::size_t i = 0; i < kRegionLabels.size(); ++i) {
        if (kRegionLabels[i] == label) {
            return static_cast<Region>(i);
        }
    }
    return std::nullopt;
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
    if (bound == 0) {
        fail(ErrorCode::InvalidArgument, "uniform_index bound must be positive");
    }
    // reject the tail that would bias the modulo
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v = rng();
    while (v >= limit) {
        v = rng();
    }
    return v % bound;
}

void shuffle_indices(std::span<std::size_t> indices, Rng& rng) {
    for (std::size_t i = indices.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(indices[i - 1], indices[j]);
    }
}

void validate_sample(const RegionalTrainSample& sample, RegionPolicy policy) {
    const auto check = [&](const RegionPair& pair, std::string_view label, std::size_t image_dim,
                           std::size_t text_dim) {
        if (pair.image.dim() == 0 || pair.text_embedding.dim() == 0) {
            fail(ErrorCode::IncompleteSample,
                 fmt::format("sample '{}': region {} is missing an embedding", sample.item_id, label));
        }
        if (pair.image.dim() != image_dim || pair.text_embedding.dim() != text_dim) {
            fail(ErrorCode::IncompleteSample,
                 fmt::format("sample '{}': region {} has inconsistent dimensions", sample.item_id, label));
        }
    };
    const std::size_t image_dim = sample.regions[0].image.dim();
    const std::size_t text_dim = sample.regions[0].text_embedding.dim();
    for (std::size_t r = 0; r < sample.regions.size(); ++r) {
        check(sample.regions[r], kRegionLabels[r], image_dim, text_dim);
    }
    if (policy == RegionPolicy::Summary) {
        if (!sample.summary) {
            fail(ErrorCode::IncompleteSample,
                 fmt::format("sample '{}' has no summary pair", sample.item_id));
        }
        check(*sample.summary, "summary", image_dim, text_dim);
    }
}

TrainBatch random_regional_choice(std::span<const RegionalTrainSample* const> samples,
                                  std::uint64_t seed, RegionPolicy policy) {
    Rng rng(seed);
    TrainBatch batch;
    batch.item_ids.reserve(samples.size());
    batch.images.reserve(samples.size());
    batch.texts.reserve(samples.size());
    batch.regions.reserve(samples.size());
    std::unordered_set<std::string_view> seen;
    for (const RegionalTrainSample* sample : samples) {
        validate_sample(*sample, policy);
        if (!seen.insert(sample->item_id).second) {
            fail(ErrorCode::InvalidArgument,
                 fmt::format("item '{}' would appear twice in one batch", sample->item_id));
        }
        Region region = Region::Summary;
        const RegionPair* pair = nullptr;
        if (policy == RegionPolicy::Summary) {
            pair = &*sample->summary;
        } else {
            region = static_cast<Region>(uniform_index(rng, 4));
            pair = &sample->regions[static_cast<std::size_t>(region)];
        }
        batch.item_ids.push_back(sample->item_id);
        batch.images.push_back(pair->image);
        batch.texts.push_back(pair->text_embedding);
        batch.regions.push_back(region);
    }
    return batch;
}

TrainBatch random_regional_choice(std::span<const RegionalTrainSample> samples, std::uint64_t seed,
                                  RegionPolicy policy) {
    std::vector<const RegionalTrainSample*> ptrs;
    ptrs.reserve(samples.size());
    for (const auto& s : samples) {
        ptrs.push_back(&s);
    }
    return random_regional_choice(std::span<const RegionalTrainSample* const>(ptrs), seed, policy);
}

}  // namespace mvr::train
