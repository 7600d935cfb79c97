#include <gtest/gtest.h>

#include <array>
#include <set>

#include "generators.hpp"
#include "mvr/error.hpp"
#include "mvr/train/sampler.hpp"

namespace mvr::train {
namespace {

RegionalTrainSample labeled_sample(std::string id) {
    // Image and text embeddings both encode the region index so the pairing
    // can be read back from the batch.
    RegionalTrainSample s;
    s.item_id = std::move(id);
    for (std::size_t r = 0; r < 4; ++r) {
        std::vector<double> v(4, 0.0);
        v[r] = 1.0;
        s.regions[r] = {std::string(kRegionLabels[r]), EmbeddingVector(v), EmbeddingVector(v)};
    }
    return s;
}

std::size_t hot_index(const EmbeddingVector& v) {
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (v[i] == 1.0) {
            return i;
        }
    }
    return v.dim();
}

TEST(Sampler, SingleSampleLabelsMatch) {
    const std::vector<RegionalTrainSample> samples = {labeled_sample("a")};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto batch = random_regional_choice(samples, seed);
        ASSERT_EQ(batch.size(), 1u);
        const auto region = static_cast<std::size_t>(batch.regions[0]);
        EXPECT_EQ(hot_index(batch.images[0]), region);
        EXPECT_EQ(hot_index(batch.texts[0]), region);
        EXPECT_EQ(batch.item_ids[0], "a");
    }
}

TEST(Sampler, RegionFrequenciesAreUniform) {
    const std::vector<RegionalTrainSample> samples = {labeled_sample("a")};
    std::array<int, 4> counts{};
    constexpr int kDraws = 40000;
    for (int seed = 0; seed < kDraws; ++seed) {
        ++counts[static_cast<std::size_t>(random_regional_choice(samples, seed).regions[0])];
    }
    for (int c : counts) {
        const double freq = static_cast<double>(c) / kDraws;
        EXPECT_GE(freq, 0.24);
        EXPECT_LE(freq, 0.26);
    }
}

TEST(Sampler, DeterministicPerSeedAndOnePairPerItem) {
    std::vector<RegionalTrainSample> samples;
    for (int i = 0; i < 64; ++i) {
        samples.push_back(labeled_sample("item" + std::to_string(i)));
    }
    const auto a = random_regional_choice(samples, 123);
    const auto b = random_regional_choice(samples, 123);
    EXPECT_EQ(a.regions, b.regions);
    EXPECT_EQ(a.images, b.images);
    EXPECT_EQ(a.item_ids, b.item_ids);
    EXPECT_EQ(std::set<std::string>(a.item_ids.begin(), a.item_ids.end()).size(), samples.size());
    EXPECT_NE(random_regional_choice(samples, 124).regions, a.regions);
}

TEST(Sampler, SummaryPolicy) {
    auto s = labeled_sample("a");
    const std::vector<RegionalTrainSample> without = {s};
    try {
        random_regional_choice(without, 1, RegionPolicy::Summary);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IncompleteSample);
    }
    s.summary = RegionPair{"whole", {1, 1, 1, 1}, {2, 2, 2, 2}};
    const std::vector<RegionalTrainSample> with = {s};
    const auto batch = random_regional_choice(with, 1, RegionPolicy::Summary);
    EXPECT_EQ(batch.regions[0], Region::Summary);
    EXPECT_EQ(batch.texts[0], (EmbeddingVector{2, 2, 2, 2}));
}

TEST(Sampler, Errors) {
    auto incomplete = labeled_sample("a");
    incomplete.regions[2].image = EmbeddingVector{};
    try {
        validate_sample(incomplete);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IncompleteSample);
    }
    const std::vector<RegionalTrainSample> dup = {labeled_sample("a"), labeled_sample("a")};
    try {
        random_regional_choice(dup, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
}

TEST(Rng, UniformIndexAndShuffle) {
    Rng rng(5);
    std::array<int, 7> counts{};
    for (int i = 0; i < 70000; ++i) {
        const auto v = uniform_index(rng, 7);
        ASSERT_LT(v, 7u);
        ++counts[v];
    }
    for (int c : counts) {
        EXPECT_NEAR(c, 10000, 500);
    }
    std::vector<std::size_t> idx(100);
    std::iota(idx.begin(), idx.end(), 0);
    shuffle_indices(idx, rng);
    auto sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        EXPECT_EQ(sorted[i], i);
    }
    EXPECT_THROW(uniform_index(rng, 0), Error);
}

TEST(Rng, StreamIsPinned) {
    // mt19937_64's 10000th output is fixed by the C++ standard.
    Rng rng;
    rng.discard(9999);
    EXPECT_EQ(rng(), 9981545732273789042ULL);
}

}  // namespace
}  // namespace mvr::train
