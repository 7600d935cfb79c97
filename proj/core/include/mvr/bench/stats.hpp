#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mvr/bench/tiering.hpp"

namespace mvr::bench {

// Bins are [edges[i], edges[i+1]); the last bin also takes its upper edge.
struct Histogram {
    std::vector<double> edges;
    std::vector<std::size_t> counts;
    std::size_t underflow = 0;
    std::size_t overflow = 0;

    /// Edges must be strictly increasing, at least two (InvalidArgument).
    static Histogram with_edges(std::vector<double> edges);
    void add(double value);

    bool operator==(const Histogram&) const = default;
};

struct StatsConfig {
    std::vector<double> caption_length_edges;
    std::vector<double> bbox_ratio_edges;
    std::vector<double> mask_count_edges;

    static StatsConfig defaults();
};

struct StatsReport {
    std::size_t sample_count = 0;
    std::size_t caption_min_words = 0;
    std::size_t caption_max_words = 0;
    double caption_mean_words = 0.0;
    double bbox_ratio_mean = 0.0;
    // Fraction of samples whose bbox covers strictly less than 10% of the image.
    double bbox_ratio_below_10pct = 0.0;
    std::size_t mask_count_missing = 0;
    Histogram caption_length_hist;
    Histogram bbox_ratio_hist;
    Histogram mask_count_hist;

    bool operator==(const StatsReport&) const = default;
};

/// Word counts use Unicode-whitespace tokenization; bbox ratio is bbox area
/// over image area. Throws EmptyDataset for an empty input.
StatsReport dataset_stats(std::span<const AnnotatedSample> samples,
                          const StatsConfig& config = StatsConfig::defaults());

std::string stats_to_json(const StatsReport& report);

/// Columns: histogram,bin_lo,bin_hi,count
std::string stats_histograms_csv(const StatsReport& report);

}  // namespace mvr::bench
