#include "mvr/bench/stats.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mvr/error.hpp"
#include "mvr/utf8.hpp"

namespace mvr::bench {
namespace {

std::vector<double> linear_edges(double lo, double step, std::size_t bins) {
    std::vector<double> edges;
    for (std::size_t i = 0; i <= bins; ++i) {
        edges.push_back(lo + step * static_cast<double>(i));
    }
    return edges;
}

nlohmann::ordered_json histogram_json(const Histogram& h) {
    return {{"edges", h.edges}, {"counts", h.counts}, {"underflow", h.underflow}, {"overflow", h.overflow}};
}

}  // namespace

Histogram Histogram::with_edges(std::vector<double> edges) {
    if (edges.size() < 2) {
        fail(ErrorCode::InvalidArgument, "a histogram needs at least two edges");
    }
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i] > edges[i - 1])) {
            fail(ErrorCode::InvalidArgument, "histogram edges must be strictly increasing");
        }
    }
    Histogram h;
    h.counts.assign(edges.size() - 1, 0);
    h.edges = std::move(edges);
    return h;
}

void Histogram::add(double value) {
    if (value < edges.front()) {
        ++underflow;
        return;
    }
    if (value > edges.back()) {
        ++overflow;
        return;
    }
    auto it = std::upper_bound(edges.begin(), edges.end(), value);
    auto bin = static_cast<std::size_t>(it - edges.begin()) - 1;
    ++counts[std::min(bin, counts.size() - 1)];
}

StatsConfig StatsConfig::defaults() {
    return {linear_edges(0.0, 2.0, 25), linear_edges(0.0, 0.01, 20), linear_edges(0.0, 25.0, 20)};
}

StatsReport dataset_stats(std::span<const AnnotatedSample> samples, const StatsConfig& config) {
    if (samples.empty()) {
        fail(ErrorCode::EmptyDataset, "no samples");
    }
    StatsReport report;
    report.sample_count = samples.size();
    report.caption_length_hist = Histogram::with_edges(config.caption_length_edges);
    report.bbox_ratio_hist = Histogram::with_edges(config.bbox_ratio_edges);
    report.mask_count_hist = Histogram::with_edges(config.mask_count_edges);
    report.caption_min_words = static_cast<std::size_t>(-1);

    std::size_t total_words = 0;
    std::size_t below_10pct = 0;
    double ratio_sum = 0.0;
    for (const auto& sample : samples) {
        validate(sample);
        const std::size_t words = utf8::word_count(sample.caption);
        total_words += words;
        report.caption_min_words = std::min(report.caption_min_words, words);
        report.caption_max_words = std::max(report.caption_max_words, words);
        report.caption_length_hist.add(static_cast<double>(words));

        const std::int64_t image_area = sample.image.width * sample.image.height;
        const double ratio = static_cast<double>(sample.bbox.area()) / static_cast<double>(image_area);
        ratio_sum += ratio;
        report.bbox_ratio_hist.add(ratio);
        if (sample.bbox.area() * 10 < image_area) {
            ++below_10pct;
        }

        if (sample.mask_count) {
            report.mask_count_hist.add(static_cast<double>(*sample.mask_count));
        } else {
            ++report.mask_count_missing;
        }
    }
    const double n = static_cast<double>(samples.size());
    report.caption_mean_words = static_cast<double>(total_words) / n;
    report.bbox_ratio_mean = ratio_sum / n;
    report.bbox_ratio_below_10pct = static_cast<double>(below_10pct) / n;
    return report;
}

std::string stats_to_json(const StatsReport& report) {
    nlohmann::ordered_json root;
    root["sample_count"] = report.sample_count;
    root["caption_words"] = {{"min", report.caption_min_words},
                             {"max", report.caption_max_words},
                             {"mean", report.caption_mean_words}};
    root["bbox_ratio"] = {{"mean", report.bbox_ratio_mean},
                          {"fraction_below_0.10", report.bbox_ratio_below_10pct}};
    root["mask_count_missing"] = report.mask_count_missing;
    root["histograms"] = {{"caption_length", histogram_json(report.caption_length_hist)},
                          {"bbox_ratio", histogram_json(report.bbox_ratio_hist)},
                          {"mask_count", histogram_json(report.mask_count_hist)}};
    return root.dump(2) + "\n";
}

std::string stats_histograms_csv(const StatsReport& report) {
    std::string out = "histogram,bin_lo,bin_hi,count\n";
    const auto emit = [&](std::string_view name, const Histogram& h) {
        for (std::size_t i = 0; i < h.counts.size(); ++i) {
            out += fmt::format("{},{:.9g},{:.9g},{}\n", name, h.edges[i], h.edges[i + 1], h.counts[i]);
        }
    };
    emit("caption_length", report.caption_length_hist);
    emit("bbox_ratio", report.bbox_ratio_hist);
    emit("mask_count", report.mask_count_hist);
    return out;
}

}  // namespace mvr::bench
