#include "mvr/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mvr/error.hpp"

namespace mvr {

double RecallEntry::at(std::size_t k) const {
    for (const auto& [kk, v] : r_at) {
        if (kk == k) {
            return v;
        }
    }
    fail(ErrorCode::InvalidArgument, fmt::format("no recall computed at k={}", k));
}

void validate_ks(std::span<const std::size_t> ks) {
    if (ks.empty()) {
        fail(ErrorCode::InvalidArgument, "k list is empty");
    }
    std::set<std::size_t> seen;
    for (auto k : ks) {
        if (k == 0) {
            fail(ErrorCode::InvalidArgument, "k must be at least 1");
        }
        if (!seen.insert(k).second) {
            fail(ErrorCode::InvalidArgument, fmt::format("duplicate k={} in k list", k));
        }
    }
}

std::vector<std::size_t> parse_ks(std::string_view text) {
    std::vector<std::size_t> ks;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string_view part = text.substr(start, comma - start);
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size()) {
            fail(ErrorCode::InvalidArgument, fmt::format("bad k list '{}'", text));
        }
        ks.push_back(value);
        start = comma + 1;
    }
    validate_ks(ks);
    return ks;
}

RecallEntry recall_at_k(std::span<const RetrievalResult> results,
                        const std::unordered_map<std::string, std::string>& truths,
                        std::span<const std::size_t> ks) {
    validate_ks(ks);
    std::vector<std::size_t> hits(ks.size(), 0);
    for (const auto& result : results) {
        auto truth = truths.find(result.query_id);
        if (truth == truths.end()) {
            fail(ErrorCode::MissingTruth, fmt::format("no truth for query '{}'", result.query_id));
        }
        auto it = std::find_if(result.ranked.begin(), result.ranked.end(),
                               [&](const RankedItem& r) { return r.item_id == truth->second; });
        if (it == result.ranked.end()) {
            continue;
        }
        const auto rank = static_cast<std::size_t>(it - result.ranked.begin()) + 1;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            if (rank <= ks[i]) {
                ++hits[i];
            }
        }
    }
    RecallEntry entry;
    entry.n = results.size();
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double r = results.empty() ? 0.0
                                         : static_cast<double>(hits[i]) / static_cast<double>(results.size());
        entry.r_at.emplace_back(ks[i], r);
    }
    return entry;
}

EvalReport evaluate(std::span<const QueryRecord> queries, const GalleryIndex& gallery,
                    std::span<const std::size_t> ks, const SearchOptions& options) {
    validate_ks(ks);
    std::unordered_map<std::string, std::string> truths;
    for (const auto& q : queries) {
        if (gallery.find(q.target_item_id) == nullptr) {
            fail(ErrorCode::MissingTruth, fmt::format("query '{}': target item '{}' not in gallery",
                                                      q.query_id, q.target_item_id));
        }
        truths.emplace(q.query_id, q.target_item_id);
    }
    const std::size_t k_max = *std::max_element(ks.begin(), ks.end());
    const auto results = search_all(queries, gallery, k_max, options);

    std::map<std::string, std::vector<RetrievalResult>> by_tier;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        by_tier[queries[i].tier].push_back(results[i]);
    }
    EvalReport report;
    for (const auto& [tier, tier_results] : by_tier) {
        report.tiers.emplace(tier, recall_at_k(tier_results, truths, ks));
    }
    return report;
}

RecallEntry text_retrieval_eval(std::span<const ItemEmbeddingSet> image_queries,
                                std::span<const QueryRecord> caption_gallery,
                                std::span<const std::size_t> ks) {
    validate_ks(ks);
    if (caption_gallery.empty()) {
        fail(ErrorCode::EmptyGallery, "caption gallery is empty");
    }
    std::vector<std::size_t> order(caption_gallery.size());
    std::vector<double> scores(caption_gallery.size());
    std::vector<std::size_t> hits(ks.size(), 0);

    for (const auto& image : image_queries) {
        if (image.embeddings.empty()) {
            fail(ErrorCode::InvalidArgument, fmt::format("image '{}' has no embeddings", image.item_id));
        }
        auto global = std::find_if(image.embeddings.begin(), image.embeddings.end(),
                                   [](const TaggedEmbedding& e) { return e.tag.kind == SourceKind::Global; });
        const EmbeddingVector& q = (global != image.embeddings.end() ? *global : image.embeddings.front()).vector;

        bool owns_any = false;
        for (std::size_t c = 0; c < caption_gallery.size(); ++c) {
            scores[c] = cosine(q, caption_gallery[c].embedding);
            owns_any = owns_any || caption_gallery[c].target_item_id == image.item_id;
        }
        if (!owns_any) {
            fail(ErrorCode::NoCaptions, fmt::format("image '{}' owns no caption", image.item_id));
        }
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (scores[a] != scores[b]) {
                return scores[a] > scores[b];
            }
            return caption_gallery[a].query_id < caption_gallery[b].query_id;
        });
        std::size_t best_rank = 0;
        for (std::size_t r = 0; r < order.size(); ++r) {
            if (caption_gallery[order[r]].target_item_id == image.item_id) {
                best_rank = r + 1;
                break;
            }
        }
        for (std::size_t i = 0; i < ks.size(); ++i) {
            if (best_rank <= ks[i]) {
                ++hits[i];
            }
        }
    }
    RecallEntry entry;
    entry.n = image_queries.size();
    for (std::size_t i = 0; i < ks.size(); ++i) {
        entry.r_at.emplace_back(ks[i], image_queries.empty()
                                           ? 0.0
                                           : static_cast<double>(hits[i]) /
                                                 static_cast<double>(image_queries.size()));
    }
    return entry;
}

std::string report_to_json(const EvalReport& report, const std::optional<std::string>& generated_at) {
    nlohmann::ordered_json root;
    root["tiers"] = nlohmann::ordered_json::object();
    for (const auto& [tier, entry] : report.tiers) {
        nlohmann::ordered_json r_at = nlohmann::ordered_json::object();
        for (const auto& [k, v] : entry.r_at) {
            r_at[std::to_string(k)] = v;
        }
        root["tiers"][tier] = {{"r_at", r_at}, {"n", entry.n}};
    }
    if (generated_at) {
        root["generated_at"] = *generated_at;
    }
    return root.dump(2) + "\n";
}

std::string report_to_table(const EvalReport& report, std::string_view method) {
    constexpr int kCell = 7;
    const int label_width = static_cast<int>(std::max<std::size_t>(method.size(), 6)) + 2;
    std::string tiers_line = fmt::format("{:<{}}", "", label_width);
    std::string ks_line = fmt::format("{:<{}}", "Method", label_width);
    std::string n_line = fmt::format("{:<{}}", "n", label_width);
    std::string row = fmt::format("{:<{}}", method, label_width);
    for (const auto& [tier, entry] : report.tiers) {
        const int group = kCell * static_cast<int>(entry.r_at.size());
        tiers_line += fmt::format("| {:<{}}", tier, group);
        n_line += fmt::format("| {:<{}}", entry.n, group);
        ks_line += "| ";
        row += "| ";
        for (const auto& [k, v] : entry.r_at) {
            ks_line += fmt::format("{:>{}}", fmt::format("R@{}", k), kCell);
            row += fmt::format("{:>{}.1f}", 100.0 * v, kCell);
        }
    }
    return tiers_line + "\n" + ks_line + "\n" + row + "\n" + n_line + "\n";
}

}  // namespace mvr
