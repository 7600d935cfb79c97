#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mvr/gallery.hpp"
#include "mvr/query_set.hpp"
#include "mvr/retrieval.hpp"

namespace mvr {

/// Recall values keyed by k, in the order the ks were requested.
struct RecallEntry {
    std::vector<std::pair<std::size_t, double>> r_at;
    std::size_t n = 0;

    double at(std::size_t k) const;
    bool operator==(const RecallEntry&) const = default;
};

struct EvalReport {
    std::map<std::string, RecallEntry> tiers;

    bool operator==(const EvalReport&) const = default;
};

/// Rejects an empty list, k == 0 and repeated values (InvalidArgument).
void validate_ks(std::span<const std::size_t> ks);

/// Parses "1,5,10" into {1, 5, 10}; the result is validated.
std::vector<std::size_t> parse_ks(std::string_view text);

/// R@k = fraction of results whose truth item is within the top k.
/// Throws MissingTruth if a result has no truth entry.
RecallEntry recall_at_k(std::span<const RetrievalResult> results,
                        const std::unordered_map<std::string, std::string>& truths,
                        std::span<const std::size_t> ks);

/// Full text-to-image harness: searches every query with k = max(ks) and
/// groups recall by QueryRecord::tier. Throws MissingTruth when a target item
/// is not in the gallery.
EvalReport evaluate(std::span<const QueryRecord> queries, const GalleryIndex& gallery,
                    std::span<const std::size_t> ks, const SearchOptions& options = {});

/// Image-to-text variant. Each image is queried with its global embedding
/// (first embedding when it has none) against all captions; an image scores
/// a hit at k when any caption it owns ranks within k. Captions tie-break by
/// query_id. Throws NoCaptions when an image owns no caption.
RecallEntry text_retrieval_eval(std::span<const ItemEmbeddingSet> image_queries,
                                std::span<const QueryRecord> caption_gallery,
                                std::span<const std::size_t> ks);

std::string report_to_json(const EvalReport& report,
                           const std::optional<std::string>& generated_at = std::nullopt);

/// Percent values, tiers as column groups and one row for `method`.
std::string report_to_table(const EvalReport& report, std::string_view method);

}  // namespace mvr
