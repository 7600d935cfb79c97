#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mvr/embedding.hpp"
#include "mvr/gallery.hpp"
#include "mvr/query_set.hpp"

namespace mvr {

/// dot(a, b) / (|a| |b|), accumulated in 64-bit.
/// Throws DimensionMismatch or ZeroVector.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

struct ItemScore {
    double score = 0.0;
    std::size_t best_index = 0;
    SourceTag best_source;
};

/// Max cosine over the item's embeddings. Ties go to the earliest embedding.
ItemScore score_item(const EmbeddingVector& query, const ItemEmbeddingSet& item);

struct RankedItem {
    std::string item_id;
    double score = 0.0;

    bool operator==(const RankedItem&) const = default;
};

struct RetrievalResult {
    std::string query_id;
    // Descending by score, equal scores ordered by item_id ascending.
    std::vector<RankedItem> ranked;

    bool operator==(const RetrievalResult&) const = default;
};

struct SearchOptions {
    // Workers for the per-item scoring pass; 0 = hardware concurrency.
    std::size_t threads = 1;
};

/// Exact top-min(k, |gallery|) search. Throws EmptyGallery, DimensionMismatch,
/// ZeroVector, or InvalidArgument for k == 0.
RetrievalResult search(const QueryRecord& query, const GalleryIndex& gallery, std::size_t k,
                       const SearchOptions& options = {});

/// Runs `search` for every query, parallel over queries. Output order follows
/// input order.
std::vector<RetrievalResult> search_all(std::span<const QueryRecord> queries,
                                        const GalleryIndex& gallery, std::size_t k,
                                        const SearchOptions& options = {});

}  // namespace mvr
