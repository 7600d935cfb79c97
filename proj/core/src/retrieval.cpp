#include "mvr/retrieval.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "mvr/error.hpp"
#include "mvr/parallel.hpp"

namespace mvr {
namespace {

void require_nonzero(double norm, const char* what) {
    if (!(norm > kZeroNormThreshold)) {
        fail(ErrorCode::ZeroVector, fmt::format("{} has norm below 1e-12", what));
    }
}

// Shared by score_item and search so both produce identical bits.
ItemScore max_pool(std::span<const double> query, double query_norm, const ItemEmbeddingSet& item,
                   std::span<const double> norms) {
    ItemScore best;
    for (std::size_t i = 0; i < item.embeddings.size(); ++i) {
        const auto& e = item.embeddings[i];
        if (!(norms[i] > kZeroNormThreshold)) {
            fail(ErrorCode::ZeroVector, fmt::format("item '{}', embedding {} has norm below 1e-12",
                                                    item.item_id, to_string(e.tag)));
        }
        const double s = kernels::dot(query, e.vector.values()) / (query_norm * norms[i]);
        if (i == 0 || s > best.score) {
            best.score = s;
            best.best_index = i;
        }
    }
    best.best_source = item.embeddings[best.best_index].tag;
    return best;
}

}  // namespace

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        fail(ErrorCode::DimensionMismatch,
             fmt::format("cosine of vectors with dimensions {} and {}", a.dim(), b.dim()));
    }
    const double na = a.norm();
    const double nb = b.norm();
    require_nonzero(na, "first vector");
    require_nonzero(nb, "second vector");
    return kernels::dot(a.values(), b.values()) / (na * nb);
}

ItemScore score_item(const EmbeddingVector& query, const ItemEmbeddingSet& item) {
    if (item.embeddings.empty()) {
        fail(ErrorCode::InvalidArgument, fmt::format("item '{}' has no embeddings", item.item_id));
    }
    std::vector<double> norms;
    norms.reserve(item.embeddings.size());
    for (const auto& e : item.embeddings) {
        if (e.vector.dim() != query.dim()) {
            fail(ErrorCode::DimensionMismatch,
                 fmt::format("query dimension {} vs item '{}' embedding dimension {}", query.dim(),
                             item.item_id, e.vector.dim()));
        }
        norms.push_back(e.vector.norm());
    }
    const double qn = query.norm();
    require_nonzero(qn, "query");
    return max_pool(query.values(), qn, item, norms);
}

RetrievalResult search(const QueryRecord& query, const GalleryIndex& gallery, std::size_t k,
                       const SearchOptions& options) {
    if (k == 0) {
        fail(ErrorCode::InvalidArgument, "k must be at least 1");
    }
    if (gallery.empty()) {
        fail(ErrorCode::EmptyGallery, "gallery has no items");
    }
    if (query.embedding.dim() != gallery.dim()) {
        fail(ErrorCode::DimensionMismatch,
             fmt::format("query '{}' has dimension {}, gallery dimension is {}", query.query_id,
                         query.embedding.dim(), gallery.dim()));
    }
    const double qn = query.embedding.norm();
    if (!(qn > kZeroNormThreshold)) {
        fail(ErrorCode::ZeroVector, fmt::format("query '{}' has norm below 1e-12", query.query_id));
    }

    const std::size_t n = gallery.size();
    std::vector<double> scores(n);
    parallel_for(n, options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            scores[i] = max_pool(query.embedding.values(), qn, gallery.item(i), gallery.norms(i)).score;
        }
    });

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t top = std::min(k, n);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (scores[a] != scores[b]) {
                              return scores[a] > scores[b];
                          }
                          return gallery.item(a).item_id < gallery.item(b).item_id;
                      });

    RetrievalResult result{query.query_id, {}};
    result.ranked.reserve(top);
    for (std::size_t r = 0; r < top; ++r) {
        result.ranked.push_back({gallery.item(order[r]).item_id, scores[order[r]]});
    }
    return result;
}

std::vector<RetrievalResult> search_all(std::span<const QueryRecord> queries,
                                        const GalleryIndex& gallery, std::size_t k,
                                        const SearchOptions& options) {
    std::vector<RetrievalResult> results(queries.size());
    parallel_for(queries.size(), options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            results[i] = search(queries[i], gallery, k, SearchOptions{1});
        }
    });
    return results;
}

}  // namespace mvr
