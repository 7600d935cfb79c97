#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mvr/embedding.hpp"

namespace mvr {

inline constexpr std::size_t kMaxItemIdBytes = 65535;
inline constexpr std::size_t kMaxLabelBytes = 255;
inline constexpr std::size_t kMaxEmbeddingsPerItem = 255;

/// Checks one item against the gallery invariants: non-empty UTF-8 id of at
/// most 65535 bytes, 1..255 embeddings with unique (kind, label) tags, every
/// embedding of dimension `dim` with finite, f32-representable entries.
///
/// Throws DimensionMismatch for a wrong dimension and FormatError for any
/// other violation.
void validate_item(const ItemEmbeddingSet& item, std::uint32_t dim);

// The retrieval candidate pool. Immutable once built, so a const reference
// can be shared freely between threads.
class GalleryIndex {
public:
    GalleryIndex() = default;

    /// Validates every item and rejects duplicate ids. Values are rounded to
    /// f32, the storage precision of a gallery, so that a saved and reloaded
    /// gallery compares equal to the original.
    static GalleryIndex build(std::uint32_t dim, std::vector<ItemEmbeddingSet> items,
                              bool normalized = false);

    std::uint32_t dim() const noexcept { return dim_; }
    bool normalized() const noexcept { return normalized_; }
    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }

    const std::vector<ItemEmbeddingSet>& items() const noexcept { return items_; }
    const ItemEmbeddingSet& item(std::size_t index) const { return items_.at(index); }

    // L2 norms of item `index`'s embeddings, in embedding order.
    std::span<const double> norms(std::size_t index) const { return norms_.at(index); }

    const ItemEmbeddingSet* find(std::string_view item_id) const;

    bool operator==(const GalleryIndex& other) const {
        return dim_ == other.dim_ && normalized_ == other.normalized_ && items_ == other.items_;
    }

private:
    std::uint32_t dim_ = 0;
    bool normalized_ = false;
    std::vector<ItemEmbeddingSet> items_;
    std::vector<std::vector<double>> norms_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

/// Unit-normalizes every embedding (64-bit math, stored back at f32) and
/// sets the normalized flag. Throws ZeroVector naming the offending item.
GalleryIndex normalize_gallery(const GalleryIndex& gallery);

/// Keeps only embeddings whose kind is listed, preserving order. Every item
/// must retain at least one embedding.
GalleryIndex select_sources(const GalleryIndex& gallery, std::span<const SourceKind> kinds);

}  // namespace mvr
