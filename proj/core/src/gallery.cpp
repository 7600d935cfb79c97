#include "mvr/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/format.h>

#include "mvr/error.hpp"
#include "mvr/utf8.hpp"

namespace mvr {
namespace {

bool fits_f32(double v) {
    return std::isfinite(v) && std::fabs(v) <= static_cast<double>(std::numeric_limits<float>::max());
}

void round_to_f32(ItemEmbeddingSet& item) {
    for (auto& e : item.embeddings) {
        for (double& v : e.vector.mutable_values()) {
            v = static_cast<double>(static_cast<float>(v));
        }
    }
}

}  // namespace

void validate_item(const ItemEmbeddingSet& item, std::uint32_t dim) {
    if (item.item_id.empty()) {
        fail(ErrorCode::FormatError, "item id is empty");
    }
    if (item.item_id.size() > kMaxItemIdBytes) {
        fail(ErrorCode::FormatError, fmt::format("item id longer than {} bytes", kMaxItemIdBytes));
    }
    if (!utf8::is_valid(item.item_id)) {
        fail(ErrorCode::FormatError, "item id is not valid UTF-8");
    }
    if (item.embeddings.empty() || item.embeddings.size() > kMaxEmbeddingsPerItem) {
        fail(ErrorCode::FormatError,
             fmt::format("item '{}' has {} embeddings, expected 1..{}", item.item_id,
                         item.embeddings.size(), kMaxEmbeddingsPerItem));
    }
    std::set<SourceTag> seen;
    for (const auto& e : item.embeddings) {
        if (e.tag.label.size() > kMaxLabelBytes) {
            fail(ErrorCode::FormatError,
                 fmt::format("item '{}': label longer than {} bytes", item.item_id, kMaxLabelBytes));
        }
        if (!seen.insert(e.tag).second) {
            fail(ErrorCode::FormatError,
                 fmt::format("item '{}': duplicate source tag {}", item.item_id, to_string(e.tag)));
        }
        if (e.vector.dim() != dim) {
            fail(ErrorCode::DimensionMismatch,
                 fmt::format("item '{}': embedding {} has dimension {}, expected {}", item.item_id,
                             to_string(e.tag), e.vector.dim(), dim));
        }
        for (double v : e.vector.values()) {
            if (!fits_f32(v)) {
                fail(ErrorCode::FormatError,
                     fmt::format("item '{}': embedding {} has a non-finite or out-of-range entry",
                                 item.item_id, to_string(e.tag)));
            }
        }
    }
}

GalleryIndex GalleryIndex::build(std::uint32_t dim, std::vector<ItemEmbeddingSet> items,
                                 bool normalized) {
    if (dim == 0) {
        fail(ErrorCode::FormatError, "gallery dimension must be positive");
    }
    GalleryIndex g;
    g.dim_ = dim;
    g.normalized_ = normalized;
    g.by_id_.reserve(items.size());
    g.norms_.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        auto& item = items[i];
        validate_item(item, dim);
        if (!g.by_id_.emplace(item.item_id, i).second) {
            fail(ErrorCode::DuplicateItemId, fmt::format("item id '{}' appears twice", item.item_id));
        }
        round_to_f32(item);
        std::vector<double> norms;
        norms.reserve(item.embeddings.size());
        for (const auto& e : item.embeddings) {
            norms.push_back(kernels::norm(e.vector.values()));
        }
        g.norms_.push_back(std::move(norms));
    }
    g.items_ = std::move(items);
    return g;
}

const ItemEmbeddingSet* GalleryIndex::find(std::string_view item_id) const {
    auto it = by_id_.find(std::string(item_id));
    return it == by_id_.end() ? nullptr : &items_[it->second];
}

GalleryIndex normalize_gallery(const GalleryIndex& gallery) {
    std::vector<ItemEmbeddingSet> items = gallery.items();
    for (auto& item : items) {
        for (auto& e : item.embeddings) {
            try {
                e.vector = normalize(e.vector);
            } catch (const Error& err) {
                fail(err.code(), fmt::format("item '{}', embedding {}: {}", item.item_id,
                                             to_string(e.tag), err.message()));
            }
        }
    }
    return GalleryIndex::build(gallery.dim(), std::move(items), true);
}

GalleryIndex select_sources(const GalleryIndex& gallery, std::span<const SourceKind> kinds) {
    std::vector<ItemEmbeddingSet> items;
    items.reserve(gallery.size());
    for (const auto& item : gallery.items()) {
        ItemEmbeddingSet kept{item.item_id, {}};
        for (const auto& e : item.embeddings) {
            if (std::find(kinds.begin(), kinds.end(), e.tag.kind) != kinds.end()) {
                kept.embeddings.push_back(e);
            }
        }
        if (kept.embeddings.empty()) {
            fail(ErrorCode::InvalidArgument,
                 fmt::format("item '{}' has no embedding of the selected source kinds", item.item_id));
        }
        items.push_back(std::move(kept));
    }
    return GalleryIndex::build(gallery.dim(), std::move(items), gallery.normalized());
}

}  // namespace mvr
