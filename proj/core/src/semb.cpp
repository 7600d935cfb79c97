#include "mvr/semb.hpp"

#include <algorithm>
#include <optional>

#include <fmt/format.h>

#include "mvr/error.hpp"

namespace mvr {
namespace {

constexpr std::string_view kMagic = "SEMB";
constexpr std::size_t kHeaderSize = 4 + 2 + 4 + 8 + 1;
// id_len + 1-byte id + K + one record header
constexpr std::size_t kMinItemBytes = 2 + 1 + 1 + 2;

struct Header {
    std::uint32_t dim;
    std::uint64_t count;
    bool normalized;
};

Header read_header(ByteReader& r) {
    if (r.str(4, "magic") != kMagic) {
        fail(ErrorCode::FormatError, "bad magic at byte offset 0: not a SEMB file");
    }
    const auto version = r.u16("version");
    if (version != kSembVersion) {
        fail(ErrorCode::FormatError, fmt::format("unsupported SEMB version {} at byte offset 4", version));
    }
    const auto dim = r.u32("dim");
    if (dim == 0) {
        fail(ErrorCode::FormatError, "dimension 0 at byte offset 6");
    }
    const auto count = r.u64("item_count");
    const auto flags = r.u8("flags");
    if ((flags & ~kSembFlagNormalized) != 0) {
        fail(ErrorCode::FormatError, fmt::format("unknown flag bits 0x{:02x} at byte offset 18", flags));
    }
    return {dim, count, (flags & kSembFlagNormalized) != 0};
}

ItemEmbeddingSet read_item(ByteReader& r, std::uint32_t dim) {
    ItemEmbeddingSet item;
    const auto id_len = r.u16("id_len");
    item.item_id = std::string(r.str(id_len, "item id"));
    const std::size_t k_offset = r.offset();
    const auto k = r.u8("K");
    if (k == 0) {
        fail(ErrorCode::FormatError,
             fmt::format("item '{}' has K=0 at byte offset {}", item.item_id, k_offset));
    }
    item.embeddings.reserve(k);
    for (std::uint8_t i = 0; i < k; ++i) {
        const std::size_t kind_offset = r.offset();
        const auto kind = r.u8("source_kind");
        if (kind > static_cast<std::uint8_t>(SourceKind::SynonymPrompt)) {
            fail(ErrorCode::FormatError,
                 fmt::format("invalid source_kind {} at byte offset {}", kind, kind_offset));
        }
        const auto label_len = r.u8("label_len");
        TaggedEmbedding e;
        e.tag = {static_cast<SourceKind>(kind), std::string(r.str(label_len, "label"))};
        std::vector<double> values(dim);
        for (auto& v : values) {
            v = static_cast<double>(r.f32("embedding value"));
        }
        e.vector = EmbeddingVector(std::move(values));
        item.embeddings.push_back(std::move(e));
    }
    return item;
}

// Structural walk of one item at an assumed dimension; returns the offset just
// past it, or nullopt when the bytes cannot be an item of that shape.
std::optional<std::size_t> skip_item(std::span<const std::uint8_t> bytes, std::size_t offset,
                                     std::uint64_t dim) {
    try {
        ByteReader r(bytes, offset);
        const auto id_len = r.u16("id_len");
        if (id_len == 0) {
            return std::nullopt;
        }
        r.skip(id_len, "item id");
        const auto k = r.u8("K");
        if (k == 0) {
            return std::nullopt;
        }
        for (std::uint8_t i = 0; i < k; ++i) {
            if (r.u8("source_kind") > static_cast<std::uint8_t>(SourceKind::SynonymPrompt)) {
                return std::nullopt;
            }
            r.skip(r.u8("label_len"), "label");
            if (dim * 4 > r.remaining()) {
                return std::nullopt;
            }
            r.skip(static_cast<std::size_t>(dim * 4), "embedding");
        }
        return r.offset();
    } catch (const Error&) {
        return std::nullopt;
    }
}

bool rest_parses(std::span<const std::uint8_t> bytes, std::size_t offset, std::uint64_t items_left,
                 std::uint32_t dim) {
    for (std::uint64_t i = 0; i < items_left; ++i) {
        auto next = skip_item(bytes, offset, dim);
        if (!next) {
            return false;
        }
        offset = *next;
    }
    return offset == bytes.size();
}

// Called after a structural failure at item `failed_index`. If one item near
// the failure is well-formed at a different dimension and the remainder of the
// file then parses cleanly at the header dimension, the failure is really a
// dimension mismatch on that item.
void diagnose_dimension_mismatch(std::span<const std::uint8_t> bytes, const Header& header,
                                 const std::vector<std::size_t>& item_offsets,
                                 std::size_t failed_index) {
    const std::size_t first = failed_index >= 2 ? failed_index - 2 : 0;
    for (std::size_t j = first; j <= failed_index && j < item_offsets.size() && j < header.count; ++j) {
        const std::size_t offset = item_offsets[j];
        if (rest_parses(bytes, offset, header.count - j, header.dim)) {
            return;
        }
        std::string item_id;
        try {
            ByteReader r(bytes, offset);
            item_id = std::string(r.str(r.u16("id_len"), "item id"));
        } catch (const Error&) {
            return;
        }
        const std::uint64_t max_dim = (bytes.size() - offset) / 4;
        for (std::uint64_t alt = 1; alt <= max_dim; ++alt) {
            if (alt == header.dim) {
                continue;
            }
            // A narrow final item is indistinguishable from a truncated file.
            if (alt < header.dim && j + 1 == header.count) {
                continue;
            }
            auto next = skip_item(bytes, offset, alt);
            if (next && rest_parses(bytes, *next, header.count - j - 1, header.dim)) {
                fail(ErrorCode::DimensionMismatch,
                     fmt::format("item '{}' at byte offset {} has embeddings of dimension {}, "
                                 "gallery dimension is {}",
                                 item_id, offset, alt, header.dim));
            }
        }
    }
}

}  // namespace

Bytes encode_gallery(const GalleryIndex& gallery) {
    ByteWriter w;
    w.raw(kMagic);
    w.u16(kSembVersion);
    w.u32(gallery.dim());
    w.u64(gallery.size());
    w.u8(gallery.normalized() ? kSembFlagNormalized : 0);
    for (const auto& item : gallery.items()) {
        validate_item(item, gallery.dim());
        w.u16(static_cast<std::uint16_t>(item.item_id.size()));
        w.raw(item.item_id);
        w.u8(static_cast<std::uint8_t>(item.embeddings.size()));
        for (const auto& e : item.embeddings) {
            w.u8(static_cast<std::uint8_t>(e.tag.kind));
            w.u8(static_cast<std::uint8_t>(e.tag.label.size()));
            w.raw(e.tag.label);
            for (double v : e.vector.values()) {
                w.f32(static_cast<float>(v));
            }
        }
    }
    return w.take();
}

GalleryIndex decode_gallery(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    const Header header = read_header(r);

    std::vector<ItemEmbeddingSet> items;
    items.reserve(static_cast<std::size_t>(
        std::min<std::uint64_t>(header.count, (bytes.size() - kHeaderSize) / kMinItemBytes + 1)));
    std::vector<std::size_t> item_offsets;
    try {
        for (std::uint64_t i = 0; i < header.count; ++i) {
            item_offsets.push_back(r.offset());
            items.push_back(read_item(r, header.dim));
        }
        if (!r.at_end()) {
            item_offsets.push_back(r.offset());
            fail(ErrorCode::FormatError,
                 fmt::format("{} trailing bytes at byte offset {}", r.remaining(), r.offset()));
        }
    } catch (const Error& err) {
        if (err.code() == ErrorCode::FormatError && !item_offsets.empty()) {
            diagnose_dimension_mismatch(bytes, header, item_offsets, item_offsets.size() - 1);
        }
        throw;
    }
    return GalleryIndex::build(header.dim, std::move(items), header.normalized);
}

GalleryIndex load_gallery(const std::filesystem::path& path) {
    const Bytes bytes = read_file(path);
    try {
        return decode_gallery(bytes);
    } catch (const Error& err) {
        fail(err.code(), fmt::format("{}: {}", path.string(), err.message()));
    }
}

void save_gallery(const GalleryIndex& gallery, const std::filesystem::path& path) {
    const Bytes bytes = encode_gallery(gallery);
    write_file(path, bytes);
}

}  // namespace mvr
