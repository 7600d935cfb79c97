#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mvr {

// Wire values are fixed by the SEMB format.
enum class SourceKind : std::uint8_t {
    RegionalPrompt = 0,
    Crop = 1,
    Global = 2,
    SynonymPrompt = 3,
};

std::string_view to_string(SourceKind kind);
std::optional<SourceKind> parse_source_kind(std::string_view name);

struct SourceTag {
    SourceKind kind = SourceKind::Global;
    std::string label;

    auto operator<=>(const SourceTag&) const = default;
};

std::string to_string(const SourceTag& tag);

// A dense real vector. Values are held in 64-bit; anything that came off disk
// is exactly representable in f32.
class EmbeddingVector {
public:
    EmbeddingVector() = default;
    explicit EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {}
    EmbeddingVector(std::initializer_list<double> values) : values_(values) {}

    std::size_t dim() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> mutable_values() noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    bool is_finite() const noexcept;
    double norm() const noexcept;

    bool operator==(const EmbeddingVector&) const = default;

private:
    std::vector<double> values_;
};

/// Returns v / ||v||.  Throws ZeroVector when ||v|| <= 1e-12 and
/// InvalidArgument on non-finite input.
EmbeddingVector normalize(const EmbeddingVector& v);

inline constexpr double kZeroNormThreshold = 1e-12;

struct TaggedEmbedding {
    SourceTag tag;
    EmbeddingVector vector;

    bool operator==(const TaggedEmbedding&) const = default;
};

struct ItemEmbeddingSet {
    std::string item_id;
    std::vector<TaggedEmbedding> embeddings;

    std::size_t size() const noexcept { return embeddings.size(); }
    bool operator==(const ItemEmbeddingSet&) const = default;
};

namespace kernels {

// Sequential left-to-right accumulation in double. Every scorer in the
// library goes through these so results are reproducible bit for bit.
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double squared_norm(std::span<const double> a) noexcept;
double norm(std::span<const double> a) noexcept;

}  // namespace kernels

}  // namespace mvr
