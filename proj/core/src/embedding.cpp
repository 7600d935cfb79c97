#include "mvr/embedding.hpp"

#include <cmath>

#include "mvr/error.hpp"

namespace mvr {

std::string_view to_string(SourceKind kind) {
    switch (kind) {
        case SourceKind::RegionalPrompt: return "regional_prompt";
        case SourceKind::Crop: return "crop";
        case SourceKind::Global: return "global";
        case SourceKind::SynonymPrompt: return "synonym_prompt";
    }
    return "unknown";
}

std::optional<SourceKind> parse_source_kind(std::string_view name) {
    for (auto kind : {SourceKind::RegionalPrompt, SourceKind::Crop, SourceKind::Global,
                      SourceKind::SynonymPrompt}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

std::string to_string(const SourceTag& tag) {
    return std::string(to_string(tag.kind)) + ":" + tag.label;
}

bool EmbeddingVector::is_finite() const noexcept {
    for (double v : values_) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

double EmbeddingVector::norm() const noexcept {
    return kernels::norm(values_);
}

EmbeddingVector normalize(const EmbeddingVector& v) {
    if (!v.is_finite()) {
        fail(ErrorCode::InvalidArgument, "cannot normalize a vector with non-finite entries");
    }
    const double n = v.norm();
    if (!(n > kZeroNormThreshold)) {
        fail(ErrorCode::ZeroVector, "vector norm is below 1e-12");
    }
    std::vector<double> out(v.dim());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = v[i] / n;
    }
    return EmbeddingVector(std::move(out));
}

namespace kernels {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double squared_norm(std::span<const double> a) noexcept {
    double acc = 0.0;
    for (double v : a) {
        acc += v * v;
    }
    return acc;
}

double norm(std::span<const double> a) noexcept {
    return std::sqrt(squared_norm(a));
}

}  // namespace kernels

}  // namespace mvr
