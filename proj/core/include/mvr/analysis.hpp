#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvr/embedding.hpp"

namespace mvr::analysis {

struct LabeledVector {
    std::string label;
    EmbeddingVector vector;
};

struct SimMatrix {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<double>> values;
};

/// values[i][j] = cosine(rows[i], cols[j]). Throws DimensionMismatch.
SimMatrix similarity_matrix(std::span<const LabeledVector> rows, std::span<const LabeledVector> cols);

/// Labeled vectors for every embedding of the given kind, in item order.
std::vector<LabeledVector> embeddings_of_kind(const ItemEmbeddingSet& item, SourceKind kind);

/// Corner cell holds "", then column labels; values use 9 significant digits.
std::string sim_matrix_csv(const SimMatrix& m);

struct GlobalProximity {
    std::optional<double> mean_cos_regional_to_global;
    std::optional<double> mean_cos_crop_to_global;
    // Every non-global embedding's cosine to the global one, sorted by tag.
    std::vector<std::pair<SourceTag, double>> per_tag;
};

/// Mean cosine to the item's global embedding, per source kind. Means are
/// summed in sorted order so the result does not depend on embedding order.
/// Throws NoGlobalEmbedding, or InvalidArgument for more than one global.
GlobalProximity global_proximity_report(const ItemEmbeddingSet& item);

std::string proximity_to_json(const std::string& item_id, const GlobalProximity& report);

/// CSV for an external 2-D projection: one row per embedding with
/// item_id, source_kind, label, c0..c{D-1}. A leading comment line records the
/// gallery's normalized flag. Throws InvalidArgument for an empty item list,
/// DimensionMismatch for mixed dimensions.
std::string projection_csv(std::span<const ItemEmbeddingSet> items, bool normalized);
void export_projection_input(std::span<const ItemEmbeddingSet> items, bool normalized,
                             const std::filesystem::path& path);

}  // namespace mvr::analysis
