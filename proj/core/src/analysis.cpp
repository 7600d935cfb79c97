#include "mvr/analysis.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mvr/binary_io.hpp"
#include "mvr/error.hpp"
#include "mvr/retrieval.hpp"

namespace mvr::analysis {
namespace {

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

double sorted_mean(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

}  // namespace

SimMatrix similarity_matrix(std::span<const LabeledVector> rows, std::span<const LabeledVector> cols) {
    SimMatrix m;
    for (const auto& r : rows) {
        m.row_labels.push_back(r.label);
    }
    for (const auto& c : cols) {
        m.col_labels.push_back(c.label);
    }
    m.values.assign(rows.size(), std::vector<double>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            m.values[i][j] = cosine(rows[i].vector, cols[j].vector);
        }
    }
    return m;
}

std::vector<LabeledVector> embeddings_of_kind(const ItemEmbeddingSet& item, SourceKind kind) {
    std::vector<LabeledVector> out;
    for (const auto& e : item.embeddings) {
        if (e.tag.kind == kind) {
            out.push_back({e.tag.label, e.vector});
        }
    }
    return out;
}

std::string sim_matrix_csv(const SimMatrix& m) {
    std::string out;
    for (const auto& label : m.col_labels) {
        out += "," + csv_field(label);
    }
    out += "\n";
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        out += csv_field(m.row_labels[i]);
        for (double v : m.values[i]) {
            out += fmt::format(",{:.9g}", v);
        }
        out += "\n";
    }
    return out;
}

GlobalProximity global_proximity_report(const ItemEmbeddingSet& item) {
    const TaggedEmbedding* global = nullptr;
    for (const auto& e : item.embeddings) {
        if (e.tag.kind == SourceKind::Global) {
            if (global != nullptr) {
                fail(ErrorCode::InvalidArgument,
                     fmt::format("item '{}' has more than one global embedding", item.item_id));
            }
            global = &e;
        }
    }
    if (global == nullptr) {
        fail(ErrorCode::NoGlobalEmbedding, fmt::format("item '{}' has no global embedding", item.item_id));
    }
    GlobalProximity report;
    std::vector<double> regional;
    std::vector<double> crops;
    for (const auto& e : item.embeddings) {
        if (&e == global) {
            continue;
        }
        const double c = cosine(e.vector, global->vector);
        report.per_tag.emplace_back(e.tag, c);
        if (e.tag.kind == SourceKind::RegionalPrompt) {
            regional.push_back(c);
        } else if (e.tag.kind == SourceKind::Crop) {
            crops.push_back(c);
        }
    }
    std::sort(report.per_tag.begin(), report.per_tag.end());
    if (!regional.empty()) {
        report.mean_cos_regional_to_global = sorted_mean(std::move(regional));
    }
    if (!crops.empty()) {
        report.mean_cos_crop_to_global = sorted_mean(std::move(crops));
    }
    return report;
}

std::string proximity_to_json(const std::string& item_id, const GlobalProximity& report) {
    nlohmann::ordered_json root;
    root["item_id"] = item_id;
    root["mean_cos_regional_to_global"] = report.mean_cos_regional_to_global
                                              ? nlohmann::ordered_json(*report.mean_cos_regional_to_global)
                                              : nlohmann::ordered_json();
    root["mean_cos_crop_to_global"] = report.mean_cos_crop_to_global
                                          ? nlohmann::ordered_json(*report.mean_cos_crop_to_global)
                                          : nlohmann::ordered_json();
    auto per_tag = nlohmann::ordered_json::array();
    for (const auto& [tag, c] : report.per_tag) {
        per_tag.push_back({{"kind", to_string(tag.kind)}, {"label", tag.label}, {"cosine", c}});
    }
    root["per_tag"] = std::move(per_tag);
    return root.dump(2) + "\n";
}

std::string projection_csv(std::span<const ItemEmbeddingSet> items, bool normalized) {
    if (items.empty()) {
        fail(ErrorCode::InvalidArgument, "no items to export");
    }
    std::optional<std::size_t> dim;
    for (const auto& item : items) {
        for (const auto& e : item.embeddings) {
            if (dim && *dim != e.vector.dim()) {
                fail(ErrorCode::DimensionMismatch,
                     fmt::format("item '{}' has dimension {}, expected {}", item.item_id, e.vector.dim(), *dim));
            }
            dim = e.vector.dim();
        }
    }
    std::string out = fmt::format("# normalized={}\nitem_id,source_kind,label", normalized ? 1 : 0);
    for (std::size_t c = 0; c < dim.value_or(0); ++c) {
        out += fmt::format(",c{}", c);
    }
    out += "\n";
    for (const auto& item : items) {
        for (const auto& e : item.embeddings) {
            out += csv_field(item.item_id) + "," + std::string(to_string(e.tag.kind)) + "," +
                   csv_field(e.tag.label);
            for (double v : e.vector.values()) {
                out += fmt::format(",{:.9g}", v);
            }
            out += "\n";
        }
    }
    return out;
}

void export_projection_input(std::span<const ItemEmbeddingSet> items, bool normalized,
                             const std::filesystem::path& path) {
    write_text_file(path, projection_csv(items, normalized));
}

}  // namespace mvr::analysis
