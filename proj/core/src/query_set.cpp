#include "mvr/query_set.hpp"

#include <cmath>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mvr/binary_io.hpp"
#include "mvr/error.hpp"

namespace mvr {
namespace {

using nlohmann::json;

std::string required_string(const json& obj, const char* field, std::size_t line) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_string()) {
        fail(ErrorCode::FormatError, fmt::format("line {}: missing string field '{}'", line, field));
    }
    return it->get<std::string>();
}

}  // namespace

std::vector<QueryRecord> parse_queries(std::string_view jsonl, std::string_view tier_field) {
    std::vector<QueryRecord> out;
    std::unordered_set<std::string> ids;
    std::istringstream in{std::string(jsonl)};
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        json obj;
        try {
            obj = json::parse(text);
        } catch (const json::exception& e) {
            fail(ErrorCode::FormatError, fmt::format("line {}: {}", line, e.what()));
        }
        if (!obj.is_object()) {
            fail(ErrorCode::FormatError, fmt::format("line {}: expected a JSON object", line));
        }
        QueryRecord q;
        q.query_id = required_string(obj, "query_id", line);
        q.text = required_string(obj, "text", line);
        q.target_item_id = required_string(obj, "target_item_id", line);
        auto emb = obj.find("embedding");
        if (emb == obj.end() || !emb->is_array() || emb->empty()) {
            fail(ErrorCode::FormatError, fmt::format("line {}: missing embedding array", line));
        }
        std::vector<double> values;
        values.reserve(emb->size());
        for (const auto& v : *emb) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) {
                fail(ErrorCode::FormatError,
                     fmt::format("line {}: embedding entries must be finite numbers", line));
            }
            values.push_back(v.get<double>());
        }
        q.embedding = EmbeddingVector(std::move(values));
        if (auto tier = obj.find(std::string(tier_field)); tier != obj.end()) {
            if (!tier->is_string()) {
                fail(ErrorCode::FormatError,
                     fmt::format("line {}: tier field '{}' must be a string", line, tier_field));
            }
            q.tier = tier->get<std::string>();
        }
        if (!ids.insert(q.query_id).second) {
            fail(ErrorCode::FormatError,
                 fmt::format("line {}: duplicate query_id '{}'", line, q.query_id));
        }
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<QueryRecord> load_queries(const std::filesystem::path& path, std::string_view tier_field) {
    const std::string text = read_text_file(path);
    try {
        return parse_queries(text, tier_field);
    } catch (const Error& err) {
        fail(err.code(), fmt::format("{}: {}", path.string(), err.message()));
    }
}

std::string format_queries(const std::vector<QueryRecord>& queries, std::string_view tier_field) {
    std::string out;
    for (const auto& q : queries) {
        nlohmann::ordered_json obj;
        obj["query_id"] = q.query_id;
        obj["text"] = q.text;
        obj["target_item_id"] = q.target_item_id;
        obj["embedding"] = std::vector<double>(q.embedding.values().begin(), q.embedding.values().end());
        if (q.tier != kDefaultTier) {
            obj[std::string(tier_field)] = q.tier;
        }
        out += obj.dump();
        out += '\n';
    }
    return out;
}

void save_queries(const std::vector<QueryRecord>& queries, const std::filesystem::path& path,
                  std::string_view tier_field) {
    write_text_file(path, format_queries(queries, tier_field));
}

}  // namespace mvr
