#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mvr/embedding.hpp"

namespace mvr {

inline constexpr std::string_view kDefaultTier = "all";

struct QueryRecord {
    std::string query_id;
    std::string text;
    std::string target_item_id;
    EmbeddingVector embedding;
    // Grouping key for per-tier reports; taken from a configurable JSON field.
    std::string tier{kDefaultTier};

    bool operator==(const QueryRecord&) const = default;
};

/// One JSON object per line: query_id, text, target_item_id, embedding, and
/// optionally the tier field named by `tier_field`. Blank lines are skipped.
/// Malformed lines, non-finite values and repeated query ids throw
/// FormatError naming the line.
std::vector<QueryRecord> parse_queries(std::string_view jsonl, std::string_view tier_field = "tier");
std::vector<QueryRecord> load_queries(const std::filesystem::path& path,
                                      std::string_view tier_field = "tier");

std::string format_queries(const std::vector<QueryRecord>& queries,
                           std::string_view tier_field = "tier");
void save_queries(const std::vector<QueryRecord>& queries, const std::filesystem::path& path,
                  std::string_view tier_field = "tier");

}  // namespace mvr
