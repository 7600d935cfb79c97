#include "mvr/bench/annotation_io.hpp"

#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mvr/binary_io.hpp"
#include "mvr/error.hpp"

namespace mvr::bench {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::int64_t required_int(const json& obj, const char* field, std::size_t line) {
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_number_integer()) {
        fail(ErrorCode::FormatError, fmt::format("line {}: missing integer field '{}'", line, field));
    }
    return it->get<std::int64_t>();
}

ordered_json rect_json(const Rect& r) {
    return ordered_json::array({r.x, r.y, r.w, r.h});
}

}  // namespace

std::vector<AnnotatedSample> parse_annotations(std::string_view jsonl) {
    std::vector<AnnotatedSample> out;
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
        AnnotatedSample s;
        if (!obj.contains("image_id") || !obj["image_id"].is_string()) {
            fail(ErrorCode::FormatError, fmt::format("line {}: missing string field 'image_id'", line));
        }
        s.image_id = obj["image_id"].get<std::string>();
        s.image = {required_int(obj, "width", line), required_int(obj, "height", line)};
        const auto& bbox = obj.contains("bbox") ? obj["bbox"] : json();
        if (!bbox.is_array() || bbox.size() != 4 ||
            !std::all_of(bbox.begin(), bbox.end(), [](const json& v) { return v.is_number_integer(); })) {
            fail(ErrorCode::FormatError, fmt::format("line {}: bbox must be [x, y, w, h] integers", line));
        }
        s.bbox = {bbox[0].get<std::int64_t>(), bbox[1].get<std::int64_t>(), bbox[2].get<std::int64_t>(),
                  bbox[3].get<std::int64_t>()};
        if (!obj.contains("caption") || !obj["caption"].is_string()) {
            fail(ErrorCode::FormatError, fmt::format("line {}: missing string field 'caption'", line));
        }
        s.caption = obj["caption"].get<std::string>();
        if (obj.contains("mask_count") && !obj["mask_count"].is_null()) {
            s.mask_count = required_int(obj, "mask_count", line);
        }
        try {
            validate(s);
        } catch (const Error& err) {
            fail(ErrorCode::FormatError, fmt::format("line {}: {}", line, err.message()));
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<AnnotatedSample> load_annotations(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return parse_annotations(text);
    } catch (const Error& err) {
        fail(err.code(), fmt::format("{}: {}", path.string(), err.message()));
    }
}

std::string format_annotations(std::span<const AnnotatedSample> samples) {
    std::string out;
    for (const auto& s : samples) {
        ordered_json obj;
        obj["image_id"] = s.image_id;
        obj["width"] = s.image.width;
        obj["height"] = s.image.height;
        obj["bbox"] = rect_json(s.bbox);
        obj["caption"] = s.caption;
        if (s.mask_count) {
            obj["mask_count"] = *s.mask_count;
        }
        out += obj.dump() + "\n";
    }
    return out;
}

std::string format_tiers(std::span<const TierSet> tiers) {
    std::string out;
    for (const auto& set : tiers) {
        for (const auto& tier : set.tiers) {
            ordered_json obj;
            obj["image_id"] = set.image_id;
            obj["level"] = to_string(tier.level);
            obj["crop"] = rect_json(tier.crop);
            obj["caption"] = set.caption;
            out += obj.dump() + "\n";
        }
    }
    return out;
}

std::string format_verdicts(std::span<const AnnotatedSample> samples,
                            std::span<const FilterVerdict> verdicts) {
    std::string out;
    for (std::size_t i = 0; i < samples.size() && i < verdicts.size(); ++i) {
        ordered_json obj;
        obj["image_id"] = samples[i].image_id;
        obj["verdict"] = to_string(verdicts[i]);
        out += obj.dump() + "\n";
    }
    return out;
}

}  // namespace mvr::bench
