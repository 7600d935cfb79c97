#include "mvr/train/train_data.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include <boost/archive/iterators/base64_from_binary.hpp>
#include <boost/archive/iterators/binary_from_base64.hpp>
#include <boost/archive/iterators/transform_width.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "mvr/binary_io.hpp"
#include "mvr/error.hpp"

namespace mvr::train {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

using Base64Encoder = boost::archive::iterators::base64_from_binary<
    boost::archive::iterators::transform_width<const char*, 6, 8>>;
using Base64Decoder = boost::archive::iterators::transform_width<
    boost::archive::iterators::binary_from_base64<std::string::const_iterator>, 8, 6>;

EmbeddingVector read_vector(const json& obj, const char* field, VectorEncoding encoding,
                            std::string_view where) {
    auto it = obj.find(field);
    if (it == obj.end()) {
        fail(ErrorCode::IncompleteSample, fmt::format("{}: missing '{}'", where, field));
    }
    std::vector<double> values;
    if (encoding == VectorEncoding::Inline) {
        if (!it->is_array()) {
            fail(ErrorCode::FormatError, fmt::format("{}: '{}' must be a number array", where, field));
        }
        for (const auto& v : *it) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) {
                fail(ErrorCode::FormatError,
                     fmt::format("{}: '{}' entries must be finite numbers", where, field));
            }
            values.push_back(v.get<double>());
        }
    } else {
        if (!it->is_string()) {
            fail(ErrorCode::FormatError, fmt::format("{}: '{}' must be a base64 string", where, field));
        }
        try {
            values = base64_decode_f32(it->get<std::string>());
        } catch (const Error& err) {
            fail(ErrorCode::FormatError, fmt::format("{}: '{}': {}", where, field, err.message()));
        }
        for (double v : values) {
            if (!std::isfinite(v)) {
                fail(ErrorCode::FormatError, fmt::format("{}: '{}' has a non-finite entry", where, field));
            }
        }
    }
    if (values.empty()) {
        fail(ErrorCode::IncompleteSample, fmt::format("{}: '{}' is empty", where, field));
    }
    return EmbeddingVector(std::move(values));
}

RegionPair read_pair(const json& obj, VectorEncoding encoding, const std::string& where) {
    if (!obj.is_object()) {
        fail(ErrorCode::FormatError, fmt::format("{}: expected an object", where));
    }
    RegionPair pair;
    if (auto text = obj.find("text"); text != obj.end()) {
        if (!text->is_string()) {
            fail(ErrorCode::FormatError, fmt::format("{}: 'text' must be a string", where));
        }
        pair.text = text->get<std::string>();
    }
    pair.image = read_vector(obj, "image_embedding", encoding, where);
    pair.text_embedding = read_vector(obj, "text_embedding", encoding, where);
    return pair;
}

ordered_json write_vector(const EmbeddingVector& v, VectorEncoding encoding) {
    if (encoding == VectorEncoding::Base64) {
        return base64_encode_f32(v.values());
    }
    return std::vector<double>(v.values().begin(), v.values().end());
}

ordered_json write_pair(const RegionPair& pair, VectorEncoding encoding) {
    ordered_json obj;
    obj["text"] = pair.text;
    obj["image_embedding"] = write_vector(pair.image, encoding);
    obj["text_embedding"] = write_vector(pair.text_embedding, encoding);
    return obj;
}

}  // namespace

std::optional<VectorEncoding> parse_vector_encoding(std::string_view name) {
    if (name == "inline") {
        return VectorEncoding::Inline;
    }
    if (name == "base64") {
        return VectorEncoding::Base64;
    }
    return std::nullopt;
}

std::string base64_encode_f32(std::span<const double> values) {
    ByteWriter w;
    for (double v : values) {
        w.f32(static_cast<float>(v));
    }
    const auto& bytes = w.bytes();
    const char* begin = reinterpret_cast<const char*>(bytes.data());
    std::string out(Base64Encoder(begin), Base64Encoder(begin + bytes.size()));
    out.append((3 - bytes.size() % 3) % 3, '=');
    return out;
}

std::vector<double> base64_decode_f32(std::string_view text) {
    if (text.size() % 4 != 0) {
        fail(ErrorCode::FormatError, "base64 length is not a multiple of 4");
    }
    std::string padded(text);
    std::size_t pad = 0;
    while (pad < 2 && !padded.empty() && padded[padded.size() - 1 - pad] == '=') {
        padded[padded.size() - 1 - pad] = 'A';
        ++pad;
    }
    std::string raw;
    try {
        raw.assign(Base64Decoder(padded.cbegin()), Base64Decoder(padded.cend()));
    } catch (const std::exception&) {
        fail(ErrorCode::FormatError, "invalid base64 character");
    }
    raw.resize(raw.size() - pad);
    if (raw.size() % 4 != 0) {
        fail(ErrorCode::FormatError, "decoded byte count is not a multiple of 4");
    }
    ByteReader r(std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
    std::vector<double> values(raw.size() / 4);
    for (double& v : values) {
        v = static_cast<double>(r.f32("f32"));
    }
    return values;
}

std::vector<RegionalTrainSample> parse_train_samples(std::string_view jsonl, VectorEncoding encoding) {
    std::vector<RegionalTrainSample> out;
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
        if (!obj.is_object() || !obj.contains("item_id") || !obj["item_id"].is_string()) {
            fail(ErrorCode::FormatError, fmt::format("line {}: missing string field 'item_id'", line));
        }
        RegionalTrainSample sample;
        sample.item_id = obj["item_id"].get<std::string>();
        auto regions = obj.find("regions");
        if (regions == obj.end() || !regions->is_object()) {
            fail(ErrorCode::IncompleteSample, fmt::format("line {}: missing 'regions' object", line));
        }
        for (std::size_t r = 0; r < 4; ++r) {
            const std::string label(kRegionLabels[r]);
            auto it = regions->find(label);
            if (it == regions->end()) {
                fail(ErrorCode::IncompleteSample,
                     fmt::format("line {}: sample '{}' lacks region {}", line, sample.item_id, label));
            }
            sample.regions[r] = read_pair(*it, encoding, fmt::format("line {} region {}", line, label));
        }
        for (const auto& [key, value] : regions->items()) {
            auto region = parse_region(key);
            if (!region || *region == Region::Summary) {
                fail(ErrorCode::FormatError, fmt::format("line {}: unknown region '{}'", line, key));
            }
        }
        if (auto summary = obj.find("summary"); summary != obj.end()) {
            sample.summary = read_pair(*summary, encoding, fmt::format("line {} summary", line));
        }
        try {
            validate_sample(sample, RegionPolicy::Random);
        } catch (const Error& err) {
            fail(err.code(), fmt::format("line {}: {}", line, err.message()));
        }
        out.push_back(std::move(sample));
    }
    return out;
}

std::vector<RegionalTrainSample> load_train_samples(const std::filesystem::path& path,
                                                    VectorEncoding encoding) {
    const std::string text = read_text_file(path);
    try {
        return parse_train_samples(text, encoding);
    } catch (const Error& err) {
        fail(err.code(), fmt::format("{}: {}", path.string(), err.message()));
    }
}

std::string format_train_samples(const std::vector<RegionalTrainSample>& samples,
                                 VectorEncoding encoding) {
    std::string out;
    for (const auto& sample : samples) {
        ordered_json obj;
        obj["item_id"] = sample.item_id;
        ordered_json regions = ordered_json::object();
        for (std::size_t r = 0; r < 4; ++r) {
            regions[std::string(kRegionLabels[r])] = write_pair(sample.regions[r], encoding);
        }
        obj["regions"] = std::move(regions);
        if (sample.summary) {
            obj["summary"] = write_pair(*sample.summary, encoding);
        }
        out += obj.dump();
        out += '\n';
    }
    return out;
}

void save_train_samples(const std::vector<RegionalTrainSample>& samples,
                        const std::filesystem::path& path, VectorEncoding encoding) {
    write_text_file(path, format_train_samples(samples, encoding));
}

}  // namespace mvr::train
