#include "mvr/train/adapter_io.hpp"

#include <fmt/format.h>

#include "mvr/error.hpp"

namespace mvr::train {

Bytes encode_adapter(const AdapterParams& params) {
    validate(params);
    ByteWriter w;
    w.raw("SADP");
    w.u16(kSadpVersion);
    w.u32(static_cast<std::uint32_t>(params.input_dim()));
    w.u32(static_cast<std::uint32_t>(params.output_dim()));
    w.f64(params.tau);
    for (double v : params.weights.data()) {
        w.f32(static_cast<float>(v));
    }
    return w.take();
}

AdapterParams decode_adapter(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    if (r.str(4, "magic") != "SADP") {
        fail(ErrorCode::FormatError, "bad magic at byte offset 0: not a SADP checkpoint");
    }
    if (const auto version = r.u16("version"); version != kSadpVersion) {
        fail(ErrorCode::FormatError, fmt::format("unsupported SADP version {}", version));
    }
    const auto d_in = r.u32("d_in");
    const auto d_out = r.u32("d_out");
    if (d_in == 0 || d_out == 0) {
        fail(ErrorCode::FormatError, "adapter dimensions must be positive");
    }
    AdapterParams params{Matrix(d_in, d_out), r.f64("tau")};
    if (static_cast<std::uint64_t>(d_in) * d_out * 4 != r.remaining()) {
        fail(ErrorCode::FormatError,
             fmt::format("expected {} weight bytes after byte offset {}, found {}",
                         static_cast<std::uint64_t>(d_in) * d_out * 4, r.offset(), r.remaining()));
    }
    for (double& v : params.weights.data()) {
        v = static_cast<double>(r.f32("weight"));
    }
    try {
        validate(params);
    } catch (const Error& err) {
        fail(ErrorCode::FormatError, err.message());
    }
    return params;
}

void save_adapter(const AdapterParams& params, const std::filesystem::path& path) {
    write_file(path, encode_adapter(params));
}

AdapterParams load_adapter(const std::filesystem::path& path) {
    const Bytes bytes = read_file(path);
    try {
        return decode_adapter(bytes);
    } catch (const Error& err) {
        fail(err.code(), fmt::format("{}: {}", path.string(), err.message()));
    }
}

}  // namespace mvr::train
