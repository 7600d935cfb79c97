#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvr {

enum class ErrorCode {
    ZeroVector,
    FormatError,
    DimensionMismatch,
    DuplicateItemId,
    EmptyGallery,
    MissingTruth,
    NoCaptions,
    IncompleteSample,
    TemperatureNonPositive,
    ConfigInvalid,
    ImageTooSmall,
    EmptyDataset,
    NoGlobalEmbedding,
    InvalidArgument,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the core library is an mvr::Error carrying a
// typed code; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    // The message without the code prefix that what() carries.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace mvr
