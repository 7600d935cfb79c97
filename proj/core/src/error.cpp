#include "mvr/error.hpp"

namespace mvr {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DuplicateItemId: return "DuplicateItemId";
        case ErrorCode::EmptyGallery: return "EmptyGallery";
        case ErrorCode::MissingTruth: return "MissingTruth";
        case ErrorCode::NoCaptions: return "NoCaptions";
        case ErrorCode::IncompleteSample: return "IncompleteSample";
        case ErrorCode::TemperatureNonPositive: return "TemperatureNonPositive";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::ImageTooSmall: return "ImageTooSmall";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::NoGlobalEmbedding: return "NoGlobalEmbedding";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace mvr
