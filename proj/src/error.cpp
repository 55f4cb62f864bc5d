#include "blockband/error.hpp"

namespace blockband {

std::string_view error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::BadConfig: return "BadConfig";
        case ErrorCode::BadFractions: return "BadFractions";
        case ErrorCode::BadBlockLength: return "BadBlockLength";
        case ErrorCode::BadLocality: return "BadLocality";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::EmptyFile: return "EmptyFile";
        case ErrorCode::NonPositiveValue: return "NonPositiveValue";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::ConstantFeature: return "ConstantFeature";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::BlockTooLong: return "BlockTooLong";
        case ErrorCode::TooFewReplicates: return "TooFewReplicates";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::DivergedLoss: return "DivergedLoss";
        case ErrorCode::SingularSystem: return "SingularSystem";
    }
    return "Unknown";
}

ErrorCategory error_category(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::BadConfig:
        case ErrorCode::BadFractions:
        case ErrorCode::BadBlockLength:
        case ErrorCode::BadLocality:
        case ErrorCode::TooFewReplicates:
            return ErrorCategory::Config;
        case ErrorCode::DivergedLoss:
        case ErrorCode::SingularSystem:
            return ErrorCategory::Numeric;
        default:
            return ErrorCategory::Data;
    }
}

int exit_code_for(ErrorCategory category) noexcept {
    switch (category) {
        case ErrorCategory::Config: return 2;
        case ErrorCategory::Data: return 3;
        case ErrorCategory::Numeric: return 4;
    }
    return 1;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace blockband
