#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blockband {

enum class ErrorCode {
    // configuration
    BadConfig,
    BadFractions,
    BadBlockLength,
    BadLocality,
    // data
    ParseError,
    EmptyFile,
    NonPositiveValue,
    SeriesTooShort,
    ConstantFeature,
    DimensionMismatch,
    ShapeMismatch,
    IndexOutOfRange,
    BlockTooLong,
    TooFewReplicates,
    NonFiniteValue,
    // numeric
    DivergedLoss,
    SingularSystem,
};

enum class ErrorCategory { Config, Data, Numeric };

[[nodiscard]] std::string_view error_code_name(ErrorCode code) noexcept;
[[nodiscard]] ErrorCategory error_category(ErrorCode code) noexcept;

/// Exit status used by the command-line tool for each error category.
[[nodiscard]] int exit_code_for(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] ErrorCategory category() const noexcept { return error_category(code_); }
    /// Message without the code-name prefix.
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace blockband
