#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dnastore {

enum class ErrorCode {
    NotPrime,
    ReducibleModulus,
    OrderTooLarge,
    InvalidArgument,
    DimensionMismatch,
    FieldTooSmall,
    BlockMismatch,
    InconsistentObservations,
    PositionOutOfRange,
    RankDeficientGenerator,
    FieldMismatch,
    ClassificationMismatch,
    TooLarge,
    ParseError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::ReducibleModulus: return "ReducibleModulus";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FieldTooSmall: return "FieldTooSmall";
    case ErrorCode::BlockMismatch: return "BlockMismatch";
    case ErrorCode::InconsistentObservations: return "InconsistentObservations";
    case ErrorCode::PositionOutOfRange: return "PositionOutOfRange";
    case ErrorCode::RankDeficientGenerator: return "RankDeficientGenerator";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::ClassificationMismatch: return "ClassificationMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (notably the CLI) can map it to an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    /// Budget violations (enumeration or state-space caps).
    bool is_budget() const noexcept { return code_ == ErrorCode::TooLarge; }

private:
    ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) throw Error(code, what);
}

} // namespace dnastore
