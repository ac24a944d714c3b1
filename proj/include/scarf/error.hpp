#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scarf {

enum class ErrorKind {
    ParseError,
    InvariantViolation,
    DuplicateBasin,
    DuplicateFacilityId,
    UnitError,
    UnknownBasin,
    MissingProjection,
    MonthOutOfRange,
    AmbiguousLocation,
    NotFound,
    RemoteUnavailable,
    NoCandidateInRadius,
    EmptyTrace,
    NonMonotonicTimestamps,
    InsufficientData,
    IoError,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::DuplicateBasin: return "DuplicateBasin";
    case ErrorKind::DuplicateFacilityId: return "DuplicateFacilityId";
    case ErrorKind::UnitError: return "UnitError";
    case ErrorKind::UnknownBasin: return "UnknownBasin";
    case ErrorKind::MissingProjection: return "MissingProjection";
    case ErrorKind::MonthOutOfRange: return "MonthOutOfRange";
    case ErrorKind::AmbiguousLocation: return "AmbiguousLocation";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::RemoteUnavailable: return "RemoteUnavailable";
    case ErrorKind::NoCandidateInRadius: return "NoCandidateInRadius";
    case ErrorKind::EmptyTrace: return "EmptyTrace";
    case ErrorKind::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

/// Base exception for every failure raised by the library. The message is
/// prefixed with the kind name so it reads well when printed as-is.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix.
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

  private:
    ErrorKind kind_;
    std::string message_;
};

/// Parse failure at a 1-based line of an input file (0 when not line-bound).
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& reason, const std::string& source = {})
        : Error(ErrorKind::ParseError, locate(line, source) + reason), line_(line), reason_(reason), source_(source) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string& reason() const noexcept { return reason_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

  private:
    static std::string locate(std::size_t line, const std::string& source) {
        std::string s = source.empty() ? "" : source + ":";
        if (line > 0) {
            s += (source.empty() ? "line " : "") + std::to_string(line) + ":";
        }
        return s.empty() ? s : s + " ";
    }

    std::size_t line_;
    std::string reason_;
    std::string source_;
};

} // namespace scarf
