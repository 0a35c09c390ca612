#pragma once

#include <stdexcept>
#include <string>

namespace scalarmap {

enum class ErrorCode {
    EmptyDataset,
    NonNumericCell,
    RaggedRow,
    MissingValue,
    InvalidShape,
    DuplicateAttribute,
    UnknownAttribute,
    MalformedClause,
    ShapeMismatch,
    DegenerateRange,
    UnsupportedFeature,
    MalformedFile,
    InvalidParameter,
};

const char* to_string(ErrorCode code);

/// Base exception for every recoverable failure raised by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Errors caused by user-supplied configuration (bad attribute names, filter syntax).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Errors caused by malformed or inconsistent data (input tables, intermediate dumps).
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace scalarmap
