#include "scalarmap/error.hpp"

namespace scalarmap {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::NonNumericCell: return "NonNumericCell";
        case ErrorCode::RaggedRow: return "RaggedRow";
        case ErrorCode::MissingValue: return "MissingValue";
        case ErrorCode::InvalidShape: return "InvalidShape";
        case ErrorCode::DuplicateAttribute: return "DuplicateAttribute";
        case ErrorCode::UnknownAttribute: return "UnknownAttribute";
        case ErrorCode::MalformedClause: return "MalformedClause";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::DegenerateRange: return "DegenerateRange";
        case ErrorCode::UnsupportedFeature: return "UnsupportedFeature";
        case ErrorCode::MalformedFile: return "MalformedFile";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
    }
    return "Unknown";
}

}  // namespace scalarmap
