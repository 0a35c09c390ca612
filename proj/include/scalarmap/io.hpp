#pragma once

/**
 * @file io.hpp
 *
 * @brief Stage dump formats: embedding/stress CSV, field CSV and binary, contour JSON.
 *
 * Field binary layout (little-endian): "OIEF", uint32 width, uint32 height,
 * float64 xmin, ymin, xmax, ymax, then width*height float64 values row-major
 * with row 0 at ymin. The header is 44 bytes.
 */

#include <istream>
#include <ostream>
#include <string>

#include "scalarmap/contour.hpp"
#include "scalarmap/field.hpp"
#include "scalarmap/mds.hpp"

namespace scalarmap {

inline constexpr std::size_t field_binary_header_size = 44;

void write_embedding_csv(std::ostream& out, const Embedding& embedding);
Embedding read_embedding_csv(std::istream& in);

void write_stress_csv(std::ostream& out, const StressReport& report);

void write_field_csv(std::ostream& out, const ScalarFieldGrid& grid);
ScalarFieldGrid read_field_csv(std::istream& in);

std::string field_to_binary(const ScalarFieldGrid& grid);
/// Throws DataError(MalformedFile) naming the byte offset where decoding failed.
ScalarFieldGrid field_from_binary(const std::string& bytes);

std::string contours_to_json(const ContourSet& contours);
ContourSet contours_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace scalarmap
