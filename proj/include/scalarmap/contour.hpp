#pragma once

/**
 * @file contour.hpp
 *
 * @brief Iso-contours of a ScalarFieldGrid by marching squares.
 */

#include <ostream>
#include <vector>

#include "scalarmap/field.hpp"

namespace scalarmap {

/// Closed polylines do not repeat their first vertex at the end.
struct Polyline {
    std::vector<Point> vertices;
    bool closed = false;
};

struct ContourLevel {
    double level = 0.0;
    std::vector<Polyline> polylines;
};

/// Levels strictly increasing.
struct ContourSet {
    std::vector<ContourLevel> levels;
};

/**
 * Polylines where the grid crosses `level`. Grid nodes equal to the level are
 * treated as level + 1e-12 * range; ambiguous saddle cells are resolved by
 * the mean of the four corners. Polylines reaching the grid boundary are open.
 */
std::vector<Polyline> marching_squares(const ScalarFieldGrid& grid, double level);

/// `count` equally spaced levels strictly inside (zmin, zmax).
/// Throws DataError(DegenerateRange) on a constant field.
std::vector<double> topographic_levels(const ScalarFieldGrid& grid, int count);

ContourSet extract_contours(const ScalarFieldGrid& grid, const std::vector<double>& levels, unsigned workers = 1);

/// Bilinear interpolation of the grid at an arbitrary point inside its box.
double bilinear(const ScalarFieldGrid& grid, Point p);

}  // namespace scalarmap
