#pragma once

/**
 * @file field.hpp
 *
 * @brief Value-preserving adaptive kernel regression of a scalar attribute
 * over the 2D canvas.
 *
 * Samples get per-sample bandwidths from an Abramson-style adaptive KDE:
 * a fixed-bandwidth pilot density is evaluated at each sample and the pilot
 * bandwidth is scaled by (f_i / g)^-alpha, g being the geometric mean of the
 * pilot densities. The field at a probe p is the weighted mean of the sample
 * values with weights
 *
 *     w_i = exp(-|u_i|^2 / 2) / |u_i|^2,   u_i = (p - x_i) / h_i (per axis)
 *
 * The Gaussian factor makes the field smooth far from the samples, the
 * inverse-square factor forces F(x_i) = z_i. Optional zero-valued samples on
 * the bounding-box perimeter pull the field down towards the border.
 */

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "scalarmap/mds.hpp"

namespace scalarmap {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct BoundingBox {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 1.0;
    double ymax = 1.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double diagonal() const;
    bool contains(Point p, double slack = 0.0) const;

    static BoundingBox of(const std::vector<Point>& points);
};

enum class SampleOrigin { Data, Border };

/**
 * Scattered samples of a scalar attribute. Construction merges samples that
 * lie within 1e-9 of the reference diagonal of each other (values averaged).
 */
class SampleSet {
public:
    SampleSet() = default;

    /// `reference` is the box whose diagonal sets the merge tolerance and the
    /// bandwidth fallback; defaults to the bounding box of the samples.
    SampleSet(const std::vector<Point>& positions, const std::vector<double>& values,
              const std::vector<SampleOrigin>& origins = {}, std::optional<BoundingBox> reference = std::nullopt);

    std::size_t size() const { return positions_.size(); }
    bool empty() const { return positions_.empty(); }

    const std::vector<Point>& positions() const { return positions_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<SampleOrigin>& origins() const { return origins_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    /// Box used for tolerances; always has a positive diagonal.
    const BoundingBox& reference() const { return reference_; }
    double min_value() const;
    double max_value() const;

private:
    std::vector<Point> positions_;
    std::vector<double> values_;
    std::vector<SampleOrigin> origins_;
    std::vector<std::string> warnings_;
    BoundingBox reference_;
};

struct Bandwidth {
    double x = 0.0;
    double y = 0.0;
};

struct BandwidthSet {
    std::vector<Bandwidth> per_sample;
    std::vector<double> lambda;
    Bandwidth pilot;
    double alpha = 0.5;

    std::size_t size() const { return per_sample.size(); }
};

struct GridSpec {
    BoundingBox bbox;
    int width = 2;   // nodes along x
    int height = 2;  // nodes along y
    double margin = 0.05;

    void validate() const;
    Point node(int ix, int iy) const;
    std::size_t node_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
};

/// Grid spanning `points` expanded by `margin` times the extent on every side.
GridSpec grid_around(const std::vector<Point>& points, int width, int height, double margin = 0.05);

/// Values stored row-major: values[iy * width + ix], iy = 0 at ymin.
struct ScalarFieldGrid {
    GridSpec spec;
    std::vector<double> values;
    double zmin = 0.0;
    double zmax = 0.0;

    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * spec.width + ix]; }
    void update_range();
};

/// Per-axis rule-of-thumb pilot bandwidth sigma * k^(-1/6); falls back to
/// 1e-3 of the reference diagonal on an axis with zero spread.
Bandwidth pilot_bandwidth(const SampleSet& samples);

/// Fixed-bandwidth product-Gaussian KDE at every sample, self term included.
std::vector<double> pilot_density(const SampleSet& samples, Bandwidth pilot);

BandwidthSet adaptive_bandwidths(const std::vector<double>& densities, Bandwidth pilot, double alpha = 0.5);

/// Pilot bandwidth, pilot density and adaptive bandwidths in one call.
BandwidthSet fit_bandwidths(const SampleSet& samples, double alpha = 0.5);

/// Appends `count` samples with value `value`, equally spaced along the grid
/// perimeter starting at (xmin, ymin) and walking counter-clockwise.
SampleSet add_border_samples(const SampleSet& samples, const GridSpec& grid, int count = 256, double value = 0.0);

double evaluate_at(const SampleSet& samples, const BandwidthSet& bandwidths, Point p);

/// Evaluates every grid node; bitwise identical for any worker count.
ScalarFieldGrid evaluate_field(const SampleSet& samples, const BandwidthSet& bandwidths, const GridSpec& grid,
                               unsigned workers = 1);

}  // namespace scalarmap
