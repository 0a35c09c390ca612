#include "scalarmap/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "scalarmap/error.hpp"

namespace scalarmap {

namespace {

constexpr double merge_fraction = 1e-9;
constexpr double fallback_fraction = 1e-3;
constexpr double snap_tol = 1e-12;

}  // namespace

double BoundingBox::diagonal() const { return std::hypot(width(), height()); }

bool BoundingBox::contains(Point p, double slack) const {
    return p.x >= xmin - slack && p.x <= xmax + slack && p.y >= ymin - slack && p.y <= ymax + slack;
}

BoundingBox BoundingBox::of(const std::vector<Point>& points) {
    if (points.empty()) return {};
    BoundingBox box{points.front().x, points.front().y, points.front().x, points.front().y};
    for (const auto& p : points) {
        box.xmin = std::min(box.xmin, p.x);
        box.ymin = std::min(box.ymin, p.y);
        box.xmax = std::max(box.xmax, p.x);
        box.ymax = std::max(box.ymax, p.y);
    }
    return box;
}

SampleSet::SampleSet(const std::vector<Point>& positions, const std::vector<double>& values,
                     const std::vector<SampleOrigin>& origins, std::optional<BoundingBox> reference) {
    if (positions.size() != values.size() || (!origins.empty() && origins.size() != positions.size())) {
        throw DataError(ErrorCode::ShapeMismatch, "sample positions, values and origins differ in length");
    }
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (!std::isfinite(positions[i].x) || !std::isfinite(positions[i].y) || !std::isfinite(values[i])) {
            throw DataError(ErrorCode::InvalidParameter, "sample " + std::to_string(i) + " is not finite");
        }
    }

    reference_ = reference.value_or(BoundingBox::of(positions));
    if (!(reference_.diagonal() > 0.0)) {
        // All samples coincide: centre a unit box on them so tolerances stay meaningful.
        const double cx = 0.5 * (reference_.xmin + reference_.xmax);
        const double cy = 0.5 * (reference_.ymin + reference_.ymax);
        reference_ = {cx - 0.5, cy - 0.5, cx + 0.5, cy + 0.5};
    }
    const double eps = merge_fraction * reference_.diagonal();

    std::vector<double> sums;
    std::vector<int> counts;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const auto origin = origins.empty() ? SampleOrigin::Data : origins[i];
        std::optional<std::size_t> target;
        for (std::size_t j = 0; j < positions_.size(); ++j) {
            if (std::hypot(positions[i].x - positions_[j].x, positions[i].y - positions_[j].y) < eps) {
                target = j;
                break;
            }
        }
        if (!target) {
            positions_.push_back(positions[i]);
            sums.push_back(values[i]);
            counts.push_back(1);
            origins_.push_back(origin);
            continue;
        }
        sums[*target] += values[i];
        counts[*target] += 1;
        if (origin == SampleOrigin::Data) origins_[*target] = SampleOrigin::Data;
        warnings_.push_back("sample " + std::to_string(i) + " coincides with sample " + std::to_string(*target) +
                            "; values averaged");
    }
    values_.resize(sums.size());
    for (std::size_t j = 0; j < sums.size(); ++j) {
        values_[j] = counts[j] == 1 ? sums[j] : sums[j] / counts[j];
    }
}

double SampleSet::min_value() const {
    return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double SampleSet::max_value() const {
    return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

void GridSpec::validate() const {
    if (width < 2 || height < 2) {
        throw ConfigError(ErrorCode::InvalidParameter, "grid needs at least 2x2 nodes");
    }
    if (!(bbox.xmax > bbox.xmin) || !(bbox.ymax > bbox.ymin)) {
        throw ConfigError(ErrorCode::InvalidParameter, "grid bounding box is empty");
    }
}

Point GridSpec::node(int ix, int iy) const {
    // Last node lands exactly on the max edge.
    const double x = ix == width - 1 ? bbox.xmax : bbox.xmin + bbox.width() * ix / (width - 1);
    const double y = iy == height - 1 ? bbox.ymax : bbox.ymin + bbox.height() * iy / (height - 1);
    return {x, y};
}

GridSpec grid_around(const std::vector<Point>& points, int width, int height, double margin) {
    BoundingBox box = BoundingBox::of(points);
    double w = box.width();
    double h = box.height();
    // Degenerate extents borrow the other axis, or unit size.
    const double fallback = std::max({w, h, 0.0}) > 0.0 ? std::max(w, h) : 1.0;
    if (!(w > 0.0)) {
        box.xmin -= 0.5 * fallback;
        box.xmax += 0.5 * fallback;
        w = fallback;
    }
    if (!(h > 0.0)) {
        box.ymin -= 0.5 * fallback;
        box.ymax += 0.5 * fallback;
        h = fallback;
    }
    GridSpec spec;
    spec.bbox = {box.xmin - margin * w, box.ymin - margin * h, box.xmax + margin * w, box.ymax + margin * h};
    spec.width = width;
    spec.height = height;
    spec.margin = margin;
    spec.validate();
    return spec;
}

void ScalarFieldGrid::update_range() {
    if (values.empty()) {
        zmin = zmax = 0.0;
        return;
    }
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    zmin = *lo;
    zmax = *hi;
}

Bandwidth pilot_bandwidth(const SampleSet& samples) {
    const std::size_t k = samples.size();
    if (k == 0) throw DataError(ErrorCode::EmptyDataset, "no samples");
    const double fallback = fallback_fraction * samples.reference().diagonal();

    auto spread = [&](auto coord) {
        if (k < 2) return 0.0;
        double mean = 0.0;
        for (const auto& p : samples.positions()) mean += coord(p);
        mean /= static_cast<double>(k);
        double ss = 0.0;
        for (const auto& p : samples.positions()) ss += (coord(p) - mean) * (coord(p) - mean);
        return std::sqrt(ss / static_cast<double>(k - 1));
    };
    const double factor = std::pow(static_cast<double>(k), -1.0 / 6.0);
    const double sx = spread([](const Point& p) { return p.x; });
    const double sy = spread([](const Point& p) { return p.y; });
    return {sx > 0.0 ? sx * factor : fallback, sy > 0.0 ? sy * factor : fallback};
}

std::vector<double> pilot_density(const SampleSet& samples, Bandwidth pilot) {
    if (!(pilot.x > 0.0) || !(pilot.y > 0.0)) {
        throw DataError(ErrorCode::InvalidParameter, "pilot bandwidth must be positive");
    }
    const auto& pos = samples.positions();
    const std::size_t k = pos.size();
    const double norm = 1.0 / (2.0 * std::numbers::pi * pilot.x * pilot.y);
    std::vector<double> density(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double ux = (pos[i].x - pos[j].x) / pilot.x;
            const double uy = (pos[i].y - pos[j].y) / pilot.y;
            sum += std::exp(-0.5 * (ux * ux + uy * uy));
        }
        density[i] = norm * sum / static_cast<double>(k);
    }
    return density;
}

BandwidthSet adaptive_bandwidths(const std::vector<double>& densities, Bandwidth pilot, double alpha) {
    if (!std::isfinite(alpha) || alpha < 0.0) {
        throw ConfigError(ErrorCode::InvalidParameter, "alpha must be finite and nonnegative");
    }
    double log_sum = 0.0;
    for (double f : densities) {
        if (!(f > 0.0) || !std::isfinite(f)) {
            throw DataError(ErrorCode::InvalidParameter, "pilot densities must be positive and finite");
        }
        log_sum += std::log(f);
    }
    BandwidthSet out;
    out.pilot = pilot;
    out.alpha = alpha;
    if (densities.empty()) return out;
    const double log_g = log_sum / static_cast<double>(densities.size());
    out.lambda.reserve(densities.size());
    out.per_sample.reserve(densities.size());
    for (double f : densities) {
        const double lambda = std::exp(-alpha * (std::log(f) - log_g));
        out.lambda.push_back(lambda);
        out.per_sample.push_back({pilot.x * lambda, pilot.y * lambda});
    }
    return out;
}

BandwidthSet fit_bandwidths(const SampleSet& samples, double alpha) {
    const Bandwidth pilot = pilot_bandwidth(samples);
    return adaptive_bandwidths(pilot_density(samples, pilot), pilot, alpha);
}

SampleSet add_border_samples(const SampleSet& samples, const GridSpec& grid, int count, double value) {
    if (count < 4) throw ConfigError(ErrorCode::InvalidParameter, "border sample count must be >= 4");
    grid.validate();
    const BoundingBox& box = grid.bbox;
    const double w = box.width();
    const double h = box.height();
    const double perimeter = 2.0 * (w + h);

    std::vector<Point> positions = samples.positions();
    std::vector<double> values = samples.values();
    std::vector<SampleOrigin> origins = samples.origins();
    for (int j = 0; j < count; ++j) {
        const double s = perimeter * j / count;
        Point p;
        if (s < w) {
            p = {box.xmin + s, box.ymin};
        } else if (s < w + h) {
            p = {box.xmax, box.ymin + (s - w)};
        } else if (s < 2.0 * w + h) {
            p = {box.xmax - (s - w - h), box.ymax};
        } else {
            p = {box.xmin, box.ymax - (s - 2.0 * w - h)};
        }
        positions.push_back(p);
        values.push_back(value);
        origins.push_back(SampleOrigin::Border);
    }
    BoundingBox reference = samples.empty() ? box : samples.reference();
    reference = {std::min(reference.xmin, box.xmin), std::min(reference.ymin, box.ymin),
                 std::max(reference.xmax, box.xmax), std::max(reference.ymax, box.ymax)};
    return SampleSet(positions, values, origins, reference);
}

double evaluate_at(const SampleSet& samples, const BandwidthSet& bandwidths, Point p) {
    const std::size_t k = samples.size();
    if (bandwidths.size() != k) {
        throw DataError(ErrorCode::ShapeMismatch, "bandwidth count does not match sample count");
    }
    if (k == 0) throw DataError(ErrorCode::EmptyDataset, "no samples");
    const auto& pos = samples.positions();
    const auto& z = samples.values();

    double weight_sum = 0.0;
    double value_sum = 0.0;
    double r_min = std::numeric_limits<double>::infinity();
    std::size_t nearest = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double ux = (p.x - pos[i].x) / bandwidths.per_sample[i].x;
        const double uy = (p.y - pos[i].y) / bandwidths.per_sample[i].y;
        const double r = ux * ux + uy * uy;
        if (r < r_min) {
            r_min = r;
            nearest = i;
        }
        if (r < snap_tol) continue;  // snapped below; keeps 1/r bounded
        const double w = std::exp(-0.5 * r) / r;
        weight_sum += w;
        value_sum += w * z[i];
    }
    if (r_min < snap_tol) return z[nearest];

    if (!(weight_sum > 0.0)) {
        // Every Gaussian factor underflowed; shift exponents by the nearest sample.
        weight_sum = 0.0;
        value_sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double ux = (p.x - pos[i].x) / bandwidths.per_sample[i].x;
            const double uy = (p.y - pos[i].y) / bandwidths.per_sample[i].y;
            const double r = ux * ux + uy * uy;
            const double w = std::exp(0.5 * (r_min - r)) * r_min / r;
            weight_sum += w;
            value_sum += w * z[i];
        }
    }
    const double estimate = value_sum / weight_sum;
    return std::clamp(estimate, samples.min_value(), samples.max_value());
}

ScalarFieldGrid evaluate_field(const SampleSet& samples, const BandwidthSet& bandwidths, const GridSpec& grid,
                               unsigned workers) {
    grid.validate();
    if (bandwidths.size() != samples.size()) {
        throw DataError(ErrorCode::ShapeMismatch, "bandwidth count does not match sample count");
    }
    if (samples.empty()) throw DataError(ErrorCode::EmptyDataset, "no samples");
    ScalarFieldGrid out;
    out.spec = grid;
    out.values.assign(grid.node_count(), 0.0);

    auto fill_rows = [&](int row_begin, int row_end) {
        for (int iy = row_begin; iy < row_end; ++iy) {
            for (int ix = 0; ix < grid.width; ++ix) {
                out.values[static_cast<std::size_t>(iy) * grid.width + ix] =
                    evaluate_at(samples, bandwidths, grid.node(ix, iy));
            }
        }
    };

    workers = std::clamp(workers, 1u, static_cast<unsigned>(grid.height));
    if (workers == 1) {
        fill_rows(0, grid.height);
    } else {
        std::vector<std::jthread> pool;
        const int chunk = (grid.height + static_cast<int>(workers) - 1) / static_cast<int>(workers);
        for (int begin = 0; begin < grid.height; begin += chunk) {
            pool.emplace_back(fill_rows, begin, std::min(begin + chunk, grid.height));
        }
    }
    out.update_range();
    return out;
}

}  // namespace scalarmap
