#include "scalarmap/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <thread>
#include <unordered_map>

#include "scalarmap/error.hpp"

namespace scalarmap {

namespace {

enum Side { Bottom = 0, Right = 1, Top = 2, Left = 3 };

struct Segment {
    std::size_t a;  // edge ids
    std::size_t b;
};

// Segments per case; corner bits are 1 = (ix,iy), 2 = (ix+1,iy), 4 = (ix+1,iy+1), 8 = (ix,iy+1).
// Saddles (5 and 10) are resolved separately.
constexpr std::array<std::array<int, 4>, 16> case_table = {{
    {-1, -1, -1, -1},
    {Left, Bottom, -1, -1},
    {Bottom, Right, -1, -1},
    {Left, Right, -1, -1},
    {Right, Top, -1, -1},
    {-1, -1, -1, -1},
    {Bottom, Top, -1, -1},
    {Left, Top, -1, -1},
    {Top, Left, -1, -1},
    {Bottom, Top, -1, -1},
    {-1, -1, -1, -1},
    {Right, Top, -1, -1},
    {Left, Right, -1, -1},
    {Bottom, Right, -1, -1},
    {Left, Bottom, -1, -1},
    {-1, -1, -1, -1},
}};

class Marcher {
public:
    Marcher(const ScalarFieldGrid& grid, double level) : grid_(grid), level_(level) {
        const int w = grid.spec.width;
        const int h = grid.spec.height;
        horizontal_count_ = static_cast<std::size_t>(w - 1) * static_cast<std::size_t>(h);
        const double range = grid.zmax - grid.zmin;
        bump_ = 1e-12 * (range > 0.0 ? range : std::max(1.0, std::abs(level)));
        values_.resize(grid.values.size());
        for (std::size_t i = 0; i < values_.size(); ++i) {
            values_[i] = grid.values[i] == level ? grid.values[i] + bump_ : grid.values[i];
        }
    }

    std::vector<Polyline> run() {
        collect_segments();
        return chain();
    }

private:
    double value(int ix, int iy) const { return values_[static_cast<std::size_t>(iy) * grid_.spec.width + ix]; }

    std::size_t edge_id(int ix, int iy, int side) const {
        const int w = grid_.spec.width;
        switch (side) {
            case Bottom: return static_cast<std::size_t>(iy) * (w - 1) + ix;
            case Top: return static_cast<std::size_t>(iy + 1) * (w - 1) + ix;
            case Left: return horizontal_count_ + static_cast<std::size_t>(iy) * w + ix;
            default: return horizontal_count_ + static_cast<std::size_t>(iy) * w + ix + 1;
        }
    }

    bool boundary_edge(std::size_t id) const {
        const int w = grid_.spec.width;
        const int h = grid_.spec.height;
        if (id < horizontal_count_) {
            const auto iy = static_cast<int>(id / (w - 1));
            return iy == 0 || iy == h - 1;
        }
        const auto ix = static_cast<int>((id - horizontal_count_) % w);
        return ix == 0 || ix == w - 1;
    }

    Point crossing(std::size_t id) const {
        const int w = grid_.spec.width;
        int ax, ay, bx, by;
        if (id < horizontal_count_) {
            ay = by = static_cast<int>(id / (w - 1));
            ax = static_cast<int>(id % (w - 1));
            bx = ax + 1;
        } else {
            const std::size_t v = id - horizontal_count_;
            ax = bx = static_cast<int>(v % w);
            ay = static_cast<int>(v / w);
            by = ay + 1;
        }
        const double va = value(ax, ay);
        const double vb = value(bx, by);
        const double t = (level_ - va) / (vb - va);
        const Point pa = grid_.spec.node(ax, ay);
        const Point pb = grid_.spec.node(bx, by);
        return {pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)};
    }

    void add_segment(int ix, int iy, int side_a, int side_b) {
        segments_.push_back({edge_id(ix, iy, side_a), edge_id(ix, iy, side_b)});
    }

    void collect_segments() {
        const int w = grid_.spec.width;
        const int h = grid_.spec.height;
        for (int iy = 0; iy + 1 < h; ++iy) {
            for (int ix = 0; ix + 1 < w; ++ix) {
                const double v0 = value(ix, iy);
                const double v1 = value(ix + 1, iy);
                const double v2 = value(ix + 1, iy + 1);
                const double v3 = value(ix, iy + 1);
                const int code = (v0 > level_ ? 1 : 0) | (v1 > level_ ? 2 : 0) | (v2 > level_ ? 4 : 0) |
                                 (v3 > level_ ? 8 : 0);
                if (code == 5 || code == 10) {
                    const bool centre_above = 0.25 * (v0 + v1 + v2 + v3) >= level_;
                    // With the centre above, the above-level corners are joined and the
                    // below-level corners are cut off individually.
                    const bool isolate_corners_1_and_3 = (code == 5) == centre_above;
                    if (isolate_corners_1_and_3) {
                        add_segment(ix, iy, Bottom, Right);
                        add_segment(ix, iy, Top, Left);
                    } else {
                        add_segment(ix, iy, Left, Bottom);
                        add_segment(ix, iy, Right, Top);
                    }
                    continue;
                }
                const auto& entry = case_table[static_cast<std::size_t>(code)];
                if (entry[0] >= 0) add_segment(ix, iy, entry[0], entry[1]);
            }
        }
    }

    std::vector<Polyline> chain() {
        std::unordered_map<std::size_t, std::array<std::size_t, 2>> incident;
        std::unordered_map<std::size_t, int> degree;
        for (std::size_t s = 0; s < segments_.size(); ++s) {
            for (std::size_t e : {segments_[s].a, segments_[s].b}) {
                auto& slot = incident[e];
                slot[static_cast<std::size_t>(degree[e]++)] = s;
            }
        }

        auto other_segment = [&](std::size_t edge, std::size_t from) -> std::optional<std::size_t> {
            if (degree[edge] < 2) return std::nullopt;
            const auto& slot = incident[edge];
            return slot[0] == from ? slot[1] : slot[0];
        };
        auto other_edge = [&](std::size_t seg, std::size_t edge) {
            return segments_[seg].a == edge ? segments_[seg].b : segments_[seg].a;
        };

        std::vector<bool> used(segments_.size(), false);
        std::vector<Polyline> out;
        for (std::size_t start = 0; start < segments_.size(); ++start) {
            if (used[start]) continue;
            used[start] = true;

            // Walk forward from edge b, then backward from edge a.
            std::vector<std::size_t> forward{segments_[start].a, segments_[start].b};
            bool closed = false;
            std::size_t seg = start;
            std::size_t edge = segments_[start].b;
            while (auto next = other_segment(edge, seg)) {
                if (*next == start) {
                    closed = true;
                    break;
                }
                if (used[*next]) break;
                used[*next] = true;
                seg = *next;
                edge = other_edge(seg, edge);
                forward.push_back(edge);
            }
            if (closed) forward.pop_back();  // last edge is the start edge again

            std::vector<std::size_t> backward;
            if (!closed) {
                seg = start;
                edge = segments_[start].a;
                while (auto next = other_segment(edge, seg)) {
                    if (used[*next]) break;
                    used[*next] = true;
                    seg = *next;
                    edge = other_edge(seg, edge);
                    backward.push_back(edge);
                }
            }

            std::vector<std::size_t> edges(backward.rbegin(), backward.rend());
            edges.insert(edges.end(), forward.begin(), forward.end());
            if (!closed && !edges.empty() && boundary_edge(edges.back()) && !boundary_edge(edges.front())) {
                std::reverse(edges.begin(), edges.end());
            }

            Polyline line;
            line.closed = closed;
            for (std::size_t e : edges) {
                const Point p = crossing(e);
                if (!line.vertices.empty() && line.vertices.back().x == p.x && line.vertices.back().y == p.y) continue;
                line.vertices.push_back(p);
            }
            if (closed && line.vertices.size() > 1 && line.vertices.front().x == line.vertices.back().x &&
                line.vertices.front().y == line.vertices.back().y) {
                line.vertices.pop_back();
            }
            if (line.vertices.size() >= 2) out.push_back(std::move(line));
        }
        return out;
    }

    const ScalarFieldGrid& grid_;
    double level_;
    double bump_ = 0.0;
    std::vector<double> values_;
    std::size_t horizontal_count_ = 0;
    std::vector<Segment> segments_;
};

}  // namespace

std::vector<Polyline> marching_squares(const ScalarFieldGrid& grid, double level) {
    grid.spec.validate();
    if (!std::isfinite(level)) throw ConfigError(ErrorCode::InvalidParameter, "contour level must be finite");
    if (grid.values.size() != grid.spec.node_count()) {
        throw DataError(ErrorCode::ShapeMismatch, "grid value count does not match its resolution");
    }
    return Marcher(grid, level).run();
}

std::vector<double> topographic_levels(const ScalarFieldGrid& grid, int count) {
    if (count < 1) throw ConfigError(ErrorCode::InvalidParameter, "level count must be >= 1");
    if (!(grid.zmax > grid.zmin)) {
        throw DataError(ErrorCode::DegenerateRange, "field is constant; no contour levels exist");
    }
    std::vector<double> levels;
    levels.reserve(static_cast<std::size_t>(count));
    const double step = (grid.zmax - grid.zmin) / (count + 1);
    for (int j = 1; j <= count; ++j) levels.push_back(grid.zmin + j * step);
    return levels;
}

ContourSet extract_contours(const ScalarFieldGrid& grid, const std::vector<double>& levels, unsigned workers) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!std::isfinite(levels[i])) throw ConfigError(ErrorCode::InvalidParameter, "contour levels must be finite");
        if (i > 0 && !(levels[i] > levels[i - 1])) {
            throw ConfigError(ErrorCode::InvalidParameter, "contour levels must be strictly increasing");
        }
    }
    ContourSet out;
    out.levels.resize(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) out.levels[i].level = levels[i];
    if (levels.empty()) return out;
    grid.spec.validate();
    if (grid.values.size() != grid.spec.node_count()) {
        throw DataError(ErrorCode::ShapeMismatch, "grid value count does not match its resolution");
    }

    workers = std::clamp(workers, 1u, static_cast<unsigned>(levels.size()));
    if (workers == 1) {
        for (auto& entry : out.levels) entry.polylines = marching_squares(grid, entry.level);
        return out;
    }
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < out.levels.size(); i += workers) {
                out.levels[i].polylines = marching_squares(grid, out.levels[i].level);
            }
        });
    }
    return out;
}

double bilinear(const ScalarFieldGrid& grid, Point p) {
    const auto& spec = grid.spec;
    const double fx = std::clamp((p.x - spec.bbox.xmin) / spec.bbox.width(), 0.0, 1.0) * (spec.width - 1);
    const double fy = std::clamp((p.y - spec.bbox.ymin) / spec.bbox.height(), 0.0, 1.0) * (spec.height - 1);
    const int ix = std::min(static_cast<int>(fx), spec.width - 2);
    const int iy = std::min(static_cast<int>(fy), spec.height - 2);
    const double tx = fx - ix;
    const double ty = fy - iy;
    const double bottom = grid.at(ix, iy) * (1.0 - tx) + grid.at(ix + 1, iy) * tx;
    const double top = grid.at(ix, iy + 1) * (1.0 - tx) + grid.at(ix + 1, iy + 1) * tx;
    return bottom * (1.0 - ty) + top * ty;
}

}  // namespace scalarmap
