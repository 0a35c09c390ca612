#include "scalarmap/render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scalarmap/error.hpp"
#include "scalarmap/format.hpp"

namespace scalarmap {

namespace {

constexpr Rgb data_blue{31, 78, 216};
constexpr Rgb attribute_red{214, 39, 40};
constexpr Rgb contour_ink{40, 40, 40};

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string hex(Rgb c) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = "#";
    for (std::uint8_t v : {c.r, c.g, c.b}) {
        out += digits[v >> 4];
        out += digits[v & 15];
    }
    return out;
}

std::string level_text(double level) {
    std::ostringstream os;
    os.precision(4);
    os << level;
    return os.str();
}

}  // namespace

ColorMap::ColorMap(std::string name, std::vector<ColorStop> stops) : name_(std::move(name)), stops_(std::move(stops)) {
    if (stops_.size() < 2 || stops_.front().t != 0.0 || stops_.back().t != 1.0) {
        throw ConfigError(ErrorCode::InvalidParameter, "colormap '" + name_ + "' must have stops at t = 0 and t = 1");
    }
    for (std::size_t i = 1; i < stops_.size(); ++i) {
        if (!(stops_[i].t > stops_[i - 1].t)) {
            throw ConfigError(ErrorCode::InvalidParameter, "colormap '" + name_ + "' stops must strictly increase");
        }
    }
}

Rgb ColorMap::sample(double t) const {
    if (!(t > 0.0)) return stops_.front().color;  // also catches NaN
    if (t >= 1.0) return stops_.back().color;
    std::size_t hi = 1;
    while (stops_[hi].t < t) ++hi;
    const auto& a = stops_[hi - 1];
    const auto& b = stops_[hi];
    const double u = (t - a.t) / (b.t - a.t);
    auto mix = [u](std::uint8_t x, std::uint8_t y) {
        return static_cast<std::uint8_t>(std::lround(x + u * (static_cast<double>(y) - x)));
    };
    return {mix(a.color.r, b.color.r), mix(a.color.g, b.color.g), mix(a.color.b, b.color.b)};
}

ColorMap ColorMap::grayscale() { return ColorMap("grayscale", {{0.0, {0, 0, 0}}, {1.0, {255, 255, 255}}}); }

ColorMap ColorMap::viridis() {
    return ColorMap("viridis", {{0.0, {68, 1, 84}},
                                {0.25, {59, 82, 139}},
                                {0.5, {33, 145, 140}},
                                {0.75, {94, 201, 98}},
                                {1.0, {253, 231, 37}}});
}

ColorMap ColorMap::by_name(const std::string& name) {
    if (name == "grayscale" || name == "gray" || name == "brightness") return grayscale();
    if (name == "viridis") return viridis();
    throw ConfigError(ErrorCode::InvalidParameter, "unknown colormap '" + name + "'; valid names: grayscale, viridis");
}

std::vector<std::string> ColorMap::names() { return {"grayscale", "viridis"}; }

Raster::Raster(int w, int h, std::array<std::uint8_t, 4> fill) : width(w), height(h) {
    rgba.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 4);
    for (std::size_t i = 0; i < rgba.size(); i += 4) std::copy(fill.begin(), fill.end(), rgba.begin() + i);
}

std::array<std::uint8_t, 4> Raster::pixel(int x, int y) const {
    const std::size_t o = (static_cast<std::size_t>(y) * width + x) * 4;
    return {rgba[o], rgba[o + 1], rgba[o + 2], rgba[o + 3]};
}

void Raster::set(int x, int y, std::array<std::uint8_t, 4> color) {
    const std::size_t o = (static_cast<std::size_t>(y) * width + x) * 4;
    std::copy(color.begin(), color.end(), rgba.begin() + o);
}

Raster colorize(const ScalarFieldGrid& grid, const ColorMap& cmap) {
    const int w = grid.spec.width;
    const int h = grid.spec.height;
    Raster out(w, h);
    const double range = grid.zmax - grid.zmin;
    for (int row = 0; row < h; ++row) {
        const int iy = h - 1 - row;
        for (int ix = 0; ix < w; ++ix) {
            const double t = range > 0.0 ? (grid.at(ix, iy) - grid.zmin) / range : 0.5;
            const Rgb c = cmap.sample(t);
            out.set(ix, row, {c.r, c.g, c.b, 255});
        }
    }
    return out;
}

Viewport::Viewport(const BoundingBox& data, int canvas_width, int canvas_height, double padding)
    : data_(data), canvas_height_(canvas_height) {
    const double avail_w = std::max(1.0, canvas_width - 2.0 * padding);
    const double avail_h = std::max(1.0, canvas_height - 2.0 * padding);
    const double w = data.width() > 0.0 ? data.width() : 1.0;
    const double h = data.height() > 0.0 ? data.height() : 1.0;
    scale_ = std::min(avail_w / w, avail_h / h);
    offset_x_ = 0.5 * (canvas_width - scale_ * w);
    offset_y_ = 0.5 * (canvas_height - scale_ * h);
}

Point Viewport::to_canvas(Point p) const {
    return {offset_x_ + (p.x - data_.xmin) * scale_, canvas_height_ - (offset_y_ + (p.y - data_.ymin) * scale_)};
}

Point Viewport::to_data(Point p) const {
    return {data_.xmin + (p.x - offset_x_) / scale_, data_.ymin + (canvas_height_ - p.y - offset_y_) / scale_};
}

Viewport scene_viewport(const GridSpec& grid_spec, const SceneOptions& options) {
    return Viewport(grid_spec.bbox, options.width, options.height, options.padding);
}

Scene compose_scene(const Embedding& embedding, const Raster& raster, const GridSpec& grid_spec,
                    const ContourSet& contours, const std::vector<bool>& highlight_mask, const SceneOptions& options,
                    const std::vector<std::vector<std::string>>& highlight_details) {
    const Viewport view = scene_viewport(grid_spec, options);
    Scene scene;
    scene.width = options.width;
    scene.height = options.height;
    scene.background = options.background;
    scene.contour_labels = options.contour_labels;

    if (raster.width > 0 && raster.height > 0) {
        const Point top_left = view.to_canvas({grid_spec.bbox.xmin, grid_spec.bbox.ymax});
        const Point bottom_right = view.to_canvas({grid_spec.bbox.xmax, grid_spec.bbox.ymin});
        scene.field = FieldImage{raster, top_left, bottom_right.x - top_left.x, bottom_right.y - top_left.y,
                                 options.raster_opacity};
    }

    for (const auto& entry : contours.levels) {
        for (const auto& line : entry.polylines) {
            ContourPath path;
            path.level = entry.level;
            path.closed = line.closed;
            path.vertices.reserve(line.vertices.size());
            for (const auto& v : line.vertices) path.vertices.push_back(view.to_canvas(v));
            scene.contours.push_back(std::move(path));
        }
    }

    std::size_t data_row = 0;
    for (Eigen::Index i = 0; i < embedding.size(); ++i) {
        const Point at = view.to_canvas({embedding.coords(i, 0), embedding.coords(i, 1)});
        const auto& label = embedding.labels[static_cast<std::size_t>(i)];
        if (embedding.kinds[static_cast<std::size_t>(i)] == NodeKind::Attribute) {
            scene.attribute_nodes.push_back({at, options.attribute_radius, attribute_red, label});
            continue;
        }
        scene.data_points.push_back({at, options.data_radius, data_blue, label});
        if (data_row < highlight_mask.size() && highlight_mask[data_row]) {
            Highlight h;
            h.at = at;
            h.radius = options.data_radius * 2.5;
            h.callout.push_back(label);
            if (data_row < highlight_details.size()) {
                const auto& extra = highlight_details[data_row];
                h.callout.insert(h.callout.end(), extra.begin(), extra.end());
            }
            scene.highlights.push_back(std::move(h));
        }
        ++data_row;
    }
    return scene;
}

std::string emit_svg(const Scene& scene) {
    std::string out;
    auto attr = [](const char* name, const std::string& value) { return std::string(" ") + name + "=\"" + value + "\""; };
    auto num = [](double v) { return format_fixed6(v); };

    out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" version=\"1.1\"";
    out += attr("width", std::to_string(scene.width)) + attr("height", std::to_string(scene.height));
    out += attr("viewBox", "0 0 " + std::to_string(scene.width) + " " + std::to_string(scene.height)) + ">\n";

    if (scene.background) {
        out += "<rect" + attr("x", "0") + attr("y", "0") + attr("width", std::to_string(scene.width)) +
               attr("height", std::to_string(scene.height)) + attr("fill", hex(*scene.background)) + "/>\n";
    }

    if (scene.field) {
        const auto& f = *scene.field;
        out += "<g id=\"field\">\n<image" + attr("x", num(f.top_left.x)) + attr("y", num(f.top_left.y)) +
               attr("width", num(f.width)) + attr("height", num(f.height)) + attr("opacity", num(f.opacity)) +
               attr("preserveAspectRatio", "none") +
               attr("xlink:href", "data:image/png;base64," + base64_encode(encode_png(f.raster))) + "/>\n</g>\n";
    }

    if (!scene.contours.empty()) {
        out += "<g id=\"contours\" fill=\"none\"" + attr("stroke", hex(contour_ink)) + " stroke-width=\"1\">\n";
        for (const auto& path : scene.contours) {
            std::string d;
            for (std::size_t i = 0; i < path.vertices.size(); ++i) {
                d += (i == 0 ? "M" : " L") + num(path.vertices[i].x) + "," + num(path.vertices[i].y);
            }
            if (path.closed) d += " Z";
            out += "<path" + attr("data-level", num(path.level)) + attr("d", d) + "/>\n";
        }
        if (scene.contour_labels) {
            for (const auto& path : scene.contours) {
                const Point mid = path.vertices[path.vertices.size() / 2];
                out += "<text" + attr("x", num(mid.x)) + attr("y", num(mid.y)) +
                       " font-family=\"sans-serif\" font-size=\"9\" fill=\"#282828\" stroke=\"none\">" +
                       xml_escape(level_text(path.level)) + "</text>\n";
            }
        }
        out += "</g>\n";
    }

    if (!scene.data_points.empty()) {
        out += "<g id=\"data-points\">\n";
        for (const auto& m : scene.data_points) {
            out += "<circle" + attr("cx", num(m.at.x)) + attr("cy", num(m.at.y)) + attr("r", num(m.radius)) +
                   attr("fill", hex(m.color)) + "><title>" + xml_escape(m.label) + "</title></circle>\n";
        }
        out += "</g>\n";
    }

    if (!scene.attribute_nodes.empty()) {
        out += "<g id=\"attribute-nodes\">\n";
        for (const auto& m : scene.attribute_nodes) {
            out += "<circle" + attr("cx", num(m.at.x)) + attr("cy", num(m.at.y)) + attr("r", num(m.radius)) +
                   attr("fill", hex(m.color)) + " stroke=\"#ffffff\" stroke-width=\"1\"/>\n";
            out += "<text" + attr("x", num(m.at.x + m.radius + 2.0)) + attr("y", num(m.at.y + 4.0)) +
                   " font-family=\"sans-serif\" font-size=\"12\" font-weight=\"bold\"" + attr("fill", hex(m.color)) +
                   ">" + xml_escape(m.label) + "</text>\n";
        }
        out += "</g>\n";
    }

    if (!scene.highlights.empty()) {
        out += "<g id=\"highlights\">\n";
        for (const auto& h : scene.highlights) {
            out += "<circle" + attr("cx", num(h.at.x)) + attr("cy", num(h.at.y)) + attr("r", num(h.radius)) +
                   " fill=\"none\"" + attr("stroke", hex(attribute_red)) + " stroke-width=\"2\"/>\n";
            const double tx = h.at.x + h.radius + 4.0;
            double ty = h.at.y - h.radius;
            out += "<text" + attr("x", num(tx)) + attr("y", num(ty)) +
                   " font-family=\"sans-serif\" font-size=\"11\"" + attr("fill", hex(attribute_red)) + ">";
            for (std::size_t i = 0; i < h.callout.size(); ++i) {
                out += "<tspan" + attr("x", num(tx)) + attr("dy", i == 0 ? "0" : "13") + ">" +
                       xml_escape(h.callout[i]) + "</tspan>";
            }
            out += "</text>\n";
        }
        out += "</g>\n";
    }

    out += "</svg>\n";
    return out;
}

std::string base64_encode(const std::string& bytes) {
    static constexpr char alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 2 < bytes.size(); i += 3) {
        const std::uint32_t v = (static_cast<std::uint8_t>(bytes[i]) << 16) |
                                (static_cast<std::uint8_t>(bytes[i + 1]) << 8) | static_cast<std::uint8_t>(bytes[i + 2]);
        out += alphabet[(v >> 18) & 63];
        out += alphabet[(v >> 12) & 63];
        out += alphabet[(v >> 6) & 63];
        out += alphabet[v & 63];
    }
    const std::size_t rest = bytes.size() - i;
    if (rest) {
        std::uint32_t v = static_cast<std::uint8_t>(bytes[i]) << 16;
        if (rest == 2) v |= static_cast<std::uint8_t>(bytes[i + 1]) << 8;
        out += alphabet[(v >> 18) & 63];
        out += alphabet[(v >> 12) & 63];
        out += rest == 2 ? alphabet[(v >> 6) & 63] : '=';
        out += '=';
    }
    return out;
}

}  // namespace scalarmap
