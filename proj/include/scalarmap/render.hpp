#pragma once

/**
 * @file render.hpp
 *
 * @brief Hybrid figure composition: colorized field, iso-contours, data
 * points (blue), attribute nodes (red, labelled) and circled highlights.
 */

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scalarmap/contour.hpp"
#include "scalarmap/field.hpp"
#include "scalarmap/mds.hpp"

namespace scalarmap {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct ColorStop {
    double t;
    Rgb color;
};

class ColorMap {
public:
    /// Stops must start at 0, end at 1 and be strictly increasing.
    ColorMap(std::string name, std::vector<ColorStop> stops);

    const std::string& name() const { return name_; }
    const std::vector<ColorStop>& stops() const { return stops_; }

    /// Piecewise-linear RGB interpolation; t is clamped to [0, 1].
    Rgb sample(double t) const;

    static ColorMap grayscale();
    static ColorMap viridis();
    /// "grayscale" or "viridis"; throws ConfigError(InvalidParameter) otherwise.
    static ColorMap by_name(const std::string& name);
    static std::vector<std::string> names();

private:
    std::string name_;
    std::vector<ColorStop> stops_;
};

/// 8-bit RGBA image, row 0 at the top.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgba;

    Raster() = default;
    Raster(int w, int h, std::array<std::uint8_t, 4> fill = {0, 0, 0, 255});

    std::array<std::uint8_t, 4> pixel(int x, int y) const;
    void set(int x, int y, std::array<std::uint8_t, 4> color);
};

/// One pixel per grid node. Image row 0 is the grid's top row (iy = height - 1).
/// A constant field takes the colour at t = 0.5.
Raster colorize(const ScalarFieldGrid& grid, const ColorMap& cmap);

/// Uniform-scale map from a data box onto a canvas with padding; y points down on the canvas.
class Viewport {
public:
    Viewport() = default;
    Viewport(const BoundingBox& data, int canvas_width, int canvas_height, double padding = 24.0);

    Point to_canvas(Point p) const;
    Point to_data(Point p) const;
    double scale() const { return scale_; }

private:
    BoundingBox data_;
    double scale_ = 1.0;
    double offset_x_ = 0.0;
    double offset_y_ = 0.0;
    int canvas_height_ = 0;
};

struct Marker {
    Point at;  // canvas pixels
    double radius = 3.0;
    Rgb color;
    std::string label;
};

struct ContourPath {
    double level = 0.0;
    std::vector<Point> vertices;  // canvas pixels
    bool closed = false;
};

struct Highlight {
    Point at;
    double radius = 8.0;
    std::vector<std::string> callout;  // first line is the row label
};

struct FieldImage {
    Raster raster;
    Point top_left;  // canvas pixels
    double width = 0.0;
    double height = 0.0;
    double opacity = 1.0;
};

/// Layers render bottom-to-top: field, contours, data points, attribute nodes, highlights.
struct Scene {
    int width = 400;
    int height = 300;
    std::optional<Rgb> background;
    std::optional<FieldImage> field;
    std::vector<ContourPath> contours;
    bool contour_labels = true;
    std::vector<Marker> data_points;
    std::vector<Marker> attribute_nodes;
    std::vector<Highlight> highlights;
};

struct SceneOptions {
    int width = 800;
    int height = 600;
    double padding = 24.0;
    double data_radius = 3.0;
    double attribute_radius = 9.0;
    double raster_opacity = 1.0;
    bool contour_labels = true;
    Rgb background{255, 255, 255};
};

/**
 * Lays every layer out through one viewport fitted to `grid_spec.bbox`.
 * `highlight_mask` has one entry per data row (may be empty); `highlight_details`
 * optionally adds callout lines per data row.
 */
Scene compose_scene(const Embedding& embedding, const Raster& raster, const GridSpec& grid_spec,
                    const ContourSet& contours, const std::vector<bool>& highlight_mask,
                    const SceneOptions& options = {},
                    const std::vector<std::vector<std::string>>& highlight_details = {});

Viewport scene_viewport(const GridSpec& grid_spec, const SceneOptions& options);

/// Standalone SVG 1.1 document; byte-for-byte deterministic.
std::string emit_svg(const Scene& scene);

/// Whether the raster backend was compiled in.
bool png_backend_available();

/// Rasterizes the scene (text is not drawn) and encodes it as PNG.
/// Throws Error(UnsupportedFeature) when the raster backend is disabled.
std::string emit_png(const Scene& scene);

/// Scene rasterization used by emit_png.
Raster rasterize(const Scene& scene);

/// PNG (8-bit RGBA, no interlace, filter 0) encoding of a raster.
std::string encode_png(const Raster& raster);

std::string base64_encode(const std::string& bytes);

}  // namespace scalarmap
