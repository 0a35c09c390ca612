#include <algorithm>
#include <cmath>

#include <zlib.h>

#include "scalarmap/error.hpp"
#include "scalarmap/render.hpp"

namespace scalarmap {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    out += static_cast<char>((v >> 24) & 0xff);
    out += static_cast<char>((v >> 16) & 0xff);
    out += static_cast<char>((v >> 8) & 0xff);
    out += static_cast<char>(v & 0xff);
}

void put_chunk(std::string& out, const char* type, const std::string& data) {
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    const std::string body = std::string(type, 4) + data;
    out += body;
    const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
    put_u32(out, static_cast<std::uint32_t>(crc));
}

#ifdef SCALARMAP_PNG_BACKEND

using Rgba = std::array<std::uint8_t, 4>;

void blend(Raster& r, int x, int y, Rgb c, double alpha) {
    if (x < 0 || y < 0 || x >= r.width || y >= r.height || alpha <= 0.0) return;
    auto p = r.pixel(x, y);
    auto mix = [alpha](std::uint8_t under, std::uint8_t over) {
        return static_cast<std::uint8_t>(std::lround(under + alpha * (static_cast<double>(over) - under)));
    };
    const auto a = static_cast<std::uint8_t>(std::lround(p[3] + alpha * (255.0 - p[3])));
    r.set(x, y, {mix(p[0], c.r), mix(p[1], c.g), mix(p[2], c.b), a});
}

void draw_line(Raster& r, Point a, Point b, Rgb c) {
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const int steps = std::max(1, static_cast<int>(std::ceil(len * 2.0)));
    for (int s = 0; s <= steps; ++s) {
        const double t = static_cast<double>(s) / steps;
        blend(r, static_cast<int>(std::floor(a.x + t * (b.x - a.x))), static_cast<int>(std::floor(a.y + t * (b.y - a.y))),
              c, 1.0);
    }
}

void fill_disc(Raster& r, Point centre, double radius, Rgb c) {
    const int x0 = static_cast<int>(std::floor(centre.x - radius));
    const int x1 = static_cast<int>(std::ceil(centre.x + radius));
    const int y0 = static_cast<int>(std::floor(centre.y - radius));
    const int y1 = static_cast<int>(std::ceil(centre.y + radius));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (std::hypot(x + 0.5 - centre.x, y + 0.5 - centre.y) <= radius) blend(r, x, y, c, 1.0);
        }
    }
}

void stroke_ring(Raster& r, Point centre, double radius, double width, Rgb c) {
    const double outer = radius + width;
    const int x0 = static_cast<int>(std::floor(centre.x - outer));
    const int x1 = static_cast<int>(std::ceil(centre.x + outer));
    const int y0 = static_cast<int>(std::floor(centre.y - outer));
    const int y1 = static_cast<int>(std::ceil(centre.y + outer));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double d = std::hypot(x + 0.5 - centre.x, y + 0.5 - centre.y);
            if (std::abs(d - radius) <= 0.5 * width) blend(r, x, y, c, 1.0);
        }
    }
}

#endif

}  // namespace

std::string encode_png(const Raster& raster) {
    std::string out = "\x89PNG\r\n\x1a\n";

    std::string header;
    put_u32(header, static_cast<std::uint32_t>(raster.width));
    put_u32(header, static_cast<std::uint32_t>(raster.height));
    header += static_cast<char>(8);  // bit depth
    header += static_cast<char>(6);  // RGBA
    header += std::string(3, '\0');  // compression, filter, interlace
    put_chunk(out, "IHDR", header);

    const std::size_t stride = static_cast<std::size_t>(raster.width) * 4;
    std::string scanlines;
    scanlines.reserve((stride + 1) * static_cast<std::size_t>(raster.height));
    for (int y = 0; y < raster.height; ++y) {
        scanlines += '\0';
        scanlines.append(reinterpret_cast<const char*>(raster.rgba.data()) + y * stride, stride);
    }
    uLongf packed_size = compressBound(static_cast<uLong>(scanlines.size()));
    std::string packed(packed_size, '\0');
    if (compress2(reinterpret_cast<Bytef*>(packed.data()), &packed_size,
                  reinterpret_cast<const Bytef*>(scanlines.data()), static_cast<uLong>(scanlines.size()), 9) != Z_OK) {
        throw Error(ErrorCode::UnsupportedFeature, "zlib compression failed");
    }
    packed.resize(packed_size);
    put_chunk(out, "IDAT", packed);
    put_chunk(out, "IEND", "");
    return out;
}

bool png_backend_available() {
#ifdef SCALARMAP_PNG_BACKEND
    return true;
#else
    return false;
#endif
}

Raster rasterize(const Scene& scene) {
#ifdef SCALARMAP_PNG_BACKEND
    Raster out(scene.width, scene.height, {0, 0, 0, 0});
    if (scene.background) {
        const auto& b = *scene.background;
        out = Raster(scene.width, scene.height, {b.r, b.g, b.b, 255});
    }

    if (scene.field && scene.field->raster.width > 0) {
        const auto& f = *scene.field;
        const int x0 = std::max(0, static_cast<int>(std::floor(f.top_left.x)));
        const int y0 = std::max(0, static_cast<int>(std::floor(f.top_left.y)));
        const int x1 = std::min(scene.width, static_cast<int>(std::ceil(f.top_left.x + f.width)));
        const int y1 = std::min(scene.height, static_cast<int>(std::ceil(f.top_left.y + f.height)));
        for (int y = y0; y < y1; ++y) {
            const double v = (y + 0.5 - f.top_left.y) / f.height;
            if (v < 0.0 || v >= 1.0) continue;
            const int row = std::min(f.raster.height - 1, static_cast<int>(v * f.raster.height));
            for (int x = x0; x < x1; ++x) {
                const double u = (x + 0.5 - f.top_left.x) / f.width;
                if (u < 0.0 || u >= 1.0) continue;
                const int col = std::min(f.raster.width - 1, static_cast<int>(u * f.raster.width));
                const auto p = f.raster.pixel(col, row);
                blend(out, x, y, {p[0], p[1], p[2]}, f.opacity * p[3] / 255.0);
            }
        }
    }

    const Rgb ink{40, 40, 40};
    for (const auto& path : scene.contours) {
        for (std::size_t i = 1; i < path.vertices.size(); ++i) draw_line(out, path.vertices[i - 1], path.vertices[i], ink);
        if (path.closed && path.vertices.size() > 2) draw_line(out, path.vertices.back(), path.vertices.front(), ink);
    }
    for (const auto& m : scene.data_points) fill_disc(out, m.at, m.radius, m.color);
    for (const auto& m : scene.attribute_nodes) {
        fill_disc(out, m.at, m.radius + 1.0, {255, 255, 255});
        fill_disc(out, m.at, m.radius, m.color);
    }
    for (const auto& h : scene.highlights) stroke_ring(out, h.at, h.radius, 2.0, {214, 39, 40});
    return out;
#else
    (void)scene;
    throw Error(ErrorCode::UnsupportedFeature, "raster backend not built");
#endif
}

std::string emit_png(const Scene& scene) { return encode_png(rasterize(scene)); }

}  // namespace scalarmap
