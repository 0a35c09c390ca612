#include "scalarmap/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scalarmap/dataset.hpp"
#include "scalarmap/error.hpp"
#include "scalarmap/format.hpp"

namespace scalarmap {

namespace {

DataError malformed(const std::string& what) { return DataError(ErrorCode::MalformedFile, what); }

double parse_double(const std::string& text, const std::string& where) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw malformed("invalid number '" + text + "' in " + where);
    }
    return value;
}

int parse_int(const std::string& text, const std::string& where) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) throw malformed("invalid integer '" + text + "' in " + where);
    return value;
}

void put_le(std::string& out, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint64_t get_le(const std::string& in, std::size_t offset, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(in[offset + i])) << (8 * i);
    return v;
}

}  // namespace

void write_embedding_csv(std::ostream& out, const Embedding& embedding) {
    out << "label,kind,x,y\n";
    for (Eigen::Index i = 0; i < embedding.size(); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        out << csv_escape(embedding.labels[idx]) << ','
            << (embedding.kinds[idx] == NodeKind::Data ? "data" : "attribute") << ','
            << format_real(embedding.coords(i, 0)) << ',' << format_real(embedding.coords(i, 1)) << '\n';
    }
}

Embedding read_embedding_csv(std::istream& in) {
    const auto records = parse_csv_records(in);
    if (records.empty() || records.front() != std::vector<std::string>{"label", "kind", "x", "y"}) {
        throw malformed("embedding CSV must start with header 'label,kind,x,y'");
    }
    Embedding e;
    e.coords.resize(static_cast<Eigen::Index>(records.size() - 1), 2);
    bool seen_attribute = false;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::string where = "embedding line " + std::to_string(r + 1);
        if (rec.size() != 4) throw malformed(where + ": expected 4 fields");
        NodeKind kind;
        if (rec[1] == "data") {
            if (seen_attribute) throw malformed(where + ": data rows must precede attribute rows");
            kind = NodeKind::Data;
        } else if (rec[1] == "attribute") {
            kind = NodeKind::Attribute;
            seen_attribute = true;
        } else {
            throw malformed(where + ": kind must be 'data' or 'attribute'");
        }
        e.labels.push_back(rec[0]);
        e.kinds.push_back(kind);
        e.coords(static_cast<Eigen::Index>(r - 1), 0) = parse_double(rec[2], where);
        e.coords(static_cast<Eigen::Index>(r - 1), 1) = parse_double(rec[3], where);
    }
    return e;
}

void write_stress_csv(std::ostream& out, const StressReport& report) {
    out << "iteration,stress\n";
    for (std::size_t t = 0; t < report.trace.size(); ++t) out << t << ',' << format_real(report.trace[t]) << '\n';
}

void write_field_csv(std::ostream& out, const ScalarFieldGrid& grid) {
    const auto& s = grid.spec;
    out << "width,height,xmin,ymin,xmax,ymax\n";
    out << s.width << ',' << s.height << ',' << format_real(s.bbox.xmin) << ',' << format_real(s.bbox.ymin) << ','
        << format_real(s.bbox.xmax) << ',' << format_real(s.bbox.ymax) << '\n';
    for (int iy = 0; iy < s.height; ++iy) {
        for (int ix = 0; ix < s.width; ++ix) {
            if (ix) out << ',';
            out << format_real(grid.at(ix, iy));
        }
        out << '\n';
    }
}

ScalarFieldGrid read_field_csv(std::istream& in) {
    const auto records = parse_csv_records(in);
    if (records.size() < 2 || records[0] != std::vector<std::string>{"width", "height", "xmin", "ymin", "xmax", "ymax"} ||
        records[1].size() != 6) {
        throw malformed("field CSV must start with 'width,height,xmin,ymin,xmax,ymax' and one metadata row");
    }
    ScalarFieldGrid grid;
    grid.spec.width = parse_int(records[1][0], "field header");
    grid.spec.height = parse_int(records[1][1], "field header");
    grid.spec.bbox = {parse_double(records[1][2], "field header"), parse_double(records[1][3], "field header"),
                      parse_double(records[1][4], "field header"), parse_double(records[1][5], "field header")};
    try {
        grid.spec.validate();
    } catch (const Error& e) {
        throw malformed(std::string("field header: ") + e.what());
    }
    if (records.size() != static_cast<std::size_t>(grid.spec.height) + 2) {
        throw malformed("field CSV has " + std::to_string(records.size() - 2) + " value rows, header says " +
                        std::to_string(grid.spec.height));
    }
    grid.values.reserve(grid.spec.node_count());
    for (int iy = 0; iy < grid.spec.height; ++iy) {
        const auto& row = records[static_cast<std::size_t>(iy) + 2];
        const std::string where = "field row " + std::to_string(iy);
        if (row.size() != static_cast<std::size_t>(grid.spec.width)) throw malformed(where + ": wrong number of values");
        for (const auto& cell : row) grid.values.push_back(parse_double(cell, where));
    }
    grid.update_range();
    return grid;
}

std::string field_to_binary(const ScalarFieldGrid& grid) {
    const auto& s = grid.spec;
    std::string out = "OIEF";
    out.reserve(field_binary_header_size + grid.values.size() * 8);
    put_le(out, static_cast<std::uint32_t>(s.width), 4);
    put_le(out, static_cast<std::uint32_t>(s.height), 4);
    for (double v : {s.bbox.xmin, s.bbox.ymin, s.bbox.xmax, s.bbox.ymax}) put_le(out, std::bit_cast<std::uint64_t>(v), 8);
    for (double v : grid.values) put_le(out, std::bit_cast<std::uint64_t>(v), 8);
    return out;
}

ScalarFieldGrid field_from_binary(const std::string& bytes) {
    auto need = [&](std::size_t offset, std::size_t count, const char* what) {
        if (bytes.size() < offset + count) {
            throw malformed("field binary truncated at byte offset " + std::to_string(bytes.size()) + " while reading " +
                            what + " (expected " + std::to_string(count) + " bytes at offset " + std::to_string(offset) +
                            ")");
        }
    };
    need(0, 4, "magic");
    if (bytes.compare(0, 4, "OIEF") != 0) throw malformed("field binary has bad magic at byte offset 0");
    need(4, 8, "resolution");
    ScalarFieldGrid grid;
    grid.spec.width = static_cast<int>(get_le(bytes, 4, 4));
    grid.spec.height = static_cast<int>(get_le(bytes, 8, 4));
    need(12, 32, "bounding box");
    double box[4];
    for (int i = 0; i < 4; ++i) box[i] = std::bit_cast<double>(get_le(bytes, 12 + 8 * static_cast<std::size_t>(i), 8));
    grid.spec.bbox = {box[0], box[1], box[2], box[3]};
    try {
        grid.spec.validate();
    } catch (const Error& e) {
        throw malformed(std::string("field binary header at byte offset 4: ") + e.what());
    }
    const std::size_t count = grid.spec.node_count();
    need(field_binary_header_size, count * 8, "values");
    if (bytes.size() != field_binary_header_size + count * 8) {
        throw malformed("field binary has " + std::to_string(bytes.size() - field_binary_header_size - count * 8) +
                        " trailing bytes after offset " + std::to_string(field_binary_header_size + count * 8));
    }
    grid.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t offset = field_binary_header_size + 8 * i;
        grid.values[i] = std::bit_cast<double>(get_le(bytes, offset, 8));
        if (!std::isfinite(grid.values[i])) {
            throw malformed("field binary has a non-finite value at byte offset " + std::to_string(offset));
        }
    }
    grid.update_range();
    return grid;
}

std::string contours_to_json(const ContourSet& contours) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& entry : contours.levels) {
        nlohmann::json lines = nlohmann::json::array();
        nlohmann::json closed = nlohmann::json::array();
        for (const auto& line : entry.polylines) {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& v : line.vertices) pts.push_back({v.x, v.y});
            lines.push_back(std::move(pts));
            closed.push_back(line.closed);
        }
        doc.push_back({{"level", entry.level}, {"polylines", std::move(lines)}, {"closed", std::move(closed)}});
    }
    return doc.dump(1) + "\n";
}

ContourSet contours_from_json(const std::string& text) {
    ContourSet out;
    try {
        const auto doc = nlohmann::json::parse(text);
        if (!doc.is_array()) throw malformed("contour JSON must be an array");
        for (const auto& item : doc) {
            ContourLevel entry;
            entry.level = item.at("level").get<double>();
            const auto& lines = item.at("polylines");
            const auto& closed = item.at("closed");
            if (lines.size() != closed.size()) throw malformed("contour JSON: polylines and closed differ in length");
            for (std::size_t i = 0; i < lines.size(); ++i) {
                Polyline line;
                line.closed = closed[i].get<bool>();
                for (const auto& v : lines[i]) line.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
                entry.polylines.push_back(std::move(line));
            }
            out.levels.push_back(std::move(entry));
        }
    } catch (const nlohmann::json::exception& e) {
        throw malformed(std::string("contour JSON: ") + e.what());
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw malformed("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(ErrorCode::InvalidParameter, "cannot write '" + path + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ConfigError(ErrorCode::InvalidParameter, "failed writing '" + path + "'");
}

}  // namespace scalarmap
