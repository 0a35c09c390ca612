#include "scalarmap/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scalarmap/error.hpp"
#include "scalarmap/format.hpp"
#include "scalarmap/io.hpp"

namespace scalarmap {

namespace fs = std::filesystem;

namespace {

ConfigError config_error(const std::string& field, const std::string& what) {
    return ConfigError(ErrorCode::InvalidParameter, field + ": " + what);
}

std::string out_path(const PipelineConfig& config, const std::string& name) {
    return (fs::path(config.out_dir) / name).string();
}

void prepare_out_dir(const PipelineConfig& config) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec || !fs::is_directory(config.out_dir)) {
        throw config_error("out_dir", "cannot create directory '" + config.out_dir + "'");
    }
}

std::vector<std::string> node_labels(const Dataset& ds) {
    std::vector<std::string> labels = ds.row_labels;
    labels.insert(labels.end(), ds.attribute_names.begin(), ds.attribute_names.end());
    return labels;
}

std::size_t scalar_index(const PipelineConfig& config, const Dataset& ds) {
    try {
        return ds.attribute_index(config.scalar);
    } catch (const ConfigError& e) {
        throw ConfigError(e.code(), std::string("scalar: ") + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) { write_file(path, text); }

template <typename Writer>
std::string render_to_string(Writer&& writer) {
    std::ostringstream os;
    writer(os);
    return os.str();
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

}  // namespace

void PipelineConfig::validate() const {
    if (input.empty()) throw config_error("input", "no input table given");
    if (scalar.empty()) throw config_error("scalar", "no scalar attribute given");
    try {
        weights.validate();
    } catch (const ConfigError& e) {
        throw config_error("weights", e.what());
    }
    try {
        mds.validate();
    } catch (const ConfigError& e) {
        throw config_error("mds", e.what());
    }
    if (!std::isfinite(alpha) || alpha < 0.0) throw config_error("alpha", "must be finite and >= 0");
    if (border_count < 4) throw config_error("border_count", "must be >= 4");
    if (!std::isfinite(border_value)) throw config_error("border_value", "must be finite");
    if (grid_width < 16 || grid_height < 16) throw config_error("grid", "must be at least 16x16");
    if (!std::isfinite(margin) || margin < 0.0) throw config_error("margin", "must be finite and >= 0");
    if (levels.empty() && level_count < 1) throw config_error("levels", "level count must be >= 1");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!std::isfinite(levels[i]) || (i > 0 && !(levels[i] > levels[i - 1]))) {
            throw config_error("levels", "explicit levels must be finite and strictly increasing");
        }
    }
    try {
        ColorMap::by_name(colormap);
    } catch (const ConfigError& e) {
        throw config_error("colormap", e.what());
    }
    if (canvas_width < 16 || canvas_height < 16) throw config_error("canvas", "must be at least 16x16 pixels");
    if (!(raster_opacity >= 0.0 && raster_opacity <= 1.0)) throw config_error("raster_opacity", "must be in [0, 1]");
    if (out_dir.empty()) throw config_error("out_dir", "must not be empty");
    if (png && !png_backend_available()) {
        throw ConfigError(ErrorCode::UnsupportedFeature, "png: raster backend not built");
    }
}

Dataset load_input(const PipelineConfig& config) {
    if (!fs::is_regular_file(config.input)) throw config_error("input", "cannot read '" + config.input + "'");
    CsvOptions options;
    options.label_column = config.label_column;
    try {
        return load_csv_file(config.input, options);
    } catch (const ConfigError& e) {
        throw ConfigError(e.code(), std::string("label_column: ") + e.what());
    }
}

EmbedOutputs compute_embedding(const PipelineConfig& config) {
    EmbedOutputs out;
    out.dataset = load_input(config);
    scalar_index(config, out.dataset);
    const NormalizedDataset nds = normalize_minmax(out.dataset);
    const CompositeMatrix composite = build_composite(nds, config.weights);
    auto [embedding, report] = embed(composite, node_labels(out.dataset), config.mds);
    out.embedding = std::move(embedding);
    out.report = std::move(report);
    if (config.dump_composite) {
        write_text(out_path(config, "composite.csv"), render_to_string([&](std::ostream& os) {
                       write_composite_csv(os, composite, node_labels(out.dataset));
                   }));
    }
    return out;
}

FieldOutputs compute_field(const PipelineConfig& config, const Dataset& ds, const Embedding& embedding) {
    const std::size_t k = scalar_index(config, ds);
    std::vector<Point> nodes;
    std::vector<Point> positions;
    std::vector<double> values;
    std::size_t row = 0;
    for (Eigen::Index i = 0; i < embedding.size(); ++i) {
        const Point p{embedding.coords(i, 0), embedding.coords(i, 1)};
        nodes.push_back(p);
        if (embedding.kinds[static_cast<std::size_t>(i)] != NodeKind::Data) continue;
        if (row >= static_cast<std::size_t>(ds.rows())) {
            throw DataError(ErrorCode::ShapeMismatch, "embedding has more data nodes than the input has rows");
        }
        positions.push_back(p);
        values.push_back(ds.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k)));
        ++row;
    }
    if (row != static_cast<std::size_t>(ds.rows())) {
        throw DataError(ErrorCode::ShapeMismatch, "embedding has " + std::to_string(row) + " data nodes, input has " +
                                                      std::to_string(ds.rows()) + " rows");
    }

    FieldOutputs out;
    const GridSpec grid = grid_around(nodes, config.grid_width, config.grid_height, config.margin);
    out.samples = SampleSet(positions, values, {}, grid.bbox);
    if (config.extrapolate_border) {
        out.samples = add_border_samples(out.samples, grid, config.border_count, config.border_value);
    }
    out.bandwidths = fit_bandwidths(out.samples, config.alpha);
    out.grid = evaluate_field(out.samples, out.bandwidths, grid, config.workers);
    return out;
}

ContourSet compute_contours(const PipelineConfig& config, const ScalarFieldGrid& grid) {
    std::vector<double> levels = config.levels;
    if (levels.empty()) {
        if (!(grid.zmax > grid.zmin)) return {};
        levels = topographic_levels(grid, config.level_count);
    }
    return extract_contours(grid, levels, config.workers);
}

Scene compute_scene(const PipelineConfig& config, const Dataset& ds, const Embedding& embedding,
                    const ScalarFieldGrid& grid, const ContourSet& contours) {
    std::vector<bool> mask;
    std::vector<std::vector<std::string>> details;
    if (!config.filter.empty()) {
        RowPredicate predicate;
        try {
            predicate = parse_filter(config.filter, ds);
        } catch (const ConfigError& e) {
            throw ConfigError(e.code(), std::string("filter: ") + e.what());
        }
        mask = apply_filter(ds, predicate);
        details.resize(mask.size());
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (!mask[i]) continue;
            for (const auto& clause : predicate.clauses) {
                std::ostringstream os;
                os << clause.attribute_name << " = "
                   << ds.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(clause.attribute));
                details[i].push_back(os.str());
            }
        }
    }
    SceneOptions options;
    options.width = config.canvas_width;
    options.height = config.canvas_height;
    options.raster_opacity = config.raster_opacity;
    options.contour_labels = config.contour_labels;
    const Raster raster = colorize(grid, ColorMap::by_name(config.colormap));
    return compose_scene(embedding, raster, grid.spec, contours, mask, options, details);
}

namespace {

void write_embedding_outputs(const PipelineConfig& config, const EmbedOutputs& e) {
    write_text(out_path(config, "embedding.csv"),
               render_to_string([&](std::ostream& os) { write_embedding_csv(os, e.embedding); }));
    write_text(out_path(config, "stress.csv"),
               render_to_string([&](std::ostream& os) { write_stress_csv(os, e.report); }));
}

void write_field_outputs(const PipelineConfig& config, const ScalarFieldGrid& grid) {
    write_text(out_path(config, "field.csv"), render_to_string([&](std::ostream& os) { write_field_csv(os, grid); }));
    write_text(out_path(config, "field.bin"), field_to_binary(grid));
}

void write_render_outputs(const PipelineConfig& config, const Scene& scene) {
    write_text(out_path(config, "figure.svg"), emit_svg(scene));
    if (config.png) write_text(out_path(config, "figure.png"), emit_png(scene));
}

Embedding read_saved_embedding(const PipelineConfig& config) {
    std::istringstream in(read_file(out_path(config, "embedding.csv")));
    return read_embedding_csv(in);
}

ScalarFieldGrid read_saved_field(const PipelineConfig& config) {
    return field_from_binary(read_file(out_path(config, "field.bin")));
}

}  // namespace

void cmd_embed(const PipelineConfig& config) {
    config.validate();
    prepare_out_dir(config);
    write_embedding_outputs(config, compute_embedding(config));
}

void cmd_field(const PipelineConfig& config) {
    config.validate();
    prepare_out_dir(config);
    const Dataset ds = load_input(config);
    const Embedding embedding = read_saved_embedding(config);
    write_field_outputs(config, compute_field(config, ds, embedding).grid);
}

void cmd_contour(const PipelineConfig& config) {
    config.validate();
    prepare_out_dir(config);
    const ScalarFieldGrid grid = read_saved_field(config);
    write_text(out_path(config, "contours.json"), contours_to_json(compute_contours(config, grid)));
}

void cmd_render(const PipelineConfig& config) {
    config.validate();
    prepare_out_dir(config);
    const Dataset ds = load_input(config);
    const Embedding embedding = read_saved_embedding(config);
    const ScalarFieldGrid grid = read_saved_field(config);
    const ContourSet contours = contours_from_json(read_file(out_path(config, "contours.json")));
    write_render_outputs(config, compute_scene(config, ds, embedding, grid, contours));
}

void cmd_pipeline(const PipelineConfig& config) {
    config.validate();
    prepare_out_dir(config);
    nlohmann::ordered_json timings;

    Timer t_embed;
    const EmbedOutputs e = compute_embedding(config);
    write_embedding_outputs(config, e);
    timings["embed_seconds"] = t_embed.seconds();

    Timer t_field;
    const FieldOutputs f = compute_field(config, e.dataset, e.embedding);
    write_field_outputs(config, f.grid);
    timings["field_seconds"] = t_field.seconds();

    Timer t_contour;
    const ContourSet contours = compute_contours(config, f.grid);
    write_text(out_path(config, "contours.json"), contours_to_json(contours));
    timings["contour_seconds"] = t_contour.seconds();

    Timer t_render;
    const Scene scene = compute_scene(config, e.dataset, e.embedding, f.grid, contours);
    write_render_outputs(config, scene);
    timings["render_seconds"] = t_render.seconds();

    nlohmann::ordered_json manifest;
    nlohmann::ordered_json echo;
    echo["input"] = config.input;
    echo["label_column"] = config.label_column ? nlohmann::ordered_json(*config.label_column) : nullptr;
    echo["scalar"] = config.scalar;
    echo["weights"] = {config.weights.data_data, config.weights.attr_attr, config.weights.data_attr};
    echo["max_iter"] = config.mds.max_iter;
    echo["rel_tol"] = config.mds.rel_tol;
    echo["init"] = config.mds.init == InitMode::Classical ? "classical" : "random";
    echo["seed"] = config.mds.seed;
    echo["alpha"] = config.alpha;
    echo["extrapolate_border"] = config.extrapolate_border;
    echo["border_count"] = config.border_count;
    echo["border_value"] = config.border_value;
    echo["grid"] = {config.grid_width, config.grid_height};
    echo["margin"] = config.margin;
    echo["level_count"] = config.level_count;
    echo["levels"] = config.levels;
    echo["colormap"] = config.colormap;
    echo["canvas"] = {config.canvas_width, config.canvas_height};
    echo["filter"] = config.filter;
    manifest["config"] = echo;

    manifest["rows"] = e.dataset.rows();
    manifest["attributes"] = e.dataset.attribute_names;
    manifest["stress"] = {{"final", e.report.final_stress},
                          {"iterations", e.report.iterations},
                          {"converged", e.report.converged}};
    manifest["field"] = {{"zmin", f.grid.zmin},
                         {"zmax", f.grid.zmax},
                         {"samples", f.samples.size()},
                         {"pilot_bandwidth", {f.bandwidths.pilot.x, f.bandwidths.pilot.y}}};
    nlohmann::ordered_json level_list = nlohmann::ordered_json::array();
    for (const auto& entry : contours.levels) level_list.push_back(entry.level);
    manifest["contour_levels"] = level_list;
    manifest["highlighted"] = scene.highlights.size();
    std::vector<std::string> warnings = normalize_minmax(e.dataset).warnings;
    warnings.insert(warnings.end(), f.samples.warnings().begin(), f.samples.warnings().end());
    manifest["warnings"] = warnings;
    if (config.record_timings) manifest["timings"] = timings;
    write_text(out_path(config, "manifest.json"), manifest.dump(2) + "\n");
}

}  // namespace scalarmap
