#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <CLI11.hpp>

#include "scalarmap/error.hpp"
#include "scalarmap/pipeline.hpp"

namespace scalarmap::cli {

namespace {

std::pair<int, int> parse_size(const std::string& text, const char* field) {
    const auto x = text.find_first_of("xX");
    int w = 0;
    int h = 0;
    bool ok = x != std::string::npos;
    if (ok) {
        auto r1 = std::from_chars(text.data(), text.data() + x, w);
        auto r2 = std::from_chars(text.data() + x + 1, text.data() + text.size(), h);
        ok = r1.ec == std::errc{} && r1.ptr == text.data() + x && r2.ec == std::errc{} &&
             r2.ptr == text.data() + text.size();
    }
    if (!ok) throw ConfigError(ErrorCode::InvalidParameter, std::string(field) + ": expected WxH, got '" + text + "'");
    return {w, h};
}

std::vector<double> parse_list(const std::string& text, const char* field) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size()) {
            throw ConfigError(ErrorCode::InvalidParameter, std::string(field) + ": '" + item + "' is not a number");
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Scalar-field maps of high-dimensional tables", "scalarmap"};
    app.set_config("--config", "", "TOML file with option values (keys mirror the long flag names)");
    app.require_subcommand(1);

    PipelineConfig config;
    std::string label_column;
    std::string weights = "1,1,1";
    std::string init = "classical";
    std::string grid = "256x256";
    std::string canvas = "800x600";
    std::string level_values;
    bool no_contour_labels = false;

    app.add_option("--input", config.input, "Input CSV table");
    app.add_option("--label-column", label_column, "Name of the row label column (auto-detected if omitted)");
    app.add_option("--scalar", config.scalar, "Attribute rendered as the scalar field");
    app.add_option("--weights", weights, "Fusion weights dd,aa,da")->capture_default_str();
    app.add_flag("--dump-composite", config.dump_composite, "Also write composite.csv");
    app.add_option("--max-iter", config.mds.max_iter, "SMACOF iteration limit")->capture_default_str();
    app.add_option("--rel-tol", config.mds.rel_tol, "Relative stress change that stops SMACOF")->capture_default_str();
    app.add_option("--init", init, "MDS start: classical or random")->capture_default_str();
    app.add_option("--seed", config.mds.seed, "Seed for the random MDS start")->capture_default_str();
    app.add_option("--alpha", config.alpha, "Adaptive bandwidth sensitivity")->capture_default_str();
    app.add_flag("--extrapolate-border", config.extrapolate_border, "Add border samples pulling the field to a value");
    app.add_option("--border-count", config.border_count, "Number of border samples")->capture_default_str();
    app.add_option("--border-value", config.border_value, "Value of border samples")->capture_default_str();
    app.add_option("--grid", grid, "Field resolution WxH")->capture_default_str();
    app.add_option("--margin", config.margin, "Grid margin as a fraction of the layout extent")->capture_default_str();
    app.add_option("--levels", config.level_count, "Number of equally spaced contour levels")->capture_default_str();
    app.add_option("--level-values", level_values, "Explicit comma-separated contour levels");
    app.add_option("--colormap", config.colormap, "grayscale or viridis")->capture_default_str();
    app.add_option("--canvas", canvas, "Figure size WxH in pixels")->capture_default_str();
    app.add_option("--raster-opacity", config.raster_opacity, "Opacity of the field raster")->capture_default_str();
    app.add_flag("--no-contour-labels", no_contour_labels, "Hide contour level labels");
    app.add_flag("--png", config.png, "Also write figure.png");
    app.add_option("--filter", config.filter, "Rows to highlight, e.g. 'academic>9,tuition<18000'");
    app.add_option("--out-dir", config.out_dir, "Output directory")->capture_default_str();
    app.add_option("--threads", config.workers, "Worker threads for field and contour stages")->capture_default_str();
    app.add_flag("--record-timings", config.record_timings, "Add stage timings to manifest.json");

    struct Command {
        const char* name;
        const char* help;
        void (*run)(const PipelineConfig&);
    };
    const Command commands[] = {
        {"embed", "Composite matrix and MDS layout: embedding.csv, stress.csv", cmd_embed},
        {"field", "Scalar field from a saved embedding: field.csv, field.bin", cmd_field},
        {"contour", "Contours from a saved field: contours.json", cmd_contour},
        {"render", "Figure from saved stages: figure.svg", cmd_render},
        {"pipeline", "All stages plus manifest.json", cmd_pipeline},
    };
    for (const auto& c : commands) app.add_subcommand(c.name, c.help)->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return ExitConfig;
    }

    try {
        if (!label_column.empty()) config.label_column = label_column;
        const auto w = parse_list(weights, "weights");
        if (w.size() != 3) throw ConfigError(ErrorCode::InvalidParameter, "weights: expected three values dd,aa,da");
        config.weights = {w[0], w[1], w[2]};
        if (init == "classical") {
            config.mds.init = InitMode::Classical;
        } else if (init == "random") {
            config.mds.init = InitMode::Random;
        } else {
            throw ConfigError(ErrorCode::InvalidParameter, "init: expected 'classical' or 'random', got '" + init + "'");
        }
        std::tie(config.grid_width, config.grid_height) = parse_size(grid, "grid");
        std::tie(config.canvas_width, config.canvas_height) = parse_size(canvas, "canvas");
        if (!level_values.empty()) config.levels = parse_list(level_values, "level-values");
        config.contour_labels = !no_contour_labels;
        config.workers = std::max(1u, config.workers);

        for (const auto& c : commands) {
            if (app.got_subcommand(c.name)) c.run(config);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return ExitConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return ExitData;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return ExitConfig;
    }
    return ExitOk;
}

}  // namespace scalarmap::cli
