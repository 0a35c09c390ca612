#pragma once

/**
 * @file pipeline.hpp
 *
 * @brief End-to-end orchestration: ingest, composite matrix, MDS layout,
 * scalar field, contours and figure, plus the stage-wise commands that
 * resume from intermediate dumps.
 *
 * Files written into `out_dir`:
 *   embedding.csv, stress.csv           (embed)
 *   field.csv, field.bin                (field)
 *   contours.json                       (contour)
 *   figure.svg [, figure.png]           (render)
 *   manifest.json                       (pipeline only)
 */

#include <optional>
#include <string>
#include <vector>

#include "scalarmap/affinity.hpp"
#include "scalarmap/contour.hpp"
#include "scalarmap/dataset.hpp"
#include "scalarmap/field.hpp"
#include "scalarmap/mds.hpp"
#include "scalarmap/render.hpp"

namespace scalarmap {

struct PipelineConfig {
    std::string input;
    std::optional<std::string> label_column;
    std::string scalar;

    FusionWeights weights;
    MdsParams mds;
    bool dump_composite = false;

    double alpha = 0.5;
    bool extrapolate_border = false;
    int border_count = 256;
    double border_value = 0.0;
    int grid_width = 256;
    int grid_height = 256;
    double margin = 0.05;

    int level_count = 8;
    std::vector<double> levels;  // overrides level_count when non-empty

    std::string colormap = "grayscale";
    int canvas_width = 800;
    int canvas_height = 600;
    double raster_opacity = 1.0;
    bool contour_labels = true;
    bool png = false;

    std::string filter;
    std::string out_dir = "out";
    unsigned workers = 1;
    bool record_timings = false;

    /// Checks everything that does not need the input table.
    void validate() const;
};

/// Exit codes used by the command-line front end.
enum ExitCode : int { ExitOk = 0, ExitConfig = 2, ExitData = 3 };

struct EmbedOutputs {
    Dataset dataset;
    Embedding embedding;
    StressReport report;
};

struct FieldOutputs {
    SampleSet samples;
    BandwidthSet bandwidths;
    ScalarFieldGrid grid;
};

/// Loads the input table named by the config; missing files are config errors.
Dataset load_input(const PipelineConfig& config);

EmbedOutputs compute_embedding(const PipelineConfig& config);
FieldOutputs compute_field(const PipelineConfig& config, const Dataset& ds, const Embedding& embedding);
ContourSet compute_contours(const PipelineConfig& config, const ScalarFieldGrid& grid);
Scene compute_scene(const PipelineConfig& config, const Dataset& ds, const Embedding& embedding,
                    const ScalarFieldGrid& grid, const ContourSet& contours);

/// Stage commands. Each throws ConfigError or DataError on failure.
void cmd_embed(const PipelineConfig& config);
void cmd_field(const PipelineConfig& config);
void cmd_contour(const PipelineConfig& config);
void cmd_render(const PipelineConfig& config);
void cmd_pipeline(const PipelineConfig& config);

}  // namespace scalarmap
