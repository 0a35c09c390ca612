// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "scalarmap/contour.hpp"
#include "scalarmap/error.hpp"
#include "scalarmap/io.hpp"
#include "scalarmap/pipeline.hpp"
#include "support.hpp"

using namespace scalarmap;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Collects the first few failures of a criterion.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
    }
    Outcome outcome(const std::string& summary) const {
        if (failures_ == 0) return {true, summary};
        return {false, std::to_string(failures_) + " failure(s): " + notes_};
    }

private:
    int failures_ = 0;
    std::string notes_;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct RandomSamples {
    std::vector<oracle::Pt> pts;
    std::vector<double> z;
    SampleSet samples;
    BandwidthSet bw;
};

RandomSamples random_samples(std::mt19937_64& rng, std::size_t k) {
    RandomSamples r;
    std::uniform_real_distribution<double> scale(0.1, 20.0);
    const double sx = scale(rng), sy = scale(rng);
    for (const auto& p : oracle::random_points(rng, k)) r.pts.emplace_back(sx * p.first - 3.0, sy * p.second + 1.0);
    std::uniform_real_distribution<double> u(-50.0, 120.0);
    for (std::size_t i = 0; i < k; ++i) r.z.push_back(u(rng));
    r.samples = SampleSet(testing::to_points(r.pts), r.z);
    r.bw = fit_bandwidths(r.samples);
    return r;
}

Eigen::MatrixXd auto_mpg_composite() {
    return build_composite(normalize_minmax(load_csv_file(testing::data_path("auto_mpg.csv")))).values;
}

Outcome smacof_monotonicity() {
    const auto start = Clock::now();
    Check c;
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<Eigen::Index> size(3, 60);
    std::vector<Eigen::MatrixXd> inputs;
    for (int i = 0; i < 50; ++i) inputs.push_back(testing::random_dissimilarities(rng, size(rng)));
    inputs.push_back(auto_mpg_composite());
    double worst = -1e300;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto trace = run_mds(inputs[i]).report.trace;
        for (std::size_t t = 1; t < trace.size(); ++t) {
            worst = std::max(worst, trace[t] - trace[t - 1]);
            c.expect(trace[t] <= trace[t - 1] + 1e-12, "matrix " + std::to_string(i) + " step " + std::to_string(t));
        }
    }
    const double elapsed = seconds_since(start);
    c.expect(elapsed < 10.0, "runtime " + fmt(elapsed) + " s");
    return c.outcome("51 traces, max step increase " + fmt(worst) + ", " + fmt(elapsed) + " s");
}

Outcome planar_recovery() {
    Check c;
    std::mt19937_64 rng(1002);
    std::uniform_int_distribution<std::size_t> size(3, 20);
    double worst_stress = 0.0, worst_rms = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto truth = oracle::random_points(rng, size(rng), -5.0, 5.0);
        MdsParams p;
        p.max_iter = 300;
        const auto r = run_mds(testing::to_eigen(oracle::planar_distances(truth)), p);
        const auto box = BoundingBox::of(testing::to_points(truth));
        const double rms = oracle::procrustes_rms(testing::to_pts(r.coords), truth);
        worst_stress = std::max(worst_stress, r.report.final_stress);
        worst_rms = std::max(worst_rms, rms / box.diagonal());
        c.expect(r.report.final_stress < 1e-6, "trial " + std::to_string(trial) + " stress " + fmt(r.report.final_stress));
        c.expect(r.report.iterations <= 300, "trial " + std::to_string(trial) + " iterations");
        c.expect(rms < 1e-4 * box.diagonal(), "trial " + std::to_string(trial) + " rms " + fmt(rms));
    }
    return c.outcome("20 sets, max stress " + fmt(worst_stress) + ", max rms/diag " + fmt(worst_rms));
}

Outcome interpolation_exactness() {
    Check c;
    std::mt19937_64 rng(1003);
    std::uniform_int_distribution<std::size_t> size(1, 100);
    std::size_t probes = 0, nodes = 0;
    for (int trial = 0; trial < 20; ++trial) {
        auto r = random_samples(rng, size(rng));
        for (std::size_t i = 0; i < r.samples.size(); ++i) {
            ++probes;
            c.expect(evaluate_at(r.samples, r.bw, r.samples.positions()[i]) == r.samples.values()[i],
                     "trial " + std::to_string(trial) + " sample " + std::to_string(i));
        }

        // Move a few samples to within 1e-12 of grid nodes and check those nodes.
        const auto spec = grid_around(r.samples.positions(), 32, 24);
        std::vector<Point> pos = r.samples.positions();
        std::vector<std::pair<int, int>> pinned;
        std::uniform_int_distribution<int> gx(0, 31), gy(0, 23);
        std::uniform_real_distribution<double> jitter(-7e-13, 7e-13);
        for (std::size_t i = 0; i < std::min<std::size_t>(pos.size(), 4); ++i) {
            const int ix = gx(rng), iy = gy(rng);
            if (std::find(pinned.begin(), pinned.end(), std::make_pair(ix, iy)) != pinned.end()) continue;
            pinned.emplace_back(ix, iy);
            const Point node = spec.node(ix, iy);
            pos[i] = {node.x + jitter(rng), node.y + jitter(rng)};
        }
        const SampleSet moved(pos, r.samples.values(), {}, spec.bbox);
        if (moved.size() != pos.size()) continue;  // a pinned sample merged with a neighbour
        const auto grid = evaluate_field(moved, fit_bandwidths(moved), spec);
        for (std::size_t i = 0; i < pinned.size(); ++i) {
            ++nodes;
            c.expect(grid.at(pinned[i].first, pinned[i].second) == moved.values()[i],
                     "trial " + std::to_string(trial) + " pinned node " + std::to_string(i));
        }
    }
    return c.outcome(std::to_string(probes) + " samples and " + std::to_string(nodes) + " grid nodes exact");
}

Outcome smoothness() {
    Check c;
    std::mt19937_64 rng(1004);
    std::uniform_int_distribution<std::size_t> size(2, 100);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        auto r = random_samples(rng, size(rng));
        const double range = r.samples.max_value() - r.samples.min_value();
        const auto box = grid_around(r.samples.positions(), 2, 2).bbox;
        const double step = 1e-6 * box.diagonal();
        std::uniform_real_distribution<double> ux(box.xmin, box.xmax), uy(box.ymin, box.ymax);
        for (int probe = 0; probe < 100; ++probe) {
            const Point p{ux(rng), uy(rng)};
            const double a = angle(rng);
            const Point q{p.x + step * std::cos(a), p.y + step * std::sin(a)};
            const double jump = std::abs(evaluate_at(r.samples, r.bw, q) - evaluate_at(r.samples, r.bw, p));
            worst = std::max(worst, range > 0.0 ? jump / range : 0.0);
            c.expect(jump <= 1e-3 * range, "trial " + std::to_string(trial) + " jump/range " + fmt(jump / range));
        }
    }
    return c.outcome("2000 probe pairs, max jump/range " + fmt(worst));
}

Outcome range_bound() {
    Check c;
    std::mt19937_64 rng(1005);
    std::uniform_int_distribution<std::size_t> size(1, 100);
    std::size_t checked = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 20; ++trial) {
        auto r = random_samples(rng, size(rng));
        const double lo = r.samples.min_value(), hi = r.samples.max_value();
        const auto spec = grid_around(r.samples.positions(), 48, 48);
        const auto grid = evaluate_field(r.samples, r.bw, spec);
        for (double v : grid.values) {
            ++checked;
            c.expect(v >= lo - 1e-12 && v <= hi + 1e-12, "trial " + std::to_string(trial) + " value " + fmt(v));
        }
        // the unclamped direct sum must respect the bound as well
        std::vector<oracle::Pt> h;
        for (const auto& b : r.bw.per_sample) h.emplace_back(b.x, b.y);
        for (int iy = 0; iy < 48; iy += 5) {
            for (int ix = 0; ix < 48; ix += 5) {
                const auto p = spec.node(ix, iy);
                const double v = oracle::field(r.pts, r.z, h, {p.x, p.y});
                if (!std::isfinite(v)) continue;  // all weights underflowed in the naive sum
                worst = std::max({worst, lo - v, v - hi});
                c.expect(v >= lo - 1e-12 && v <= hi + 1e-12, "oracle trial " + std::to_string(trial));
            }
        }
    }
    return c.outcome(std::to_string(checked) + " grid values in [min z, max z], direct sum margin " + fmt(-worst));
}

Outcome border_extrapolation() {
    Check c;
    PipelineConfig config;
    config.input = testing::data_path("universities.csv");
    config.extrapolate_border = true;
    config.border_count = 256;
    config.border_value = 0.0;
    const Dataset ds = load_input(config);
    config.scalar = "academic";
    const auto embedded = compute_embedding(config);
    std::string summary;
    double worst = 0.0;
    for (const auto& name : ds.attribute_names) {
        config.scalar = name;
        const auto f = compute_field(config, embedded.dataset, embedded.embedding);
        const auto col = ds.values.col(static_cast<Eigen::Index>(ds.attribute_index(name)));
        const double range = col.maxCoeff() - col.minCoeff();
        const int w = f.grid.spec.width, h = f.grid.spec.height;
        double edge = 0.0;
        for (int ix = 0; ix < w; ++ix) edge = std::max({edge, std::abs(f.grid.at(ix, 0)), std::abs(f.grid.at(ix, h - 1))});
        for (int iy = 0; iy < h; ++iy) edge = std::max({edge, std::abs(f.grid.at(0, iy)), std::abs(f.grid.at(w - 1, iy))});
        worst = std::max(worst, edge / range);
        c.expect(edge < 0.05 * range, name + " edge/range " + fmt(edge / range));
        if (name == "academic") summary = "academic edge/range " + fmt(edge / range);
    }
    return c.outcome(summary + ", worst over 14 attributes " + fmt(worst));
}

Outcome oracle_equivalence() {
    Check c;
    std::mt19937_64 rng(1007);
    std::uniform_int_distribution<std::size_t> size(2, 20);
    double worst = 0.0;
    auto compare = [&](double got, double expected, const std::string& what) {
        worst = std::max(worst, std::abs(got - expected));
        c.expect(std::abs(got - expected) <= 1e-10, what + " differs by " + fmt(std::abs(got - expected)));
    };
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t k = size(rng);
        const auto pts = oracle::random_points(rng, k);
        std::vector<double> z(k);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& v : z) v = u(rng);
        const SampleSet s(testing::to_points(pts), z);
        const auto pilot = pilot_bandwidth(s);

        const auto expected_density = oracle::pilot_density(pts, pilot.x, pilot.y);
        const auto density = pilot_density(s, pilot);
        for (std::size_t i = 0; i < k; ++i) compare(density[i], expected_density[i], "pilot density");

        const auto bw = adaptive_bandwidths(density, pilot, 0.5);
        double log_g = 0.0, log_prod = 0.0;
        for (double f : expected_density) log_g += std::log(f) / static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double lambda = std::pow(expected_density[i] / std::exp(log_g), -0.5);
            compare(bw.per_sample[i].x, pilot.x * lambda, "bandwidth x");
            compare(bw.per_sample[i].y, pilot.y * lambda, "bandwidth y");
            log_prod += std::log(bw.lambda[i]);
        }
        c.expect(std::abs(std::exp(log_prod) - 1.0) <= 1e-9, "lambda product " + fmt(std::exp(log_prod)));

        std::vector<oracle::Pt> h;
        for (const auto& b : bw.per_sample) h.emplace_back(b.x, b.y);
        for (const auto& q : oracle::random_points(rng, 10, -0.2, 1.2)) {
            compare(evaluate_at(s, bw, {q.first, q.second}), oracle::field(pts, z, h, q), "field");
        }

        const auto d = testing::random_dissimilarities(rng, static_cast<Eigen::Index>(k));
        const auto x = oracle::random_points(rng, k, -1.0, 1.0);
        compare(stress(d, testing::to_coords(x)), oracle::stress(testing::to_rows(d), x), "stress");
    }
    return c.outcome("25 instances, max abs difference " + fmt(worst));
}

Outcome contour_fidelity() {
    Check c;
    double worst = 0.0;
    auto residuals = [&](const ScalarFieldGrid& g, const ContourSet& set, const std::string& name) {
        const double range = g.zmax - g.zmin;
        const auto& b = g.spec.bbox;
        for (const auto& lvl : set.levels) {
            for (const auto& line : lvl.polylines) {
                for (const auto& v : line.vertices) {
                    const double r =
                        std::abs(oracle::bilinear(g.values, g.spec.width, g.spec.height, b.xmin, b.ymin, b.xmax,
                                                  b.ymax, v.x, v.y) -
                                 lvl.level);
                    worst = std::max(worst, r / range);
                    c.expect(r <= 1e-9 * range, name + " residual " + fmt(r / range));
                }
            }
        }
    };

    std::mt19937_64 rng(1008);
    for (int trial = 0; trial < 5; ++trial) {
        auto r = random_samples(rng, 60);
        const auto grid = evaluate_field(r.samples, r.bw, grid_around(r.samples.positions(), 80, 64));
        residuals(grid, extract_contours(grid, topographic_levels(grid, 10)), "random field");
    }
    PipelineConfig config;
    config.input = testing::data_path("auto_mpg.csv");
    config.scalar = "Hpower";
    config.grid_width = config.grid_height = 128;
    const auto e = compute_embedding(config);
    const auto f = compute_field(config, e.dataset, e.embedding);
    residuals(f.grid, compute_contours(config, f.grid), "Hpower field");

    // radial bump: one closed loop per level, matching the flood-fill count
    ScalarFieldGrid bump;
    bump.spec.bbox = {-1, -1, 1, 1};
    bump.spec.width = bump.spec.height = 81;
    for (int iy = 0; iy < 81; ++iy) {
        for (int ix = 0; ix < 81; ++ix) {
            const auto p = bump.spec.node(ix, iy);
            bump.values.push_back(std::exp(-(p.x * p.x + p.y * p.y) / 0.18));
        }
    }
    bump.update_range();
    const auto interp = [&](double x, double y) {
        return oracle::bilinear(bump.values, 81, 81, -1, -1, 1, 1, x, y);
    };
    const auto set = extract_contours(bump, topographic_levels(bump, 7));
    residuals(bump, set, "bump");
    for (const auto& lvl : set.levels) {
        int closed = 0;
        for (const auto& line : lvl.polylines) closed += line.closed ? 1 : 0;
        const int components = oracle::superlevel_components(interp, lvl.level, -1, -1, 1, 1, 4 * 80 + 1);
        c.expect(closed == components && closed == 1,
                 "level " + fmt(lvl.level) + ": " + std::to_string(closed) + " loops vs " +
                     std::to_string(components) + " components");
    }
    return c.outcome("max residual/range " + fmt(worst) + "; bump loops match flood fill on 7 levels");
}

Outcome layout_semantics() {
    Check c;
    std::string margins;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::mt19937_64 rng(5000 + seed);
        auto rows = testing::random_matrix(rng, 30, 5, 0.0, 10.0);
        // rows 0 (A) and 1 (B) share every attribute except Q = column 2
        rows[1] = rows[0];
        rows[0][2] = 12.0;
        rows[1][2] = -2.0;
        const auto nds = normalize_minmax(testing::make_dataset({"p", "r", "Q", "s", "t"}, rows));
        MdsParams params;
        params.init = InitMode::Random;
        params.seed = seed;
        const auto result = run_mds(build_composite(nds).values, params);
        const Eigen::RowVector2d q = result.coords.row(30 + 2);
        const double da = (result.coords.row(0) - q).norm();
        const double db = (result.coords.row(1) - q).norm();
        c.expect(da < db, "seed " + std::to_string(seed) + ": |A-Q| " + fmt(da) + " vs |B-Q| " + fmt(db));
        if (seed <= 3) margins += (margins.empty() ? "" : ", ") + fmt(db - da);
    }
    return c.outcome("A closer to Q than B for 10 seeds (margins " + margins + ", ...)");
}

Outcome pipeline_determinism() {
    Check c;
    const auto root = fs::temp_directory_path() / "scalarmap_acceptance";
    fs::remove_all(root);
    PipelineConfig config;
    config.input = testing::data_path("auto_mpg.csv");
    config.scalar = "Hpower";
    config.grid_width = config.grid_height = 256;
    config.png = png_backend_available();

    std::vector<fs::path> dirs;
    double slowest = 0.0;
    for (unsigned workers : {1u, 1u, 4u}) {
        config.workers = workers;
        config.out_dir = (root / ("run" + std::to_string(dirs.size()))).string();
        const auto start = Clock::now();
        cmd_pipeline(config);
        const double elapsed = seconds_since(start);
        slowest = std::max(slowest, elapsed);
        c.expect(elapsed < 30.0, "run with " + std::to_string(workers) + " workers took " + fmt(elapsed) + " s");
        dirs.emplace_back(config.out_dir);
    }
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
        ++files;
        const auto reference = read_file(entry.path().string());
        for (std::size_t i = 1; i < dirs.size(); ++i) {
            const auto other = dirs[i] / entry.path().filename();
            c.expect(fs::exists(other) && read_file(other.string()) == reference,
                     entry.path().filename().string() + " differs in run " + std::to_string(i));
        }
    }
    const auto manifest = read_file((dirs[0] / "manifest.json").string());
    c.expect(manifest.find("\"rows\": 392") != std::string::npos, "manifest row count");
    fs::remove_all(root);
    return c.outcome(std::to_string(files) + " files identical over 3 runs (1, 1, 4 workers), slowest " + fmt(slowest) +
                     " s");
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"smacof monotonicity", smacof_monotonicity},
        {"planar recovery", planar_recovery},
        {"interpolation exactness", interpolation_exactness},
        {"smoothness", smoothness},
        {"range bound", range_bound},
        {"border extrapolation", border_extrapolation},
        {"oracle equivalence", oracle_equivalence},
        {"contour fidelity", contour_fidelity},
        {"layout semantics", layout_semantics},
        {"pipeline determinism and scale", pipeline_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail
                  << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
