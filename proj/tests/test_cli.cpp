#include <doctest.h>

#include <filesystem>
#include <json.hpp>

#include "cli.hpp"
#include "scalarmap/io.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "scalarmap");
    std::ostringstream out, err;
    Run r;
    r.code = scalarmap::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("scalarmap_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

std::vector<std::string> cars(const fs::path& out, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"--input", testing::data_path("auto_mpg.csv"), "--scalar", "Hpower", "--grid",
                                  "48x48", "--out-dir", out.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

std::vector<std::string> with_command(const std::string& command, std::vector<std::string> args) {
    args.insert(args.begin(), command);
    return args;
}

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("embed writes a 399-row embedding") {
    const auto dir = scratch("embed");
    const auto r = run_cli(with_command("embed", cars(dir, {"--dump-composite"})));
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto csv = scalarmap::read_file((dir / "embedding.csv").string());
    CHECK(line_count(csv) == 400);
    CHECK(csv.rfind("label,kind,x,y\n", 0) == 0);
    CHECK(csv.find("\nMPG,attribute,") != std::string::npos);
    CHECK(fs::exists(dir / "stress.csv"));
    CHECK(line_count(scalarmap::read_file((dir / "composite.csv").string())) == 400);

    const auto again = scratch("embed_again");
    REQUIRE(run_cli(with_command("embed", cars(again))).code == 0);
    CHECK(scalarmap::read_file((again / "embedding.csv").string()) == csv);
    CHECK(scalarmap::read_file((again / "stress.csv").string()) ==
          scalarmap::read_file((dir / "stress.csv").string()));
}

TEST_CASE("config errors exit 2") {
    const auto dir = scratch("config");
    SUBCASE("unknown attribute lists the valid names") {
        auto args = cars(dir);
        args[3] = "Torque";
        const auto r = run_cli(with_command("embed", args));
        CHECK(r.code == 2);
        for (const char* name : {"MPG", "CYL", "Hpower", "weight", "Accel", "year", "origin"}) {
            CHECK_MESSAGE(r.err.find(name) != std::string::npos, name);
        }
    }
    SUBCASE("bad flags and values") {
        CHECK(run_cli({"pipeline", "--no-such-flag"}).code == 2);
        CHECK(run_cli({}).code == 2);
        CHECK(run_cli(with_command("pipeline", cars(dir, {"--grid", "8x8"}))).code == 2);
        CHECK(run_cli(with_command("pipeline", cars(dir, {"--grid", "wide"}))).code == 2);
        CHECK(run_cli(with_command("pipeline", cars(dir, {"--colormap", "jet"}))).code == 2);
        CHECK(run_cli(with_command("pipeline", cars(dir, {"--weights", "0,0,0"}))).code == 2);
        CHECK(run_cli(with_command("pipeline", cars(dir, {"--init", "spectral"}))).code == 2);
        CHECK(run_cli(with_command("pipeline", cars(dir, {"--filter", "Hpower=3"}))).code == 2);
        CHECK(run_cli({"embed", "--input", (dir / "missing.csv").string(), "--scalar", "x"}).code == 2);
    }
    SUBCASE("help") {
        const auto r = run_cli({"--help"});
        CHECK(r.code == 0);
        CHECK(r.out.find("pipeline") != std::string::npos);
    }
}

TEST_CASE("data errors exit 3") {
    const auto dir = scratch("data");
    fs::create_directories(dir);
    const auto bad = dir / "bad.csv";
    scalarmap::write_file(bad.string(), "name,a,b\nx,1,2\ny,,3\n");
    CHECK(run_cli({"embed", "--input", bad.string(), "--scalar", "a", "--out-dir", dir.string()}).code == 3);
    // stage commands need their inputs
    CHECK(run_cli(with_command("contour", cars(dir))).code == 3);
}

TEST_CASE("truncated field dump") {
    const auto dir = scratch("truncated");
    REQUIRE(run_cli(with_command("embed", cars(dir))).code == 0);
    REQUIRE(run_cli(with_command("field", cars(dir))).code == 0);
    const auto path = (dir / "field.bin").string();
    const auto bytes = scalarmap::read_file(path);
    scalarmap::write_file(path, bytes.substr(0, 1000));
    const auto r = run_cli(with_command("contour", cars(dir)));
    CHECK(r.code == 3);
    CHECK(r.err.find("offset 1000") != std::string::npos);
}

TEST_CASE("stages compose to the pipeline") {
    const auto whole = scratch("whole");
    const auto staged = scratch("staged");
    const std::vector<std::string> extra{"--filter", "Hpower>200", "--png", "--levels", "6"};
    REQUIRE(run_cli(with_command("pipeline", cars(whole, extra))).code == 0);
    for (const char* stage : {"embed", "field", "contour", "render"}) {
        const auto r = run_cli(with_command(stage, cars(staged, extra)));
        REQUIRE_MESSAGE(r.code == 0, stage, " ", r.err);
    }
    for (const char* name :
         {"embedding.csv", "stress.csv", "field.csv", "field.bin", "contours.json", "figure.svg", "figure.png"}) {
        CHECK_MESSAGE(scalarmap::read_file((whole / name).string()) == scalarmap::read_file((staged / name).string()),
                      name);
    }
    const auto manifest = nlohmann::json::parse(scalarmap::read_file((whole / "manifest.json").string()));
    CHECK(manifest["rows"] == 392);
    CHECK(manifest["contour_levels"].size() == 6);
    CHECK(manifest["highlighted"].get<int>() > 0);
    CHECK_FALSE(manifest.contains("timings"));
}

TEST_CASE("pipeline determinism across runs and threads") {
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    REQUIRE(run_cli(with_command("pipeline", cars(a, {"--threads", "1"}))).code == 0);
    REQUIRE(run_cli(with_command("pipeline", cars(b, {"--threads", "3"}))).code == 0);
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto name = entry.path().filename();
        CHECK_MESSAGE(scalarmap::read_file(entry.path().string()) == scalarmap::read_file((b / name).string()),
                      name.string());
    }
}

TEST_CASE("filter highlights the selected universities") {
    const auto dir = scratch("unis");
    const auto r = run_cli({"pipeline", "--input", testing::data_path("universities.csv"), "--scalar", "academic",
                            "--extrapolate-border", "--grid", "64x64", "--filter",
                            "academic>9,athletic>9,tuition<18000", "--out-dir", dir.string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto svg = scalarmap::read_file((dir / "figure.svg").string());
    const auto group = svg.find("id=\"highlights\"");
    REQUIRE(group != std::string::npos);
    const auto section = svg.substr(group);
    for (const char* name : {"Clearwater State University", "Maple College", "Summit College"}) {
        CHECK_MESSAGE(section.find(name) != std::string::npos, name);
    }
    CHECK(section.find("academic = ") != std::string::npos);
    const auto manifest = nlohmann::json::parse(scalarmap::read_file((dir / "manifest.json").string()));
    CHECK(manifest["highlighted"] == 3);

    const auto grid = scalarmap::field_from_binary(scalarmap::read_file((dir / "field.bin").string()));
    const auto ds = scalarmap::load_csv_file(testing::data_path("universities.csv"));
    const auto col = ds.values.col(static_cast<Eigen::Index>(ds.attribute_index("academic")));
    const double range = col.maxCoeff() - col.minCoeff();
    double edge = 0.0;
    for (int i = 0; i < 64; ++i) {
        edge = std::max({edge, std::abs(grid.at(i, 0)), std::abs(grid.at(i, 63)), std::abs(grid.at(0, i)),
                         std::abs(grid.at(63, i))});
    }
    CHECK(edge < 0.05 * range);
}

TEST_CASE("TOML config file") {
    const auto dir = scratch("toml");
    fs::create_directories(dir);
    const auto cfg = dir / "run.toml";
    scalarmap::write_file(cfg.string(), "input = \"" + testing::data_path("auto_mpg.csv") +
                                            "\"\nscalar = \"MPG\"\ngrid = \"32x32\"\nlevels = 3\nout-dir = \"" +
                                            (dir / "out").string() + "\"\n");
    const auto r = run_cli({"pipeline", "--config", cfg.string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto manifest = nlohmann::json::parse(scalarmap::read_file((dir / "out" / "manifest.json").string()));
    CHECK(manifest["config"]["scalar"] == "MPG");
    CHECK(manifest["contour_levels"].size() == 3);
    // flags override the file
    REQUIRE(run_cli({"pipeline", "--config", cfg.string(), "--levels", "2"}).code == 0);
    const auto second = nlohmann::json::parse(scalarmap::read_file((dir / "out" / "manifest.json").string()));
    CHECK(second["contour_levels"].size() == 2);
}
