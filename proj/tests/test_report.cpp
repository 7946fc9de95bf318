#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "bidisc/report.hpp"
#include "fixtures.hpp"

using namespace bidisc;

TEST_CASE("point spec parsing") {
    const auto corner = parse_point_spec("corner:0,0");
    REQUIRE(std::holds_alternative<SilovCorner>(corner));
    CHECK(std::get<SilovCorner>(corner).tau1.theta == doctest::Approx(0.0));

    const auto vflat = parse_point_spec("vflat:0,0.0,0.5");
    REQUIRE(std::holds_alternative<VerticalFlat>(vflat));
    CHECK(std::get<VerticalFlat>(vflat).tau1.theta == doctest::Approx(0.0));
    CHECK(std::get<VerticalFlat>(vflat).y.z == Cx{0.0, 0.5});

    const auto wrapped = parse_point_spec("corner:0,7");
    CHECK(std::get<SilovCorner>(wrapped).tau2.theta == doctest::Approx(7.0 - 2.0 * M_PI));

    const auto hflat = parse_point_spec("hflat:0.25,-0.25,1.5");
    REQUIRE(std::holds_alternative<HorizontalFlat>(hflat));
    CHECK(std::get<HorizontalFlat>(hflat).tau2.theta == doctest::Approx(1.5));

    CHECK_THROWS_AS(parse_point_spec("vflat:0,2.0,0"), RangeError);
    CHECK_THROWS_AS(parse_point_spec("corner:0"), ParseError);
    CHECK_THROWS_AS(parse_point_spec("blob:0,0"), ParseError);
    CHECK_THROWS_AS(parse_point_spec("corner:a,b"), ParseError);
}

TEST_CASE("map files load from DSL strings and expression trees alike") {
    const BidiscMap dsl = load_map_file(fixtures::fixture_path("contraction.json"));
    const BidiscMap tree = load_map_file(fixtures::fixture_path("tree_form.json"));
    for (double t = -0.8; t <= 0.8; t += 0.4) {
        const Cx x{t, 0.1}, y{-0.2, t * 0.5};
        CHECK(std::abs(dsl.f1.eval(x, y) - tree.f1.eval(x, y)) < 1e-15);
        CHECK(std::abs(dsl.f2.eval(x, y) - tree.f2.eval(x, y)) < 1e-15);
    }
}

TEST_CASE("report pipeline: fixture with the corner Wolff point exits cleanly") {
    PipelineConfig cfg;
    cfg.map_path = fixtures::fixture_path("example_ii.json");
    cfg.command = PipelineConfig::Command::Report;
    const auto result = run(cfg);
    CHECK(result.exit_code == 0);
    CHECK(result.document.at("prediction").at("kind") == "silov_point");
    CHECK(result.document.at("discrepancies").at("items").empty());
    CHECK(result.document.at("audit").at("verdict") == "pass");
}

TEST_CASE("verify command: refutation is a valid outcome, not an error") {
    PipelineConfig cfg;
    cfg.map_path = fixtures::fixture_path("example_i.json");
    cfg.command = PipelineConfig::Command::Verify;
    cfg.point_spec = "corner:0,0";
    const auto result = run(cfg);
    CHECK(result.exit_code == 0);
    const auto& verdicts = result.document.at("verification");
    REQUIRE(verdicts.size() == 1);
    CHECK(verdicts[0].at("outcome") == "violated");
    CHECK(verdicts[0].contains("witness"));
}

TEST_CASE("classify command rejects non-self-maps with exit 2") {
    PipelineConfig cfg;
    cfg.map_path = "/tmp/bidisc_bad_map.json";
    {
        std::ofstream out(cfg.map_path);
        out << R"({"f1": "2*x", "f2": "y"})";
    }
    cfg.command = PipelineConfig::Command::Classify;
    const auto result = run(cfg);
    CHECK(result.exit_code == 2);
    CHECK(result.document.at("audit").at("verdict") == "fail");
}

TEST_CASE("missing or malformed inputs exit 2") {
    PipelineConfig cfg;
    cfg.map_path = "/nonexistent/nowhere.json";
    cfg.command = PipelineConfig::Command::Classify;
    CHECK(run(cfg).exit_code == 2);

    cfg.map_path = "/tmp/bidisc_malformed.json";
    {
        std::ofstream out(cfg.map_path);
        out << R"({"f1": "x +", "f2": "y"})";
    }
    CHECK(run(cfg).exit_code == 2);
}

TEST_CASE("documented discrepancies drive exit 1") {
    PipelineConfig cfg;
    cfg.map_path = fixtures::fixture_path("shifted_projection.json");
    cfg.command = PipelineConfig::Command::Report;
    const auto result = run(cfg);
    CHECK(result.exit_code == 1);
    const auto& items = result.document.at("discrepancies").at("items");
    REQUIRE_FALSE(items.empty());
    for (const auto& item : items) CHECK(item.at("documented") == true);
}

TEST_CASE("rotating automorphism pair: empty prediction, indeterminate target set") {
    // orbits of (ix, iy) are periodic, so the target-set stage cannot
    // stabilize and the report exits 3; classify/predict alone succeed
    PipelineConfig cfg;
    cfg.map_path = "/tmp/bidisc_elliptic.json";
    {
        std::ofstream out(cfg.map_path);
        out << R"({"f1": "i*x", "f2": "i*y"})";
    }
    cfg.command = PipelineConfig::Command::Predict;
    const auto predicted = run(cfg);
    CHECK(predicted.exit_code == 0);
    CHECK(predicted.document.at("classification").at("kind") == "interior_fixed");
    CHECK(predicted.document.at("classification").at("dim") == 0);
    CHECK(predicted.document.at("prediction").at("kind") == "empty");

    cfg.command = PipelineConfig::Command::Report;
    const auto full = run(cfg);
    CHECK(full.exit_code == 3);
    CHECK(full.document.contains("error"));
}

TEST_CASE("reports are byte-identical across runs with the same seed") {
    PipelineConfig cfg;
    cfg.map_path = fixtures::fixture_path("example_iii.json");
    cfg.command = PipelineConfig::Command::Report;
    cfg.seed = 2024;
    const auto a = run(cfg);
    const auto b = run(cfg);
    CHECK(a.document.dump() == b.document.dump());
    CHECK(a.exit_code == b.exit_code);
}

TEST_CASE("report JSON round-trips losslessly") {
    PipelineConfig cfg;
    cfg.map_path = fixtures::fixture_path("example_iv.json");
    cfg.command = PipelineConfig::Command::Report;
    const auto result = run(cfg);
    const std::string once = result.document.dump(2);
    const Json reparsed = Json::parse(once);
    CHECK(reparsed.dump(2) == once);
}

TEST_CASE("orbit export") {
    PipelineConfig cfg;
    cfg.map_path = fixtures::fixture_path("contraction.json");
    cfg.command = PipelineConfig::Command::Orbit;
    cfg.samples = 4;
    cfg.format = PipelineConfig::Format::Csv;
    const auto result = run(cfg);
    CHECK(result.exit_code == 0);
    REQUIRE(result.is_csv);
    std::istringstream lines(result.csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "step,re1,im1,re2,im2");
    std::size_t rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 5);

    cfg.format = PipelineConfig::Format::Json;
    const auto as_json = run(cfg);
    CHECK_FALSE(as_json.is_csv);
    CHECK(as_json.document.at("orbit").size() == 5);

    // csv is orbit-only
    cfg.command = PipelineConfig::Command::Classify;
    cfg.format = PipelineConfig::Format::Csv;
    CHECK(run(cfg).exit_code == 2);
}

TEST_CASE("verify command requires a point spec") {
    PipelineConfig cfg;
    cfg.map_path = fixtures::fixture_path("example_i.json");
    cfg.command = PipelineConfig::Command::Verify;
    CHECK(run(cfg).exit_code == 2);
}

TEST_CASE("predict command stops after the prediction") {
    PipelineConfig cfg;
    cfg.map_path = fixtures::fixture_path("example_v.json");
    cfg.command = PipelineConfig::Command::Predict;
    const auto result = run(cfg);
    CHECK(result.exit_code == 0);
    CHECK(result.document.contains("prediction"));
    CHECK_FALSE(result.document.contains("verification"));
    CHECK_FALSE(result.document.contains("target_set"));
}

TEST_CASE("tolerance overrides are echoed into the report") {
    PipelineConfig cfg;
    cfg.map_path = fixtures::fixture_path("example_v.json");
    cfg.command = PipelineConfig::Command::Predict;
    cfg.tol_overrides["angle_tol"] = 1e-5;
    const auto result = run(cfg);
    CHECK(result.document.at("tol_overrides").at("angle_tol") == doctest::Approx(1e-5));
}
