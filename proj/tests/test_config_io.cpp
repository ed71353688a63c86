#include <doctest.h>

#include "mobius_geofence/config_io.hpp"
#include "mobius_geofence/verify_suite.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

using namespace mgf;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kPresets = fs::path(MGF_SOURCE_DIR) / "presets";

json minimal() {
    return json::parse(R"({
        "schema_version": 1,
        "scene": {"inner": {"cx": 0, "cy": 0, "r": 1}, "outer": {"cx": 0.5, "cy": 0, "r": 1.6}},
        "initial": {"x": -0.9, "y": -0.6653, "theta_deg": -60}
    })");
}

ErrorCode parse_code(const json& j) {
    try {
        parse_config(j);
    } catch (const GeofenceError& e) {
        return e.code();
    }
    return ErrorCode::NearPole;  // sentinel: parsing succeeded
}

}  // namespace

TEST_CASE("bundled presets parse") {
    for (const char* name : {"example1_smaller", "example1_larger", "example2_smaller", "example2_larger", "khepera"}) {
        CAPTURE(name);
        const SimConfig c = load_config(kPresets / (std::string(name) + ".json"));
        CHECK(c.name == name);
    }
    const SimConfig s = load_config(kPresets / "example1_smaller.json");
    const SimConfig ref = reference_config(RootKind::Smaller);
    CHECK(s.root_kind == RootKind::Smaller);
    CHECK(s.r0 == ref.r0);
    CHECK(s.theta0 == doctest::Approx(ref.theta0));
    CHECK(s.scene.outer_radius == doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));
    CHECK(s.gains.kappa == 0.02);
    CHECK(s.dt == 1e-3);
    CHECK(s.t_final == 100.0);
    CHECK(load_config(kPresets / "example1_larger.json").root_kind == RootKind::Larger);
    CHECK_FALSE(load_config(kPresets / "example2_smaller.json").desired_is_inner);
    CHECK(load_config(kPresets / "khepera.json").gains.v == 0.5);
}

TEST_CASE("defaults fill optional sections") {
    const SimConfig c = parse_config(minimal());
    CHECK(c.root_kind == RootKind::Smaller);
    CHECK(c.desired_is_inner);
    CHECK(c.gains.kappa == 0.02);
    CHECK(c.gains.v == 1.0);
    CHECK(c.wheel_base == 0.1054);
    CHECK(c.record_stride == 1);
}

TEST_CASE("malformed configs are BadInput") {
    json j = minimal();
    j["schema_version"] = 2;
    CHECK(parse_code(j) == ErrorCode::BadInput);

    j = minimal();
    j.erase("schema_version");
    CHECK(parse_code(j) == ErrorCode::BadInput);

    j = minimal();
    j["scnee"] = 1;
    CHECK(parse_code(j) == ErrorCode::BadInput);

    j = minimal();
    j["root"] = "medium";
    CHECK(parse_code(j) == ErrorCode::BadInput);

    j = minimal();
    j["initial"]["theta"] = 0.1;  // both angle spellings
    CHECK(parse_code(j) == ErrorCode::BadInput);

    j = minimal();
    j["scene"]["inner"]["r"] = "one";
    CHECK(parse_code(j) == ErrorCode::BadInput);

    j = minimal();
    j["integration"] = {{"dt", 0.5}};
    CHECK(parse_code(j) == ErrorCode::BadInput);

    j = minimal();
    j["scene"]["desired"] = "middle";
    CHECK(parse_code(j) == ErrorCode::BadInput);

    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), GeofenceError);
}

TEST_CASE("config JSON round trip") {
    const SimConfig a = load_config(kPresets / "khepera.json");
    const SimConfig b = parse_config(config_to_json(a));
    CHECK(config_to_json(a) == config_to_json(b));
    CHECK(b.theta0 == a.theta0);
    CHECK(b.wheel_limit == a.wheel_limit);
}

TEST_CASE("numbers use 12 significant digits") {
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(-1.5e-9) == "-1.5e-09");
}

TEST_CASE("trajectory CSV layout and read-back") {
    SimConfig c = reference_config(RootKind::Smaller);
    c.t_final = 0.5;
    c.record_stride = 100;
    const TrajectoryRecord rec = run(c);

    std::ostringstream os;
    write_csv(os, rec);
    const std::string text = os.str();
    CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);

    const fs::path dir = fs::temp_directory_path() / "mgf_csv_test";
    fs::create_directories(dir);
    write_csv_file(dir / "t.csv", rec);
    const CsvTable t = read_csv(dir / "t.csv");
    CHECK(t.columns.size() == 14);
    REQUIRE(t.rows() == rec.samples.size());
    for (std::size_t i = 0; i < t.rows(); ++i) {
        CHECK(t.column("x")[i] == doctest::Approx(rec.samples[i].x).epsilon(1e-11));
        CHECK(t.column("contained")[i] == 1.0);
    }
    CHECK_THROWS_AS(t.column("nope"), GeofenceError);
    fs::remove_all(dir);
}

TEST_CASE("summary JSON carries the bounds report") {
    SimConfig c = reference_config(RootKind::Larger);
    c.t_final = 1.0;
    const TrajectoryRecord rec = run(c);
    const json j = summary_json(c, rec);
    for (const char* key : {"S0", "Theta", "nu_plus", "nu_minus", "E_bound", "rho_interval", "Omega_bound",
                            "omega_bound", "r_circle"}) {
        CHECK(j["bounds"].contains(key));
    }
    for (const char* key : {"converged", "final_e_abs", "max_E_abs", "min_barrier_margin", "max_blf_increase",
                            "steady_omega"}) {
        CHECK(j["summary"].contains(key));
    }
    CHECK(j["map"]["alpha"].get<double>() == doctest::Approx(2.0));
    CHECK(j["config"]["schema_version"] == kSchemaVersion);
}

TEST_CASE("sweep grid expansion") {
    const SimConfig base = load_config(kPresets / "example1_smaller.json");
    const auto points = expand_grid(base, read_json_file(kPresets / "sweep_grid.json"));
    CHECK(points.size() == 12);
    CHECK(points.front().config.gains.kappa == 0.005);
    CHECK(points.back().config.gains.kappa == 0.08);
    CHECK(points.back().config.dt == 0.0005);
    CHECK(points[1].label == "point_1");

    const auto single = expand_grid(base, json::object());
    CHECK(single.size() == 1);
    CHECK_THROWS_AS(expand_grid(base, json{{"kappa", json::array()}}), GeofenceError);
    CHECK_THROWS_AS(expand_grid(base, json{{"gain", {1}}}), GeofenceError);
    CHECK_THROWS_AS(expand_grid(base, json{{"r0", {{1.0}}}}), GeofenceError);
}
