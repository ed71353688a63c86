#include "mobius_geofence/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace mgf {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw GeofenceError(ErrorCode::BadInput, what); }

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) bad("unknown key '" + it.key() + "' in " + where);
    }
}

const json& require_object(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) bad(std::string("missing '") + key + "' in " + where);
    const json& v = j.at(key);
    if (!v.is_object()) bad(std::string("'") + key + "' must be an object");
    return v;
}

double number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) bad(std::string("missing '") + key + "' in " + where);
    const json& v = j.at(key);
    if (!v.is_number()) bad(where + "." + key + " must be a number");
    return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
    return j.contains(key) ? number(j, key, where) : fallback;
}

bool bool_or(const json& j, const char* key, bool fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) bad(where + "." + key + " must be a boolean");
    return j.at(key).get<bool>();
}

RootKind parse_root(const json& j) {
    if (!j.is_string()) bad("root must be \"smaller\" or \"larger\"");
    const auto s = j.get<std::string>();
    if (s == "smaller") return RootKind::Smaller;
    if (s == "larger") return RootKind::Larger;
    bad("root must be \"smaller\" or \"larger\", got '" + s + "'");
}

void parse_circle(const json& j, Complex& center, double& radius, const std::string& where) {
    if (!j.is_object()) bad(where + " must be an object");
    reject_unknown(j, {"cx", "cy", "r"}, where);
    center = Complex{number(j, "cx", where), number(j, "cy", where)};
    radius = number(j, "r", where);
}

json circle_json(Complex c, double r) { return json{{"cx", c.real()}, {"cy", c.imag()}, {"r", r}}; }

}  // namespace

SimConfig parse_config(const json& j) {
    try {
        if (!j.is_object()) bad("config must be a JSON object");
        reject_unknown(j,
                       {"schema_version", "name", "scene", "root", "initial", "gains", "integration", "monitors",
                        "seed", "robot"},
                       "config");
        if (!j.contains("schema_version")) bad("missing schema_version");
        if (!j.at("schema_version").is_number_integer() || j.at("schema_version").get<int>() != kSchemaVersion) {
            bad("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
        }

        SimConfig c;
        if (j.contains("name")) {
            if (!j.at("name").is_string()) bad("name must be a string");
            c.name = j.at("name").get<std::string>();
        }

        const json& scene = require_object(j, "scene", "config");
        reject_unknown(scene, {"inner", "outer", "desired"}, "scene");
        if (!scene.contains("inner") || !scene.contains("outer")) bad("scene needs inner and outer circles");
        parse_circle(scene.at("inner"), c.scene.inner_center, c.scene.inner_radius, "scene.inner");
        parse_circle(scene.at("outer"), c.scene.outer_center, c.scene.outer_radius, "scene.outer");
        if (scene.contains("desired")) {
            const json& d = scene.at("desired");
            if (!d.is_string() || (d != "inner" && d != "outer")) bad("scene.desired must be \"inner\" or \"outer\"");
            c.desired_is_inner = d == "inner";
        }

        if (j.contains("root")) c.root_kind = parse_root(j.at("root"));

        const json& init = require_object(j, "initial", "config");
        reject_unknown(init, {"x", "y", "theta_deg", "theta"}, "initial");
        c.r0 = Complex{number(init, "x", "initial"), number(init, "y", "initial")};
        if (init.contains("theta_deg") == init.contains("theta")) {
            bad("initial needs exactly one of theta_deg or theta (radians)");
        }
        c.theta0 = init.contains("theta_deg") ? deg2rad(number(init, "theta_deg", "initial"))
                                              : number(init, "theta", "initial");

        if (j.contains("gains")) {
            const json& g = require_object(j, "gains", "config");
            reject_unknown(g, {"kappa", "v"}, "gains");
            c.gains.kappa = number_or(g, "kappa", c.gains.kappa, "gains");
            c.gains.v = number_or(g, "v", c.gains.v, "gains");
        }
        if (j.contains("integration")) {
            const json& in = require_object(j, "integration", "config");
            reject_unknown(in, {"dt", "t_final", "stagewise", "record_stride"}, "integration");
            c.dt = number_or(in, "dt", c.dt, "integration");
            c.t_final = number_or(in, "t_final", c.t_final, "integration");
            c.stagewise = bool_or(in, "stagewise", c.stagewise, "integration");
            if (in.contains("record_stride")) {
                if (!in.at("record_stride").is_number_integer()) bad("integration.record_stride must be an integer");
                c.record_stride = in.at("record_stride").get<int>();
            }
        }
        if (j.contains("monitors")) {
            const json& m = require_object(j, "monitors", "config");
            reject_unknown(m, {"containment", "blf", "bounds", "transformed_region"}, "monitors");
            c.monitors.containment = bool_or(m, "containment", true, "monitors");
            c.monitors.blf = bool_or(m, "blf", true, "monitors");
            c.monitors.bounds = bool_or(m, "bounds", true, "monitors");
            c.monitors.transformed_region = bool_or(m, "transformed_region", true, "monitors");
        }
        if (j.contains("seed")) {
            if (!j.at("seed").is_number_unsigned()) bad("seed must be a non-negative integer");
            c.seed = j.at("seed").get<std::uint64_t>();
        }
        if (j.contains("robot")) {
            const json& r = require_object(j, "robot", "config");
            reject_unknown(r, {"wheel_base", "wheel_limit"}, "robot");
            c.wheel_base = number_or(r, "wheel_base", c.wheel_base, "robot");
            c.wheel_limit = number_or(r, "wheel_limit", c.wheel_limit, "robot");
        }
        c.validate();
        return c;
    } catch (const json::exception& e) {
        bad(std::string("config: ") + e.what());
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        bad(path.string() + ": " + e.what());
    }
}

SimConfig load_config(const std::filesystem::path& path) { return parse_config(read_json_file(path)); }

json config_to_json(const SimConfig& c) {
    json j;
    j["schema_version"] = kSchemaVersion;
    if (!c.name.empty()) j["name"] = c.name;
    j["scene"] = {{"inner", circle_json(c.scene.inner_center, c.scene.inner_radius)},
                  {"outer", circle_json(c.scene.outer_center, c.scene.outer_radius)},
                  {"desired", c.desired_is_inner ? "inner" : "outer"}};
    j["root"] = std::string(to_string(c.root_kind));
    j["initial"] = {{"x", c.r0.real()}, {"y", c.r0.imag()}, {"theta", c.theta0}};
    j["gains"] = {{"kappa", c.gains.kappa}, {"v", c.gains.v}};
    j["integration"] = {
        {"dt", c.dt}, {"t_final", c.t_final}, {"stagewise", c.stagewise}, {"record_stride", c.record_stride}};
    j["monitors"] = {{"containment", c.monitors.containment},
                     {"blf", c.monitors.blf},
                     {"bounds", c.monitors.bounds},
                     {"transformed_region", c.monitors.transformed_region}};
    j["seed"] = c.seed;
    j["robot"] = {{"wheel_base", c.wheel_base}, {"wheel_limit", c.wheel_limit}};
    return j;
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_csv(std::ostream& os, const TrajectoryRecord& rec) {
    os << kCsvHeader << '\n';
    for (const Sample& s : rec.samples) {
        const double vals[] = {s.t, s.x, s.y, s.theta, s.rho_x, s.rho_y, s.gamma, s.e_abs, s.E_abs, s.S, s.omega, s.Omega};
        for (double v : vals) os << format_number(v) << ',';
        os << (s.contained ? 1 : 0) << ',' << (s.in_bounds ? 1 : 0) << '\n';
    }
}

void write_csv_file(const std::filesystem::path& path, const TrajectoryRecord& rec) {
    std::ofstream out(path, std::ios::binary);
    if (!out) bad("cannot write " + path.string());
    write_csv(out, rec);
}

json bounds_to_json(const BoundsReport& b) {
    return json{{"S0", b.S0},
                {"Theta", b.Theta},
                {"nu_plus", b.nu_plus},
                {"nu_minus", b.nu_minus},
                {"E_bound", b.E_bound},
                {"rho_interval", {b.rho_interval.low, b.rho_interval.high}},
                {"Omega_bound", b.Omega_bound},
                {"omega_bound", b.omega_bound},
                {"r_circle",
                 {{"cx", b.r_circle.center.real()},
                  {"cy", b.r_circle.center.imag()},
                  {"radius", b.r_circle.radius},
                  {"inside", b.r_circle.inside}}}};
}

json feasibility_to_json(const FeasibilityReport& f) {
    return json{{"eta_a", f.eta_a}, {"eta_b", f.eta_b}, {"eta", f.eta},         {"lhs", f.lhs},
                {"rhs", f.rhs},     {"feasible", f.feasible}, {"E0_abs", f.E0_abs}};
}

json summary_json(const SimConfig& config, const TrajectoryRecord& rec) {
    const Summary& s = rec.summary;
    json j;
    j["config"] = config_to_json(config);
    j["map"] = {{"alpha", rec.map.alpha},
                {"beta", rec.map.beta},
                {"kind", std::string(to_string(rec.map.kind))},
                {"sigma", rec.map.sigma},
                {"delta_T", rec.map.delta_T},
                {"radius_desired_image", rec.map.radius_fC},
                {"radius_boundary_image", rec.map.radius_fCp},
                {"lambda", rec.map.scene.lambda},
                {"mu", rec.map.scene.mu},
                {"scene_case", std::string(to_string(rec.map.scene.scene_case))}};
    j["feasibility"] = feasibility_to_json(rec.feasibility);
    j["bounds"] = bounds_to_json(rec.bounds);
    j["summary"] = {{"converged", s.converged},
                    {"converge_time", s.converge_time},
                    {"final_e_abs", s.final_e_abs},
                    {"final_r_abs", s.final_r_abs},
                    {"max_E_abs", s.max_E_abs},
                    {"min_barrier_margin", s.min_barrier_margin},
                    {"max_blf_increase", s.max_blf_increase},
                    {"steady_omega", s.steady_omega},
                    {"steps", s.steps},
                    {"samples", rec.samples.size()},
                    {"containment_violations", s.containment_violations},
                    {"region_violations", s.region_violations},
                    {"bound_violations", s.bound_violations},
                    {"blf_violations", s.blf_violations},
                    {"saturated_steps", s.saturated_steps},
                    {"aborted", s.aborted},
                    {"abort_reason", s.abort_reason}};
    return j;
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return data[i];
    }
    bad("CSV has no column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) bad(path.string() + " is empty");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
    }
    table.data.resize(table.columns.size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++row;
        std::stringstream ss(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            if (col >= table.columns.size()) bad(path.string() + ": too many fields on row " + std::to_string(row));
            try {
                table.data[col].push_back(std::stod(cell));
            } catch (const std::exception&) {
                bad(path.string() + ": bad number '" + cell + "' on row " + std::to_string(row));
            }
            ++col;
        }
        if (col != table.columns.size()) bad(path.string() + ": short row " + std::to_string(row));
    }
    return table;
}

std::vector<SweepPoint> expand_grid(const SimConfig& base, const json& grid) {
    if (!grid.is_object()) bad("grid must be a JSON object");
    reject_unknown(grid, {"schema_version", "kappa", "theta0_deg", "r0", "dt", "root"}, "grid");
    if (grid.contains("schema_version") && grid.at("schema_version") != kSchemaVersion) {
        bad("unsupported grid schema_version");
    }

    auto list = [&](const char* key) -> std::vector<json> {
        if (!grid.contains(key)) return {json()};
        const json& v = grid.at(key);
        if (!v.is_array() || v.empty()) bad(std::string("grid.") + key + " must be a non-empty array");
        return std::vector<json>(v.begin(), v.end());
    };

    std::vector<SweepPoint> points;
    try {
        for (const json& kappa : list("kappa"))
            for (const json& th : list("theta0_deg"))
                for (const json& r0 : list("r0"))
                    for (const json& dt : list("dt"))
                        for (const json& root : list("root")) {
                            SweepPoint p;
                            p.config = base;
                            if (!kappa.is_null()) {
                                p.config.gains.kappa = kappa.get<double>();
                                p.params["kappa"] = kappa;
                            }
                            if (!th.is_null()) {
                                p.config.theta0 = deg2rad(th.get<double>());
                                p.params["theta0_deg"] = th;
                            }
                            if (!r0.is_null()) {
                                if (!r0.is_array() || r0.size() != 2) bad("grid.r0 entries must be [x, y]");
                                p.config.r0 = Complex{r0[0].get<double>(), r0[1].get<double>()};
                                p.params["r0"] = r0;
                            }
                            if (!dt.is_null()) {
                                p.config.dt = dt.get<double>();
                                p.params["dt"] = dt;
                            }
                            if (!root.is_null()) {
                                p.config.root_kind = parse_root(root);
                                p.params["root"] = root;
                            }
                            p.label = "point_" + std::to_string(points.size());
                            p.config.validate();
                            points.push_back(std::move(p));
                        }
    } catch (const json::exception& e) {
        bad(std::string("grid: ") + e.what());
    }
    return points;
}

}  // namespace mgf
