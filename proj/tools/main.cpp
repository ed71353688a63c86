#include "mobius_geofence/config_io.hpp"
#include "mobius_geofence/logging.hpp"
#include "mobius_geofence/svg_plot.hpp"
#include "mobius_geofence/verify_suite.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mgf;

namespace {

enum class Exit { Ok = 0, BadInput = 2, Infeasible = 3, BarrierViolated = 4, VerifyFailed = 5 };

const char* exit_name(Exit e) {
    switch (e) {
        case Exit::Ok: return "Ok";
        case Exit::BadInput: return "BadInput";
        case Exit::Infeasible: return "Infeasible";
        case Exit::BarrierViolated: return "BarrierViolated";
        case Exit::VerifyFailed: return "VerifyFailed";
    }
    return "?";
}

Exit exit_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::InfeasibleStart: return Exit::Infeasible;
        case ErrorCode::BarrierViolated:
        case ErrorCode::PoleApproach: return Exit::BarrierViolated;
        default: return Exit::BadInput;
    }
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GeofenceError(ErrorCode::BadInput, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

struct Manifest {
    Exit status = Exit::Ok;
    std::string message;
    fs::path csv_path;
    fs::path summary_path;
    std::vector<fs::path> plot_paths;
    std::optional<TrajectoryRecord> record;
};

json manifest_json(const SimConfig& config, const Manifest& m) {
    json plots = json::array();
    for (const auto& p : m.plot_paths) plots.push_back(p.filename().string());
    json outputs = {{"csv_path", m.csv_path.empty() ? json() : json(m.csv_path.filename().string())},
                    {"summary_path", m.summary_path.empty() ? json() : json(m.summary_path.filename().string())},
                    {"plot_paths", plots}};
    json j = {{"config", config_to_json(config)}, {"outputs", outputs}, {"exit_status", exit_name(m.status)}};
    if (!m.message.empty()) j["message"] = m.message;
    return j;
}

// Runs one configuration and writes its artifacts. Simulation failures are
// reported through the manifest, never thrown.
Manifest simulate_to_dir(const SimConfig& config, const fs::path& out_dir, bool plot) {
    Manifest m;
    fs::create_directories(out_dir);
    try {
        TrajectoryRecord rec = run(config);
        m.csv_path = out_dir / "trajectory.csv";
        m.summary_path = out_dir / "summary.json";
        write_csv_file(m.csv_path, rec);

        const Summary& s = rec.summary;
        if (s.aborted) {
            m.status = exit_for(s.abort_code.value_or(ErrorCode::BarrierViolated));
            m.message = s.abort_reason;
        } else if (s.containment_violations + s.region_violations + s.bound_violations + s.blf_violations > 0) {
            m.status = Exit::BarrierViolated;
            m.message = "a runtime monitor reported violations";
        }
        json summary = summary_json(config, rec);
        summary["exit_status"] = exit_name(m.status);
        write_json(m.summary_path, summary);

        if (plot) {
            // Figures are rebuilt from the CSV on disk.
            const CsvTable table = read_csv(m.csv_path);
            m.plot_paths = write_plots(table, config.scene, config.desired_is_inner, config.root_kind, out_dir);
        }
        m.record = std::move(rec);
    } catch (const GeofenceError& e) {
        m.status = exit_for(e.code());
        m.message = e.what();
    }
    write_json(out_dir / "manifest.json", manifest_json(config, m));
    return m;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, bool plot) {
    const SimConfig config = load_config(config_path);
    log::info("simulating " + (config.name.empty() ? config_path : config.name));
    const Manifest m = simulate_to_dir(config, out_dir, plot);
    if (m.status != Exit::Ok) {
        std::cerr << exit_name(m.status) << ": " << m.message << '\n';
    }
    if (m.record) {
        const Summary& s = m.record->summary;
        std::cout << "converged=" << (s.converged ? "true" : "false") << " final_e_abs=" << format_number(s.final_e_abs)
                  << " steady_omega=" << format_number(s.steady_omega)
                  << " max_E_abs=" << format_number(s.max_E_abs) << " delta_T=" << format_number(m.record->map.delta_T)
                  << '\n';
        std::cout << "wrote " << m.csv_path.string() << '\n';
    }
    return static_cast<int>(m.status);
}

int cmd_verify(std::uint64_t seed, int samples, bool mutate) {
    VerifyOptions opt;
    opt.seed = seed;
    opt.samples = samples;
    opt.mutate_alpha = mutate;
    log::info("verify seed=" + std::to_string(seed) + " samples=" + std::to_string(samples));
    const VerifyReport rep = run_verify(opt);
    rep.print(std::cout);
    return static_cast<int>(rep.all_passed() ? Exit::Ok : Exit::VerifyFailed);
}

void print_feasibility(const char* label, const FeasibilityReport& f, double delta_T) {
    std::printf("%-8s eta_a=%.4f eta_b=%.4f eta=%.4f lhs=%.4f rhs=%.4f |E0|=%.4f delta_T=%.4f -> %s\n", label,
                f.eta_a, f.eta_b, f.eta, f.lhs, f.rhs, f.E0_abs, delta_T, f.feasible ? "feasible" : "infeasible");
}

// Feasible heading windows at r0 on a 0.1 degree grid, in degrees.
std::vector<std::pair<double, double>> heading_windows(const MobiusMap& map, const Normalization& norm,
                                                       Complex r0_std) {
    std::vector<std::pair<double, double>> windows;
    bool open = false;
    double start = 0.0, last = 0.0;
    for (int k = -1800; k < 1800; ++k) {
        const double deg = 0.1 * k;
        const double theta_std = norm.heading_to_standard(deg2rad(deg));
        const bool ok = check_feasibility(map, r0_std, theta_std).feasible;
        if (ok && !open) {
            open = true;
            start = deg;
        }
        if (ok) last = deg;
        if (!ok && open) {
            open = false;
            windows.emplace_back(start, last);
        }
    }
    if (open) windows.emplace_back(start, last);
    // Join a window that wraps through +-180.
    if (windows.size() > 1 && windows.front().first <= -180.0 + 1e-9 && windows.back().second >= 179.9 - 1e-9) {
        windows.front().first = windows.back().first - 360.0;
        windows.pop_back();
    }
    return windows;
}

int cmd_feasibility(const std::string& config_path) {
    const SimConfig config = load_config(config_path);
    const StandardScene scene = normalize_scene(config.scene, config.desired_is_inner);
    const Normalization& norm = scene.normalization;
    const Complex r0 = norm.to_standard(config.r0);
    const double theta0 = norm.heading_to_standard(config.theta0);

    const double d = std::abs(r0 - scene.lambda);
    const double margin = 1e-9 * std::max(1.0, scene.mu);
    const bool interior = scene.scene_case == SceneCase::OuterEncirclesInner ? d < scene.mu - margin
                                                                             : d > scene.mu + margin;
    if (!interior) {
        throw GeofenceError(ErrorCode::BadInput,
                            "initial position is on or beyond the geofence; a start strictly inside the "
                            "admissible region is required");
    }

    bool configured_feasible = false;
    for (RootKind kind : {RootKind::Smaller, RootKind::Larger}) {
        const MobiusMap map = build_map(scene, kind);
        const FeasibilityReport f = check_feasibility(map, r0, theta0);
        print_feasibility(to_string(kind).data(), f, map.delta_T);
        if (kind == config.root_kind) configured_feasible = f.feasible;
        const auto windows = heading_windows(map, norm, r0);
        std::printf("%-8s feasible theta0 window(s) [deg]:", to_string(kind).data());
        if (windows.empty()) std::printf(" none");
        for (const auto& [a, b] : windows) std::printf(" [%.1f, %.1f]", a, b);
        std::printf("\n");
    }
    return static_cast<int>(configured_feasible ? Exit::Ok : Exit::Infeasible);
}

int cmd_sweep(const std::string& config_path, const std::string& grid_path, const std::string& out_dir, int jobs) {
    const SimConfig base = load_config(config_path);
    const std::vector<SweepPoint> points = expand_grid(base, read_json_file(grid_path));
    fs::create_directories(out_dir);

    std::vector<Manifest> manifests(points.size());
    std::atomic<std::size_t> next{0};
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(points.size())));
    log::info("sweep: " + std::to_string(points.size()) + " points on " + std::to_string(workers) + " workers");
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < points.size(); i = next++) {
                    manifests[i] = simulate_to_dir(points[i].config, fs::path(out_dir) / points[i].label, false);
                }
            });
        }
    }

    std::ofstream agg(fs::path(out_dir) / "sweep_summary.csv", std::ios::binary);
    agg << "label,params,status,converged,converge_time,final_x,final_y,final_e_abs,max_E_abs,max_blf_increase,"
           "steady_omega\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Manifest& m = manifests[i];
        std::string params = points[i].params.dump();
        std::replace(params.begin(), params.end(), ',', ';');
        agg << points[i].label << ',' << params << ',' << exit_name(m.status);
        if (m.record && !m.record->samples.empty()) {
            const Summary& s = m.record->summary;
            const Sample& last = m.record->samples.back();
            agg << ',' << (s.converged ? 1 : 0) << ',' << format_number(s.converge_time) << ','
                << format_number(last.x) << ',' << format_number(last.y) << ',' << format_number(s.final_e_abs) << ','
                << format_number(s.max_E_abs) << ',' << format_number(s.max_blf_increase) << ','
                << format_number(s.steady_omega);
        } else {
            agg << ",,,,,,,,";
        }
        agg << '\n';
        std::cout << points[i].label << ' ' << params << ' ' << exit_name(m.status) << '\n';
    }
    return static_cast<int>(Exit::Ok);
}

}  // namespace

int main(int argc, char** argv) {
    log::init_from_env();

    CLI::App app{"Mobius-transformation geofencing control of a unicycle robot"};
    app.require_subcommand(1);

    std::string config_path, out_dir, grid_path;
    bool plot = false, mutate = false;
    std::uint64_t seed = VerifyOptions{}.seed;
    int samples = VerifyOptions{}.samples;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    auto* sim = app.add_subcommand("simulate", "Run one closed-loop simulation");
    sim->add_option("--config", config_path, "Scenario JSON")->required();
    sim->add_option("--out", out_dir, "Output directory")->required();
    sim->add_flag("--plot", plot, "Also write SVG figures");

    auto* ver = app.add_subcommand("verify", "Run the property suite");
    ver->add_option("--seed", seed, "Random seed");
    ver->add_option("--samples", samples, "Base sample count")->check(CLI::PositiveNumber);
    ver->add_flag("--mutate-alpha", mutate, "Self-test: perturb alpha in one control law");

    auto* fea = app.add_subcommand("feasibility", "Check the initial condition against the barrier");
    fea->add_option("--config", config_path, "Scenario JSON")->required();

    auto* swp = app.add_subcommand("sweep", "Run a parameter grid");
    swp->add_option("--config", config_path, "Base scenario JSON")->required();
    swp->add_option("--grid", grid_path, "Grid JSON")->required();
    swp->add_option("--out", out_dir, "Output directory")->required();
    swp->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(Exit::BadInput);
    }

    try {
        if (*sim) return cmd_simulate(config_path, out_dir, plot);
        if (*ver) return cmd_verify(seed, samples, mutate);
        if (*fea) return cmd_feasibility(config_path);
        if (*swp) return cmd_sweep(config_path, grid_path, out_dir, jobs);
    } catch (const GeofenceError& e) {
        log::error(e.what());
        return static_cast<int>(exit_for(e.code()));
    } catch (const std::exception& e) {
        log::error(e.what());
        return static_cast<int>(Exit::BadInput);
    }
    return static_cast<int>(Exit::BadInput);
}
