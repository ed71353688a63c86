#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mobius_geofence/config_io.hpp"
#include "mobius_geofence/controller.hpp"
#include "mobius_geofence/mobius_core.hpp"
#include "mobius_geofence/plane_bridge.hpp"
#include "mobius_geofence/simulator.hpp"
#include "mobius_geofence/verify_suite.hpp"

#include <map>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace mgf;

namespace {

// JSON crosses the boundary as text; the Python side decodes it.
SimConfig config_from_text(const std::string& text) { return parse_config(nlohmann::json::parse(text)); }

RootKind root_from(const std::string& name) {
    if (name == "smaller") return RootKind::Smaller;
    if (name == "larger") return RootKind::Larger;
    throw GeofenceError(ErrorCode::BadInput, "root must be 'smaller' or 'larger', got '" + name + "'");
}

py::dict map_dict(const MobiusMap& m) {
    py::dict d;
    d["alpha"] = m.alpha;
    d["beta"] = m.beta;
    d["sigma"] = m.sigma;
    d["radius_desired"] = m.radius_fC;
    d["radius_boundary"] = m.radius_fCp;
    d["delta_T"] = m.delta_T;
    return d;
}

py::dict simulate(const std::string& config_text) {
    const SimConfig cfg = config_from_text(config_text);
    TrajectoryRecord rec;
    {
        py::gil_scoped_release release;
        rec = run(cfg);
    }
    std::map<std::string, std::vector<double>> cols;
    for (const Sample& s : rec.samples) {
        const double row[] = {s.t, s.x, s.y, s.theta, s.rho_x, s.rho_y, s.gamma, s.e_abs, s.E_abs, s.S,
                              s.omega, s.Omega, s.contained ? 1.0 : 0.0, s.in_bounds ? 1.0 : 0.0};
        const char* names[] = {"t", "x", "y", "theta", "rho_x", "rho_y", "gamma", "e_abs", "E_abs", "S",
                               "omega", "Omega", "contained", "in_bounds"};
        for (std::size_t i = 0; i < std::size(row); ++i) cols[names[i]].push_back(row[i]);
    }
    py::dict out;
    out["summary"] = summary_json(cfg, rec).dump();
    out["columns"] = cols;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mobius-transformation geofencing for a unicycle robot";

    py::register_exception<GeofenceError>(m, "GeofenceError", PyExc_ValueError);

    m.def(
        "solve_roots",
        [](double lambda, double mu) {
            const RootPair r = solve_roots(StandardScene::from_parameters(lambda, mu));
            return std::pair{r.smaller, r.larger};
        },
        py::arg("lam"), py::arg("mu"), "Smaller and larger real roots for the standard scene (lambda, mu).");

    m.def(
        "build_map",
        [](double lambda, double mu, const std::string& root) {
            return map_dict(build_map(StandardScene::from_parameters(lambda, mu), root_from(root)));
        },
        py::arg("lam"), py::arg("mu"), py::arg("root") = "smaller");

    m.def(
        "forward",
        [](double lambda, double mu, const std::string& root, Complex z) {
            return forward(build_map(StandardScene::from_parameters(lambda, mu), root_from(root)), z);
        },
        py::arg("lam"), py::arg("mu"), py::arg("root"), py::arg("z"));

    m.def(
        "inverse",
        [](double lambda, double mu, const std::string& root, Complex w) {
            return inverse(build_map(StandardScene::from_parameters(lambda, mu), root_from(root)), w);
        },
        py::arg("lam"), py::arg("mu"), py::arg("root"), py::arg("w"));

    m.def(
        "to_transformed",
        [](double lambda, double mu, const std::string& root, Complex r, double theta) {
            const MobiusMap mp = build_map(StandardScene::from_parameters(lambda, mu), root_from(root));
            const TransformedState ts = to_transformed(mp, ActualState{r, theta, 1.0});
            return std::pair{ts.rho, ts.gamma};
        },
        py::arg("lam"), py::arg("mu"), py::arg("root"), py::arg("r"), py::arg("theta"),
        "Position rho and heading gamma in the transformed plane.");

    m.def(
        "feasibility",
        [](const std::string& config_text) {
            const SimConfig cfg = config_from_text(config_text);
            const MobiusMap mp = scenario_map(cfg);
            const Complex r0 = mp.scene.normalization.to_standard(cfg.r0);
            const double th0 = mp.scene.normalization.heading_to_standard(cfg.theta0);
            return feasibility_to_json(check_feasibility(mp, r0, th0)).dump();
        },
        py::arg("config_json"));

    m.def("simulate", &simulate, py::arg("config_json"),
          "Run the closed loop; returns the summary as JSON text and the trajectory columns.");

    m.def(
        "wheel_speeds",
        [](double v, double omega, double wheel_base, double limit) {
            const WheelCommand w = wheel_speeds(v, omega, wheel_base, limit);
            return py::make_tuple(w.v_right, w.v_left, w.saturated);
        },
        py::arg("v"), py::arg("omega"), py::arg("wheel_base") = 0.1054, py::arg("limit") = 0.814);

    m.def(
        "verify",
        [](std::uint64_t seed, int samples, bool mutate_alpha) {
            VerifyOptions opt;
            opt.seed = seed;
            opt.samples = samples;
            opt.mutate_alpha = mutate_alpha;
            VerifyReport rep;
            {
                py::gil_scoped_release release;
                rep = run_verify(opt);
            }
            py::list out;
            for (const PropertyResult& r : rep.results) {
                py::dict d;
                d["name"] = r.name;
                d["passed"] = r.passed;
                d["informational"] = r.informational;
                d["worst"] = r.worst;
                d["tolerance"] = r.tolerance;
                d["checked"] = r.checked;
                d["detail"] = r.detail;
                out.append(d);
            }
            return out;
        },
        py::arg("seed") = VerifyOptions{}.seed, py::arg("samples") = VerifyOptions{}.samples,
        py::arg("mutate_alpha") = false);
}
