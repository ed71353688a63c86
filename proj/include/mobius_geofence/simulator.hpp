#pragma once

// Fixed-step closed-loop simulation of the unicycle (actual plane) and of the
// virtual robot (transformed plane), with per-step monitors.
//
// Scenes and initial states are given in original coordinates. Integration
// happens in the normalized frame (desired circle = unit circle), where the
// forward speed becomes v * scale; turn rates are frame independent. Sample
// positions, headings and |e| are reported back in original coordinates.

#include "mobius_geofence/controller.hpp"
#include "mobius_geofence/errors.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mgf {

struct Monitors {
    bool containment = true;
    bool blf = true;
    bool bounds = true;
    bool transformed_region = true;
};

struct SimConfig {
    std::string name;
    SceneSpec scene{};
    bool desired_is_inner = true;
    RootKind root_kind = RootKind::Smaller;
    Complex r0{0.0, 0.0};
    double theta0 = 0.0;  // radians, original frame
    ControlGains gains{};
    double dt = 1e-3;
    double t_final = 100.0;
    Monitors monitors{};
    /// Re-evaluate the control at every RK4 stage instead of holding it over
    /// the step. Off by default (sampled controller).
    bool stagewise = false;
    std::uint64_t seed = 0;
    double wheel_base = 0.1054;
    double wheel_limit = 0.814;
    /// Keep every n-th step in the sample list. Monitors still run every step.
    int record_stride = 1;

    /// Throws GeofenceError(BadInput) on invalid values.
    void validate() const;
};

struct WheelCommand {
    double v_right = 0.0;
    double v_left = 0.0;
    bool saturated = false;
};

struct Sample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    double rho_x = 0.0;
    double rho_y = 0.0;
    double gamma = 0.0;
    double e_abs = 0.0;
    double E_abs = 0.0;
    double S = 0.0;
    double omega = 0.0;
    double Omega = 0.0;
    bool contained = true;
    bool in_bounds = true;
};

struct Summary {
    bool converged = false;
    double converge_time = -1.0;  // start of the final |e| < tolerance stretch, -1 if never
    double final_e_abs = 0.0;
    double final_r_abs = 0.0;  // normalized |r| at the last step
    double max_E_abs = 0.0;
    double min_barrier_margin = 0.0;  // min over steps of delta_T - |E|
    double max_blf_increase = 0.0;
    double steady_omega = 0.0;
    long steps = 0;
    long containment_violations = 0;
    long region_violations = 0;
    long bound_violations = 0;
    long blf_violations = 0;
    long saturated_steps = 0;
    bool aborted = false;
    std::string abort_reason;
    std::optional<ErrorCode> abort_code;
};

struct TrajectoryRecord {
    std::vector<Sample> samples;
    Summary summary;
    BoundsReport bounds;
    FeasibilityReport feasibility;
    MobiusMap map;
    double S0 = 0.0;
};

struct TransformedRunReport {
    TrajectoryRecord record;
    double final_rho_abs = 0.0;
    /// +1 anticlockwise, -1 clockwise, from the angular momentum of the
    /// virtual robot averaged over the last 10% of the run.
    int rotation_sense = 0;
    int expected_sense = 0;
    double max_cross_plane_discrepancy = 0.0;
};

inline constexpr double kConvergenceTolerance = 1e-2;
inline constexpr double kConvergenceHold = 5.0;
inline constexpr double kBlfTolerance = 1e-7;
inline constexpr double kBoundTolerance = 1e-6;
inline constexpr double kPoleApproachTolerance = 1e-6;

/// RK4 step of x' = v cos(theta), y' = v sin(theta), theta' = omega with
/// omega held constant. Heading is wrapped to (-pi, pi].
ActualState step_actual(const ActualState& s, double omega, double dt);

WheelCommand wheel_speeds(double v, double omega, double wheel_base, double limit = 0.814);

/// Normalized scene and map for a config.
MobiusMap scenario_map(const SimConfig& config);

/// Throws InfeasibleStart if the initial state is outside the barrier. A
/// BarrierViolated or PoleApproach during integration ends the run early and
/// is reported in summary.abort_*.
TrajectoryRecord run(const SimConfig& config);

/// Integrates the virtual robot in the transformed plane, checks the region
/// condition and rotation sense, and compares against run() mapped forward.
TransformedRunReport run_transformed(const SimConfig& config);

}  // namespace mgf
