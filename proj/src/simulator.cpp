#include "mobius_geofence/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mgf {

void SimConfig::validate() const {
    auto bad = [](const std::string& what) { throw GeofenceError(ErrorCode::BadInput, what); };
    if (!(dt > 0.0) || dt > 0.1) bad("dt must lie in (0, 0.1]");
    if (!(t_final >= dt) || !std::isfinite(t_final)) bad("t_final must be finite and >= dt");
    if (!(gains.v > 0.0) || !std::isfinite(gains.v)) bad("v must be positive");
    if (!(gains.kappa > 0.0) || !std::isfinite(gains.kappa)) bad("kappa must be positive");
    if (!(wheel_base > 0.0)) bad("wheel_base must be positive");
    if (!(wheel_limit > 0.0)) bad("wheel_limit must be positive");
    if (record_stride < 1) bad("record_stride must be >= 1");
    if (!std::isfinite(r0.real()) || !std::isfinite(r0.imag()) || !std::isfinite(theta0)) {
        bad("initial state must be finite");
    }
}

ActualState step_actual(const ActualState& s, double omega, double dt) {
    const double v = s.v;
    // State (x, y, theta); omega constant so the theta stages are exact.
    auto f = [&](double th) { return Complex{v * std::cos(th), v * std::sin(th)}; };
    const Complex k1 = f(s.theta);
    const Complex k2 = f(s.theta + 0.5 * dt * omega);
    const Complex k3 = k2;
    const Complex k4 = f(s.theta + dt * omega);
    ActualState out = s;
    out.r = s.r + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.theta = wrap_angle(s.theta + dt * omega);
    return out;
}

WheelCommand wheel_speeds(double v, double omega, double wheel_base, double limit) {
    WheelCommand w;
    w.v_right = v + 0.5 * wheel_base * omega;
    w.v_left = v - 0.5 * wheel_base * omega;
    w.saturated = std::abs(w.v_right) > limit || std::abs(w.v_left) > limit;
    return w;
}

MobiusMap scenario_map(const SimConfig& config) {
    const StandardScene scene = normalize_scene(config.scene, config.desired_is_inner);
    return build_map(scene, config.root_kind);
}

namespace {

struct Prepared {
    MobiusMap map;
    Normalization norm;
    ActualState s0;
    ControlGains gains;  // v scaled to the normalized frame
};

Prepared prepare(const SimConfig& config) {
    config.validate();
    Prepared p;
    p.map = scenario_map(config);
    p.norm = p.map.scene.normalization;
    p.gains = config.gains;
    p.gains.v = config.gains.v * p.norm.scale;
    p.s0.r = p.norm.to_standard(config.r0);
    p.s0.theta = p.norm.heading_to_standard(config.theta0);
    p.s0.v = p.gains.v;
    return p;
}

FeasibilityReport require_feasible(const Prepared& p) {
    FeasibilityReport rep;
    try {
        rep = check_feasibility(p.map, p.s0.r, p.s0.theta);
    } catch (const GeofenceError& e) {
        throw GeofenceError(ErrorCode::InfeasibleStart, std::string("initial state rejected: ") + e.what());
    }
    if (!rep.feasible || !(rep.E0_abs < p.map.delta_T)) {
        throw GeofenceError(ErrorCode::InfeasibleStart,
                            "initial state violates the barrier: |E(0)| = " + std::to_string(rep.E0_abs) +
                                " >= delta_T = " + std::to_string(p.map.delta_T));
    }
    return rep;
}

bool within_bounds(const BoundsReport& b, const MobiusMap& map, Complex r, Complex rho, double E_abs,
                   double Omega, double omega) {
    const double tol = kBoundTolerance;
    if (E_abs > b.E_bound + tol) return false;
    if (!b.rho_interval.contains(std::abs(rho), tol)) return false;
    if (std::abs(Omega) > b.Omega_bound + tol) return false;
    if (std::abs(omega) > b.omega_bound + tol) return false;
    const double d = std::abs(r - b.r_circle.center);
    if (b.r_circle.inside ? d > b.r_circle.radius + tol : d < b.r_circle.radius - tol) return false;
    (void)map;
    return true;
}

void fail(Summary& sum, const GeofenceError& e) {
    sum.aborted = true;
    sum.abort_code = e.code();
    sum.abort_reason = std::string(to_string(e.code())) + ": " + e.what();
}

// Shared monitor bookkeeping for both planes.
class Monitor {
public:
    Monitor(const SimConfig& config, const Prepared& p, TrajectoryRecord& rec)
        : config_(config), p_(p), rec_(rec) {
        rec_.summary.min_barrier_margin = std::numeric_limits<double>::infinity();
    }

    void observe(long step, double t, const ActualState& s, const TransformedState& ts, double E_abs,
                 double S, double omega, double Omega) {
        Summary& sum = rec_.summary;
        const MobiusMap& map = p_.map;

        Sample smp;
        smp.t = t;
        const Complex r_orig = p_.norm.to_original(s.r);
        smp.x = r_orig.real();
        smp.y = r_orig.imag();
        smp.theta = p_.norm.heading_to_original(s.theta);
        smp.rho_x = ts.rho.real();
        smp.rho_y = ts.rho.imag();
        smp.gamma = ts.gamma;
        const double e_norm = std::abs(error_actual(s));
        smp.e_abs = e_norm / p_.norm.scale;
        smp.E_abs = E_abs;
        smp.S = S;
        smp.omega = omega;
        smp.Omega = Omega;
        smp.contained = within_geofence(map.scene, s.r);
        smp.in_bounds = within_bounds(rec_.bounds, map, s.r, ts.rho, E_abs, Omega, omega);

        if (config_.monitors.containment && !smp.contained) ++sum.containment_violations;
        if (config_.monitors.transformed_region && !within_transformed_region(map, ts.rho)) {
            ++sum.region_violations;
        }
        if (config_.monitors.bounds && !smp.in_bounds) ++sum.bound_violations;
        if (step > 0) {
            const double inc = S - last_S_;
            sum.max_blf_increase = std::max(sum.max_blf_increase, inc);
            if (config_.monitors.blf && inc > kBlfTolerance) ++sum.blf_violations;
        }
        last_S_ = S;
        sum.max_E_abs = std::max(sum.max_E_abs, E_abs);
        sum.min_barrier_margin = std::min(sum.min_barrier_margin, map.delta_T - E_abs);
        if (wheel_speeds(config_.gains.v, omega, config_.wheel_base, config_.wheel_limit).saturated) {
            ++sum.saturated_steps;
        }

        if (e_norm < kConvergenceTolerance) {
            if (below_since_ < 0.0) below_since_ = t;
        } else {
            below_since_ = -1.0;
        }

        sum.steps = step;
        sum.final_e_abs = smp.e_abs;
        sum.final_r_abs = s.modulus();
        sum.steady_omega = omega;
        sum.converge_time = below_since_;
        sum.converged = below_since_ >= 0.0 && t - below_since_ >= kConvergenceHold - 1e-9;

        if (step % config_.record_stride == 0) {
            rec_.samples.push_back(smp);
            last_recorded_ = true;
        } else {
            pending_ = smp;
            last_recorded_ = false;
        }
    }

    /// Makes sure the final state is in the sample list.
    void finish() {
        if (!last_recorded_ && pending_) rec_.samples.push_back(*pending_);
        if (!std::isfinite(rec_.summary.min_barrier_margin)) rec_.summary.min_barrier_margin = 0.0;
    }

private:
    const SimConfig& config_;
    const Prepared& p_;
    TrajectoryRecord& rec_;
    double last_S_ = 0.0;
    double below_since_ = -1.0;
    bool last_recorded_ = true;
    std::optional<Sample> pending_;
};

long step_count(const SimConfig& config) {
    return std::lround(config.t_final / config.dt);
}

void require_off_pole_region(const MobiusMap& map, Complex r) {
    if (std::abs(r + map.beta) < kPoleApproachTolerance) {
        throw GeofenceError(ErrorCode::PoleApproach, "trajectory reached the map pole");
    }
}

}  // namespace

TrajectoryRecord run(const SimConfig& config) {
    const Prepared p = prepare(config);
    TrajectoryRecord rec;
    rec.map = p.map;
    rec.feasibility = require_feasible(p);
    rec.S0 = blf(error_transformed_from_actual(p.map, p.s0), p.map.delta_T);
    rec.bounds = bounds_report(p.map, rec.S0, p.gains);

    Monitor monitor(config, p, rec);
    const long n = step_count(config);
    rec.samples.reserve(static_cast<std::size_t>(n / config.record_stride + 2));

    auto control = [&](const ActualState& s) { return omega_actual_from_actual(p.map, s, p.gains).total; };

    ActualState s = p.s0;
    for (long k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * config.dt;
        try {
            require_off_pole_region(p.map, s.r);
            const TransformedState ts = to_transformed(p.map, s);
            const Complex E = error_transformed(p.map, ts);
            const ControlOutput u = omega_actual_from_actual(p.map, s, p.gains);
            const double S = blf(E, p.map.delta_T);
            monitor.observe(k, t, s, ts, std::abs(E), S, u.total, u.total - u.correction);
            if (k == n) break;

            if (!config.stagewise) {
                s = step_actual(s, u.total, config.dt);
            } else {
                // Full RK4 on (r, theta) with the control re-evaluated per stage.
                const double h = config.dt;
                auto deriv = [&](const ActualState& q, Complex& dr, double& dth) {
                    dr = q.v * unit(q.theta);
                    dth = control(q);
                };
                Complex r1, r2, r3, r4;
                double t1, t2, t3, t4;
                deriv(s, r1, t1);
                ActualState q = s;
                q.r = s.r + 0.5 * h * r1;
                q.theta = s.theta + 0.5 * h * t1;
                deriv(q, r2, t2);
                q.r = s.r + 0.5 * h * r2;
                q.theta = s.theta + 0.5 * h * t2;
                deriv(q, r3, t3);
                q.r = s.r + h * r3;
                q.theta = s.theta + h * t3;
                deriv(q, r4, t4);
                s.r += h / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4);
                s.theta = wrap_angle(s.theta + h / 6.0 * (t1 + 2.0 * t2 + 2.0 * t3 + t4));
            }
        } catch (const GeofenceError& e) {
            if (e.code() == ErrorCode::NearPole) {
                fail(rec.summary, GeofenceError(ErrorCode::PoleApproach, e.what()));
            } else {
                fail(rec.summary, e);
            }
            break;
        }
    }
    monitor.finish();
    return rec;
}

TransformedRunReport run_transformed(const SimConfig& config) {
    const Prepared p = prepare(config);
    TransformedRunReport report;
    TrajectoryRecord& rec = report.record;
    rec.map = p.map;
    rec.feasibility = require_feasible(p);
    rec.S0 = blf(error_transformed_from_actual(p.map, p.s0), p.map.delta_T);
    rec.bounds = bounds_report(p.map, rec.S0, p.gains);

    Monitor monitor(config, p, rec);
    const long n = step_count(config);
    const double v = p.gains.v;

    TransformedState ts = to_transformed(p.map, p.s0);
    auto speed = [&](Complex rho) { return transformed_speed_from_rho(p.map, rho, v); };
    auto Omega_of = [&](const TransformedState& q) { return omega_transformed(p.map, q, p.gains).total; };

    const long tail_start = n - n / 10;
    double momentum_sum = 0.0;

    for (long k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * config.dt;
        try {
            if (std::abs(ts.rho - 1.0) < kPoleApproachTolerance) {
                throw GeofenceError(ErrorCode::PoleApproach, "virtual robot reached the inverse-map pole");
            }
            ts.speed = speed(ts.rho);
            const ActualState s = to_actual(p.map, ts, v);
            const Complex E = error_transformed(p.map, ts);
            const ControlOutput U = omega_actual_from_transformed(p.map, ts, p.gains);
            const double Omega = U.total - U.correction;
            const double S = blf(E, p.map.delta_T);
            monitor.observe(k, t, s, ts, std::abs(E), S, U.total, Omega);
            if (k >= tail_start) momentum_sum += inner(Complex{0.0, 1.0} * ts.rho, unit(ts.gamma));
            if (k == n) break;

            const double h = config.dt;
            const double held = Omega;
            auto deriv = [&](const TransformedState& q, Complex& dr, double& dg) {
                dr = speed(q.rho) * unit(q.gamma);
                dg = config.stagewise ? Omega_of(q) : held;
            };
            Complex r1, r2, r3, r4;
            double g1, g2, g3, g4;
            deriv(ts, r1, g1);
            TransformedState q = ts;
            q.rho = ts.rho + 0.5 * h * r1;
            q.gamma = ts.gamma + 0.5 * h * g1;
            deriv(q, r2, g2);
            q.rho = ts.rho + 0.5 * h * r2;
            q.gamma = ts.gamma + 0.5 * h * g2;
            deriv(q, r3, g3);
            q.rho = ts.rho + h * r3;
            q.gamma = ts.gamma + h * g3;
            deriv(q, r4, g4);
            ts.rho += h / 6.0 * (r1 + 2.0 * r2 + 2.0 * r3 + r4);
            ts.gamma = wrap_angle(ts.gamma + h / 6.0 * (g1 + 2.0 * g2 + 2.0 * g3 + g4));
        } catch (const GeofenceError& e) {
            if (e.code() == ErrorCode::NearPole) {
                fail(rec.summary, GeofenceError(ErrorCode::PoleApproach, e.what()));
            } else {
                fail(rec.summary, e);
            }
            break;
        }
    }
    monitor.finish();

    report.final_rho_abs = std::abs(ts.rho);
    // <i rho, e^{i gamma}> = Im(conj(rho) e^{i gamma}) > 0 for anticlockwise motion.
    report.rotation_sense = momentum_sum > 0.0 ? 1 : (momentum_sum < 0.0 ? -1 : 0);
    report.expected_sense = p.map.sigma > 0.0 ? 1 : -1;

    const TrajectoryRecord actual = run(config);
    const std::size_t m = std::min(actual.samples.size(), rec.samples.size());
    for (std::size_t i = 0; i < m; ++i) {
        const Sample& a = actual.samples[i];
        const Sample& b = rec.samples[i];
        const double d = std::hypot(a.rho_x - b.rho_x, a.rho_y - b.rho_y);
        report.max_cross_plane_discrepancy = std::max(report.max_cross_plane_discrepancy, d);
    }
    return report;
}

}  // namespace mgf
