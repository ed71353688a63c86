#include "mobius_geofence/controller.hpp"

#include "mobius_geofence/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace mgf {

namespace {

double barrier_denominator(const MobiusMap& map, Complex E) {
    const double den = map.delta_T * map.delta_T - std::norm(E);
    if (den < kBarrierFloor) {
        std::ostringstream os;
        os.precision(12);
        os << "|E| = " << std::abs(E) << " reached delta_T = " << map.delta_T;
        throw GeofenceError(ErrorCode::BarrierViolated, os.str());
    }
    return den;
}

}  // namespace

Complex error_actual(const ActualState& s, Direction direction) {
    const Complex offset = Complex{0.0, 1.0} * unit(s.theta);
    return direction == Direction::Anticlockwise ? s.r + offset : s.r - offset;
}

Complex error_transformed(const MobiusMap& map, const TransformedState& ts) {
    return ts.rho + Complex{0.0, map.sigma} * unit(ts.gamma);
}

Complex error_transformed_from_actual(const MobiusMap& map, const ActualState& s) {
    const double a = map.alpha;
    const Complex d = 1.0 + a * s.r;
    if (std::abs(d) <= map.pole_tolerance * std::abs(a)) {
        throw GeofenceError(ErrorCode::NearPole, "error evaluated at the map pole");
    }
    const Complex rho = a * (s.r + a) / d;
    const Complex heading = map.sgn_delta * std::conj(d) / d * unit(s.theta);
    return rho + Complex{0.0, map.sigma} * heading;
}

ErrorPair errors(const MobiusMap& map, const ActualState& s) {
    ErrorPair out;
    out.e_actual = error_actual(s);
    out.E_transformed = error_transformed(map, to_transformed(map, s));
    out.E_abs = std::abs(out.E_transformed);
    return out;
}

double blf(Complex E, double delta_T) {
    const double d2 = delta_T * delta_T;
    const double e2 = std::norm(E);
    if (e2 >= d2) {
        throw GeofenceError(ErrorCode::BarrierViolated, "|E| >= delta_T");
    }
    // log1p form keeps precision near E = 0.
    return -0.5 * std::log1p(-e2 / d2);
}

ControlOutput omega_transformed(const MobiusMap& map, const TransformedState& ts, const ControlGains& g) {
    const Complex E = error_transformed(map, ts);
    const double den = barrier_denominator(map, E);
    const double speed = transformed_speed_from_rho(map, ts.rho, g.v);
    ControlOutput out;
    out.feedforward = speed / map.sigma;
    out.barrier = g.kappa * inner(ts.rho, unit(ts.gamma)) / den / map.sigma;
    out.correction = 0.0;
    out.total = out.feedforward + out.barrier;
    return out;
}

ControlOutput omega_actual_from_actual(const MobiusMap& map, const ActualState& s, const ControlGains& g) {
    const double a = map.alpha;
    const Complex d = 1.0 + a * s.r;
    if (std::abs(s.r + map.beta) <= map.pole_tolerance) {
        throw GeofenceError(ErrorCode::NearPole, "control evaluated at the map pole");
    }
    const Complex rho = a * (s.r + a) / d;
    const Complex heading = map.sgn_delta * std::conj(d) / d * unit(s.theta);
    const Complex E = rho + Complex{0.0, map.sigma} * heading;
    const double den = barrier_denominator(map, E);
    const double P = inner(rho, heading);

    ActualState with_speed = s;
    with_speed.v = g.v;

    ControlOutput out;
    out.feedforward = (g.v / map.sigma) * std::abs(a * (1.0 - a * a) / (d * d));
    out.barrier = (g.kappa / map.sigma) * P / den;
    out.correction = chi_dot(map, with_speed);
    out.total = out.feedforward + out.barrier + out.correction;
    return out;
}

ControlOutput omega_actual_from_transformed(const MobiusMap& map, const TransformedState& ts,
                                            const ControlGains& g) {
    if (std::abs(ts.rho - 1.0) <= map.pole_tolerance) {
        throw GeofenceError(ErrorCode::NearPole, "control evaluated at the inverse-map pole");
    }
    const double a = map.alpha;
    const Complex E = error_transformed(map, ts);
    const double den = barrier_denominator(map, E);
    const Complex d = ts.rho - 1.0;

    ControlOutput out;
    out.feedforward = (g.v / map.sigma) * std::abs(a * d * d / (1.0 - a * a));
    out.barrier = (g.kappa / map.sigma) * inner(ts.rho, unit(ts.gamma)) / den;
    out.correction = -xi_dot(map, ts, g.v);
    out.total = out.feedforward + out.barrier + out.correction;
    return out;
}

FeasibilityReport check_feasibility(const MobiusMap& map, Complex r0, double theta0) {
    if (std::abs(r0 + map.beta) <= map.pole_tolerance) {
        throw GeofenceError(ErrorCode::NearPole, "initial position at the map pole");
    }
    const double a = map.alpha;
    const double m = std::abs(r0);
    const double phi = r0 == Complex{0.0, 0.0} ? 0.0 : std::arg(r0);
    const double ss = map.sigma * map.sgn_delta;

    FeasibilityReport rep;
    rep.eta = std::sqrt(1.0 + 2.0 * a * m * std::cos(phi) + a * a * m * m);
    rep.eta_a = a * a + a * m * std::cos(phi) - ss * (std::sin(theta0) + a * m * std::sin(theta0 - phi));
    rep.eta_b = a * m * std::sin(phi) + ss * (std::cos(theta0) + a * m * std::cos(theta0 - phi));
    rep.lhs = rep.eta_a * rep.eta_a + rep.eta_b * rep.eta_b;
    rep.rhs = map.delta_T * map.delta_T * rep.eta * rep.eta;
    rep.feasible = rep.lhs < rep.rhs;

    ActualState s{r0, theta0, 1.0};
    rep.E0_abs = std::abs(error_transformed_from_actual(map, s));
    return rep;
}

BoundsReport bounds_report(const MobiusMap& map, double S0, const ControlGains& g) {
    BoundsReport rep;
    rep.S0 = S0;
    rep.Theta = std::sqrt(-std::expm1(-2.0 * S0));
    const double a_abs = std::abs(map.alpha);
    const double nu = map.radius_fCp;
    rep.nu_plus = (1.0 - rep.Theta) * a_abs + rep.Theta * nu;
    rep.nu_minus = (1.0 + rep.Theta) * a_abs - rep.Theta * nu;
    rep.E_bound = map.delta_T * rep.Theta;
    rep.rho_interval = Interval{std::min(rep.nu_plus, rep.nu_minus), std::max(rep.nu_plus, rep.nu_minus)};

    const double rho_max = rep.rho_interval.high;
    const double sigma_abs = std::abs(map.sigma);
    const double gain = std::abs(map.alpha / (1.0 - map.alpha * map.alpha));
    const double one_minus = 1.0 - rep.Theta;
    const double barrier_term = one_minus > 0.0
                                    ? (g.kappa / sigma_abs) * rho_max /
                                          (map.delta_T * map.delta_T * one_minus * one_minus)
                                    : std::numeric_limits<double>::infinity();
    rep.Omega_bound = (g.v / sigma_abs) * gain * (1.0 + rho_max) * (1.0 + rho_max) + barrier_term;
    const double s1 = 1.0 + sigma_abs + rho_max;
    rep.omega_bound = (g.v / sigma_abs) * gain * (s1 * s1 - sigma_abs * sigma_abs) + barrier_term;

    const double a = map.alpha;
    const double n2 = rep.nu_plus * rep.nu_plus;
    rep.r_circle.center = Complex{-(a * a - n2) / (a * (1.0 - n2)), 0.0};
    rep.r_circle.radius = std::abs(rep.nu_plus * (1.0 - a * a) / (a * (1.0 - n2)));
    rep.r_circle.inside = map.scene.scene_case == SceneCase::OuterEncirclesInner;
    return rep;
}

}  // namespace mgf
