#pragma once

// Barrier-Lyapunov turn-rate controller. The law is designed in the
// transformed plane, where the geofence is a uniform annulus of width
// delta_T around the image of the desired orbit, and mapped back to the
// actual plane through the heading-offset rates chi_dot / xi_dot.

#include "mobius_geofence/plane_bridge.hpp"

namespace mgf {

enum class Direction { Anticlockwise, Clockwise };

/// Denominators delta_T^2 - |E|^2 below this floor are treated as a barrier
/// breach rather than producing an unbounded control.
inline constexpr double kBarrierFloor = 1e-12;

struct ControlGains {
    double kappa = 0.02;
    double v = 1.0;
};

/// Turn rate split into its additive pieces:
/// total = feedforward + barrier + correction.
struct ControlOutput {
    double total = 0.0;
    double feedforward = 0.0;  // |rho_dot| / sigma
    double barrier = 0.0;      // kappa <rho, e^{i gamma}> / (sigma (delta_T^2 - |E|^2))
    double correction = 0.0;   // chi_dot (equivalently -xi_dot); 0 for Omega
};

struct ErrorPair {
    Complex e_actual{};
    Complex E_transformed{};
    double E_abs = 0.0;
};

struct FeasibilityReport {
    double eta_a = 0.0;
    double eta_b = 0.0;
    double eta = 0.0;
    double lhs = 0.0;  // eta_a^2 + eta_b^2
    double rhs = 0.0;  // delta_T^2 eta^2
    bool feasible = false;
    double E0_abs = 0.0;
};

struct Interval {
    double low = 0.0;
    double high = 0.0;
    bool contains(double x, double tol = 0.0) const { return x >= low - tol && x <= high + tol; }
};

struct BoundCircle {
    Complex center{};
    double radius = 0.0;
    /// true: r(t) stays inside the circle; false: r(t) stays outside it
    /// (desired circle encircling the boundary).
    bool inside = true;
};

struct BoundsReport {
    double S0 = 0.0;
    double Theta = 0.0;
    double nu_plus = 0.0;   // (1 - Theta)|alpha| + Theta |(lambda + alpha)/mu|
    double nu_minus = 0.0;  // (1 + Theta)|alpha| - Theta |(lambda + alpha)/mu|
    double E_bound = 0.0;
    Interval rho_interval{};
    double Omega_bound = 0.0;
    double omega_bound = 0.0;
    BoundCircle r_circle{};
};

Complex error_actual(const ActualState& s, Direction direction = Direction::Anticlockwise);

/// E = rho + i sigma e^{i gamma}.
Complex error_transformed(const MobiusMap& map, const TransformedState& ts);

/// E written in actual-plane quantities:
/// alpha (r + alpha)/(1 + alpha r) + i sigma sgn(Delta) (1 + alpha r*)/(1 + alpha r) e^{i theta}.
Complex error_transformed_from_actual(const MobiusMap& map, const ActualState& s);

ErrorPair errors(const MobiusMap& map, const ActualState& s);

/// S(E) = 0.5 ln(delta_T^2 / (delta_T^2 - |E|^2)). Throws BarrierViolated when
/// |E| >= delta_T.
double blf(Complex E, double delta_T);

ControlOutput omega_transformed(const MobiusMap& map, const TransformedState& ts, const ControlGains& g);
ControlOutput omega_actual_from_actual(const MobiusMap& map, const ActualState& s, const ControlGains& g);
ControlOutput omega_actual_from_transformed(const MobiusMap& map, const TransformedState& ts,
                                            const ControlGains& g);

FeasibilityReport check_feasibility(const MobiusMap& map, Complex r0, double theta0);

BoundsReport bounds_report(const MobiusMap& map, double S0, const ControlGains& g);

}  // namespace mgf
