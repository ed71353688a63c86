#include "mobius_geofence/plane_bridge.hpp"

#include "mobius_geofence/errors.hpp"

#include <cmath>

namespace mgf {

namespace {

void require_off_pole(const MobiusMap& map, Complex r) {
    if (std::abs(r + map.beta) <= map.pole_tolerance) {
        throw GeofenceError(ErrorCode::NearPole, "actual position at the map pole");
    }
}

void require_off_inverse_pole(const MobiusMap& map, Complex rho) {
    if (std::abs(rho - 1.0) <= map.pole_tolerance) {
        throw GeofenceError(ErrorCode::NearPole, "transformed position at the inverse-map pole");
    }
}

// sgn(Delta) (1 + alpha conj(r)) / (1 + alpha r), a unit complex number.
Complex heading_rotation(const MobiusMap& map, Complex r) {
    const Complex d = 1.0 + map.alpha * r;
    return map.sgn_delta * std::conj(d) / d;
}

}  // namespace

double transformed_speed(const MobiusMap& map, Complex r, double v) {
    require_off_pole(map, r);
    const double a = map.alpha;
    const Complex d = 1.0 + a * r;
    return std::abs(a * (1.0 - a * a) / (d * d)) * v;
}

double transformed_speed_from_rho(const MobiusMap& map, Complex rho, double v) {
    const double a = map.alpha;
    const Complex d = rho - 1.0;
    return std::abs(a * d * d / (1.0 - a * a)) * v;
}

TransformedState to_transformed(const MobiusMap& map, const ActualState& s) {
    require_off_pole(map, s.r);
    TransformedState out;
    out.rho = forward(map, s.r);
    out.gamma = std::arg(heading_rotation(map, s.r) * unit(s.theta));
    out.speed = transformed_speed(map, s.r, s.v);
    return out;
}

ActualState to_actual(const MobiusMap& map, const TransformedState& s, double v) {
    require_off_inverse_pole(map, s.rho);
    ActualState out;
    out.r = inverse(map, s.rho);
    // Inverse of e^{i gamma} = sgn(Delta) (1 + a r*) / (1 + a r) e^{i theta}.
    out.theta = std::arg(std::conj(heading_rotation(map, out.r)) * unit(s.gamma));
    out.v = v;
    return out;
}

double chi(const MobiusMap& map, const ActualState& s) {
    const double a = map.alpha;
    const double m = s.modulus();
    const double phi = s.phi();
    const double f1 = 1.0 + 2.0 * a * m * std::cos(phi) + a * a * m * m * std::cos(2.0 * phi);
    const double f2 = 2.0 * a * m * std::sin(phi) + a * a * m * m * std::sin(2.0 * phi);
    if (f1 * f1 + f2 * f2 < 1e-18) {
        throw GeofenceError(ErrorCode::DegenerateAngle, "chi undefined at the map pole");
    }
    return std::atan2(f2, f1);
}

double chi_dot(const MobiusMap& map, const ActualState& s) {
    require_off_pole(map, s.r);
    const double a = map.alpha;
    const double m = s.modulus();
    const double phi = s.phi();
    const double denom = std::norm(1.0 + a * s.r);
    return 2.0 * a * s.v * (std::sin(s.theta) + a * m * std::sin(s.theta - phi)) / denom;
}

double xi(const MobiusMap& /*map*/, const TransformedState& s) {
    const double m = s.modulus();
    const double psi = s.psi();
    const double g1 = 1.0 + m * m * std::cos(2.0 * psi) - 2.0 * m * std::cos(psi);
    const double g2 = m * m * std::sin(2.0 * psi) - 2.0 * m * std::sin(psi);
    if (g1 * g1 + g2 * g2 < 1e-18) {
        throw GeofenceError(ErrorCode::DegenerateAngle, "xi undefined at the inverse-map pole");
    }
    return std::atan2(g2, g1);
}

double xi_dot_unsigned_prefactor(const MobiusMap& map, const TransformedState& s, double v) {
    const double a = map.alpha;
    const double m = s.modulus();
    const double psi = s.psi();
    return (2.0 * a * v / (1.0 - a * a)) * (m * std::sin(s.gamma - psi) - std::sin(s.gamma));
}

double xi_dot(const MobiusMap& map, const TransformedState& s, double v) {
    return map.sgn_delta * xi_dot_unsigned_prefactor(map, s, v);
}

double phi_dot(const ActualState& s) {
    const double m = s.modulus();
    if (m <= 1e-12) {
        throw GeofenceError(ErrorCode::OriginSingularity, "phi_dot undefined at the origin");
    }
    return s.v * std::sin(s.theta - s.phi()) / m;
}

PolarPair polar_transformed(const MobiusMap& map, const ActualState& s) {
    require_off_pole(map, s.r);
    const double a = map.alpha;
    const double m = s.modulus();
    const double c = std::cos(s.phi());
    const double sn = std::sin(s.phi());
    const double num = a * a + m * m + 2.0 * a * m * c;
    const double den = 1.0 + a * a * m * m + 2.0 * a * m * c;
    PolarPair out;
    out.modulus = std::abs(a) * std::sqrt(num / den);
    // Signed numerators of |rho| cos(psi) and |rho| sin(psi); the common
    // positive factor 1 / |1 + a r|^2 does not affect atan2.
    const double x = a * (a * (1.0 + m * m) + (1.0 + a * a) * m * c);
    const double y = a * (1.0 - a * a) * m * sn;
    out.argument = std::atan2(y, x);
    return out;
}

PolarPair polar_actual(const MobiusMap& map, const TransformedState& s) {
    require_off_inverse_pole(map, s.rho);
    const double a = map.alpha;
    const double b = map.beta;
    const double m = s.modulus();
    const double c = std::cos(s.psi());
    const double sn = std::sin(s.psi());
    const double num = a * a + b * b * m * m - 2.0 * m * c;
    const double den = 1.0 + m * m - 2.0 * m * c;
    PolarPair out;
    out.modulus = std::sqrt(num / den);
    // r = (a^2 - rho)(conj(rho) - 1) / (a |rho - 1|^2); the 1/a factor carries
    // the sign needed for the branch.
    const double x = ((1.0 + a * a) * m * c - (a * a + m * m)) / a;
    const double y = (1.0 - a * a) * m * sn / a;
    out.argument = std::atan2(y, x);
    return out;
}

}  // namespace mgf
