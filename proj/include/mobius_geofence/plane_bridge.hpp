#pragma once

// Kinematic state conversion between the actual plane (z) and the transformed
// plane (w) of a concentrizing Möbius map. Headings are carried as explicit
// unit vectors and resolved with atan2, so no mod-pi ambiguity is left.

#include "mobius_geofence/mobius_core.hpp"

namespace mgf {

struct ActualState {
    Complex r{0.0, 0.0};  // position
    double theta = 0.0;   // heading, (-pi, pi]
    double v = 1.0;       // forward speed, > 0

    double modulus() const { return std::abs(r); }
    /// Position angle; 0 at the origin by convention.
    double phi() const { return r == Complex{0.0, 0.0} ? 0.0 : std::arg(r); }
};

struct TransformedState {
    Complex rho{0.0, 0.0};
    double gamma = 0.0;
    double speed = 0.0;  // |rho_dot|

    double modulus() const { return std::abs(rho); }
    double psi() const { return rho == Complex{0.0, 0.0} ? 0.0 : std::arg(rho); }
};

struct PolarPair {
    double modulus = 0.0;
    double argument = 0.0;
};

TransformedState to_transformed(const MobiusMap& map, const ActualState& s);
ActualState to_actual(const MobiusMap& map, const TransformedState& s, double v);

/// |rho_dot| from the actual-plane position: |alpha (1 - alpha^2) / (1 + alpha r)^2| v.
double transformed_speed(const MobiusMap& map, Complex r, double v);
/// |rho_dot| from the transformed-plane position: |alpha (rho - 1)^2 / (1 - alpha^2)| v.
double transformed_speed_from_rho(const MobiusMap& map, Complex rho, double v);

/// Heading offset chi = atan2(f2, f1), with f1 + i f2 = (1 + alpha r)^2, so
/// that gamma = theta - chi (mod pi).
double chi(const MobiusMap& map, const ActualState& s);
double chi_dot(const MobiusMap& map, const ActualState& s);

/// Heading offset xi = atan2(g2, g1), with g1 + i g2 = (rho - 1)^2, so that
/// theta = gamma - xi (mod pi).
double xi(const MobiusMap& map, const TransformedState& s);

/// Time derivative of xi along the transformed flow:
/// 2 v |alpha / (1 - alpha^2)| [|rho| sin(gamma - psi) - sin(gamma)].
/// This equals -chi_dot at corresponding states.
double xi_dot(const MobiusMap& map, const TransformedState& s, double v);

/// The same bracket with the prefactor 2 alpha v / (1 - alpha^2), i.e. without
/// the absolute value. It differs from xi_dot by sgn(beta - alpha); kept so the
/// verify suite can report the discrepancy.
double xi_dot_unsigned_prefactor(const MobiusMap& map, const TransformedState& s, double v);

/// Rate of the position angle: v sin(theta - phi) / |r|.
double phi_dot(const ActualState& s);

/// (|rho|, psi) from actual-plane polar coordinates via the closed forms.
PolarPair polar_transformed(const MobiusMap& map, const ActualState& s);
/// (|r|, phi) from transformed-plane polar coordinates via the closed forms.
PolarPair polar_actual(const MobiusMap& map, const TransformedState& s);

}  // namespace mgf
