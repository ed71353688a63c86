#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace mgf {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    double w = std::remainder(a, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

/// Distance between two angles on the circle, in [0, pi].
inline double angle_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

/// Distance between two angles taken modulo pi, in [0, pi/2]. Compares the
/// doubled angles so that a and a + pi are the same direction line.
inline double angle_distance_mod_pi(double a, double b) {
    return 0.5 * std::abs(wrap_angle(2.0 * (a - b)));
}

inline Complex unit(double angle) { return std::polar(1.0, angle); }

/// Real inner product <z1, z2> = Re(conj(z1) z2).
inline double inner(Complex z1, Complex z2) { return (std::conj(z1) * z2).real(); }

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace mgf
