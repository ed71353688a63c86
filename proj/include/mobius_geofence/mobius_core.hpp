#pragma once

// Concentrizing Möbius map for a nested pair of circles.
//
// Everything here works in the normalized frame where the desired circle is
// |z| = 1 and the boundary circle is |z - lambda| = mu with real lambda. The
// map is w = (z + alpha) / (z + 1/alpha) = alpha (z + alpha) / (1 + alpha z),
// with alpha a real root of
//
//     lambda alpha^2 + (lambda^2 - mu^2 + 1) alpha + lambda = 0.
//
// The magnitude-wise smaller root keeps the nesting order of the two circles
// in the image plane, the larger one swaps it.

#include "mobius_geofence/angles.hpp"

#include <string_view>
#include <utility>

namespace mgf {

inline constexpr double kDefaultPoleTolerance = 1e-9;
inline constexpr double kDefaultDisjointMargin = 1e-6;  // relative to max radius
inline constexpr double kDefaultRegionTolerance = 1e-9;

enum class SceneCase { OuterEncirclesInner, InnerEncirclesOuter };
enum class RootKind { Smaller, Larger };
enum class Plane { Actual, Transformed };

/// Region tags are nesting positions within a plane: InsideDesired is the disk
/// bounded by the inner circle of the pair and OutsideBoundary the exterior of
/// the outer circle. The names follow the geofence layout, where the desired
/// orbit is the inner circle.
enum class Region { InsideDesired, Annulus, OutsideBoundary, OnDesired, OnBoundary };

std::string_view to_string(SceneCase c);
std::string_view to_string(RootKind k);
std::string_view to_string(Region r);

/// Circle pair in original (e.g. SI) coordinates, before normalization.
struct SceneSpec {
    Complex inner_center{0.0, 0.0};
    double inner_radius = 1.0;
    Complex outer_center{0.0, 0.0};
    double outer_radius = 2.0;
};

/// Similarity that takes original coordinates to the normalized frame:
/// translate, then rotate, then scale.
struct Normalization {
    Complex translation{0.0, 0.0};
    double rotation = 0.0;
    double scale = 1.0;

    Complex to_standard(Complex z) const { return (z + translation) * unit(rotation) * scale; }
    Complex to_original(Complex z) const { return z / scale * unit(-rotation) - translation; }
    double heading_to_standard(double theta) const { return wrap_angle(theta + rotation); }
    double heading_to_original(double theta) const { return wrap_angle(theta - rotation); }
};

struct StandardScene {
    double lambda = 0.0;
    double mu = 0.0;
    SceneCase scene_case = SceneCase::OuterEncirclesInner;
    Normalization normalization{};

    /// Builds a scene that is already in standard form (identity normalization).
    /// lambda may be negative here.
    static StandardScene from_parameters(double lambda, double mu,
                                         double disjoint_margin = kDefaultDisjointMargin);
};

struct MobiusMap {
    double alpha = 0.5;
    double beta = 2.0;
    RootKind kind = RootKind::Smaller;
    double delta_diff = 1.5;  // beta - alpha
    double sgn_delta = 1.0;
    double sigma = 0.5;        // +|alpha| for Smaller, -|alpha| for Larger
    double radius_fC = 0.5;    // image radius of the desired circle
    double radius_fCp = 0.63;  // image radius of the boundary circle
    double delta_T = 0.13;     // radial gap between the concentric images
    StandardScene scene{};
    double pole_tolerance = kDefaultPoleTolerance;
};

struct RootPair {
    double smaller = 0.0;
    double larger = 0.0;
};

StandardScene normalize_scene(const SceneSpec& spec, bool desired_is_inner,
                              double disjoint_margin = kDefaultDisjointMargin);

RootPair solve_roots(const StandardScene& scene);

MobiusMap build_map(const StandardScene& scene, RootKind kind,
                    double pole_tolerance = kDefaultPoleTolerance);

/// Builds a map from an explicit alpha. Used by the verify suite's mutation
/// self-test; the usual entry point is build_map.
MobiusMap map_from_alpha(const StandardScene& scene, double alpha, RootKind kind,
                         double pole_tolerance = kDefaultPoleTolerance);

Complex forward(const MobiusMap& map, Complex z);
Complex inverse(const MobiusMap& map, Complex w);

/// Complex derivative of forward: alpha (1 - alpha^2) / (1 + alpha z)^2.
Complex forward_derivative(const MobiusMap& map, Complex z);

Region classify_region(const MobiusMap& map, Complex point, Plane plane,
                       double tolerance = kDefaultRegionTolerance);

/// True when the point is on the admissible side of the boundary circle, i.e.
/// the same side as the desired circle (inside C' for OuterEncirclesInner,
/// outside C' for InnerEncirclesOuter). Evaluated in the normalized frame.
bool within_geofence(const StandardScene& scene, Complex z);

/// Transformed-plane counterpart: |w| on the same side of radius_fCp as
/// radius_fC (P1 for the trajectory-constraining layout, P2 for the
/// obstacle-avoidance layout).
bool within_transformed_region(const MobiusMap& map, Complex w);

}  // namespace mgf
