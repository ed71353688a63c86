#include "mobius_geofence/mobius_core.hpp"

#include "mobius_geofence/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mgf {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::TouchingOrIntersectingCircles: return "TouchingOrIntersectingCircles";
        case ErrorCode::ConcentricInput: return "ConcentricInput";
        case ErrorCode::DegenerateRadius: return "DegenerateRadius";
        case ErrorCode::ComplexRoots: return "ComplexRoots";
        case ErrorCode::UnitRoot: return "UnitRoot";
        case ErrorCode::NearPole: return "NearPole";
        case ErrorCode::DegenerateAngle: return "DegenerateAngle";
        case ErrorCode::OriginSingularity: return "OriginSingularity";
        case ErrorCode::BarrierViolated: return "BarrierViolated";
        case ErrorCode::InfeasibleStart: return "InfeasibleStart";
        case ErrorCode::PoleApproach: return "PoleApproach";
        case ErrorCode::BadInput: return "BadInput";
    }
    return "Unknown";
}

std::string_view to_string(SceneCase c) {
    return c == SceneCase::OuterEncirclesInner ? "OuterEncirclesInner" : "InnerEncirclesOuter";
}

std::string_view to_string(RootKind k) { return k == RootKind::Smaller ? "smaller" : "larger"; }

std::string_view to_string(Region r) {
    switch (r) {
        case Region::InsideDesired: return "InsideDesired";
        case Region::Annulus: return "Annulus";
        case Region::OutsideBoundary: return "OutsideBoundary";
        case Region::OnDesired: return "OnDesired";
        case Region::OnBoundary: return "OnBoundary";
    }
    return "Unknown";
}

namespace {

std::string describe(double lambda, double mu) {
    std::ostringstream os;
    os.precision(12);
    os << "lambda=" << lambda << ", mu=" << mu;
    return os.str();
}

}  // namespace

StandardScene StandardScene::from_parameters(double lambda, double mu, double disjoint_margin) {
    if (!std::isfinite(lambda) || !std::isfinite(mu)) {
        throw GeofenceError(ErrorCode::BadInput, "non-finite scene parameters");
    }
    if (!(mu > 0.0)) throw GeofenceError(ErrorCode::DegenerateRadius, describe(lambda, mu));
    const double margin = disjoint_margin * std::max(1.0, mu);
    if (std::abs(lambda) <= margin) {
        throw GeofenceError(ErrorCode::ConcentricInput,
                            "circles are already concentric (" + describe(lambda, mu) + ")");
    }
    StandardScene scene;
    scene.lambda = lambda;
    scene.mu = mu;
    if (mu - (1.0 + std::abs(lambda)) > margin) {
        scene.scene_case = SceneCase::OuterEncirclesInner;
    } else if ((1.0 - std::abs(lambda)) - mu > margin) {
        scene.scene_case = SceneCase::InnerEncirclesOuter;
    } else {
        throw GeofenceError(ErrorCode::TouchingOrIntersectingCircles,
                            "circles are not strictly nested (" + describe(lambda, mu) + ")");
    }
    return scene;
}

StandardScene normalize_scene(const SceneSpec& spec, bool desired_is_inner,
                              double disjoint_margin) {
    if (!(spec.inner_radius > 0.0) || !(spec.outer_radius > 0.0) ||
        !std::isfinite(spec.inner_radius) || !std::isfinite(spec.outer_radius)) {
        throw GeofenceError(ErrorCode::DegenerateRadius, "circle radii must be positive and finite");
    }
    const double margin = disjoint_margin * std::max(spec.inner_radius, spec.outer_radius);
    const double d = std::abs(spec.outer_center - spec.inner_center);
    if (d + spec.inner_radius >= spec.outer_radius - margin) {
        throw GeofenceError(ErrorCode::TouchingOrIntersectingCircles,
                            "the inner circle must lie strictly inside the outer circle");
    }

    const Complex desired_center = desired_is_inner ? spec.inner_center : spec.outer_center;
    const double desired_radius = desired_is_inner ? spec.inner_radius : spec.outer_radius;
    const Complex boundary_center = desired_is_inner ? spec.outer_center : spec.inner_center;
    const double boundary_radius = desired_is_inner ? spec.outer_radius : spec.inner_radius;

    const Complex offset = boundary_center - desired_center;
    if (std::abs(offset) <= margin) {
        throw GeofenceError(ErrorCode::ConcentricInput, "circles are already concentric");
    }

    Normalization norm;
    norm.translation = -desired_center;
    norm.rotation = -std::arg(offset);
    norm.scale = 1.0 / desired_radius;

    const double lambda = std::abs(offset) * norm.scale;
    const double mu = boundary_radius * norm.scale;
    StandardScene scene = StandardScene::from_parameters(lambda, mu, disjoint_margin);
    scene.normalization = norm;
    return scene;
}

RootPair solve_roots(const StandardScene& scene) {
    const double lambda = scene.lambda;
    const double mu = scene.mu;
    const double b = lambda * lambda - mu * mu + 1.0;
    // b^2 - 4 lambda^2 factored as (1 - p^2)(1 - q^2) with p = lambda - mu,
    // q = lambda + mu, which avoids cancellation near tangency.
    const double p = lambda - mu;
    const double q = lambda + mu;
    const double disc = (1.0 - p * p) * (1.0 - q * q);
    if (disc < 0.0) {
        throw GeofenceError(ErrorCode::ComplexRoots,
                            "scene quadratic has complex roots (" + describe(lambda, mu) + ")");
    }
    if (b == 0.0) {
        throw GeofenceError(ErrorCode::UnitRoot, "scene quadratic degenerates (" + describe(lambda, mu) + ")");
    }
    const double sq = std::sqrt(disc);
    const double t = -0.5 * (b + std::copysign(sq, b));
    const double big = t / lambda;
    const double small = 1.0 / big;
    if (std::abs(std::abs(small) - 1.0) < 1e-9) {
        throw GeofenceError(ErrorCode::UnitRoot,
                            "root at +/-1: pole lies on a circle (" + describe(lambda, mu) + ")");
    }
    return RootPair{small, big};
}

MobiusMap map_from_alpha(const StandardScene& scene, double alpha, RootKind kind,
                         double pole_tolerance) {
    MobiusMap m;
    m.alpha = alpha;
    m.beta = 1.0 / alpha;
    m.kind = kind;
    m.delta_diff = m.beta - m.alpha;
    m.sgn_delta = sgn(m.delta_diff);
    m.sigma = kind == RootKind::Smaller ? std::abs(alpha) : -std::abs(alpha);
    m.radius_fC = std::abs(alpha);
    m.radius_fCp = std::abs((scene.lambda + alpha) / scene.mu);
    m.delta_T = std::abs(m.radius_fCp - m.radius_fC);
    m.scene = scene;
    m.pole_tolerance = pole_tolerance;
    return m;
}

MobiusMap build_map(const StandardScene& scene, RootKind kind, double pole_tolerance) {
    const RootPair roots = solve_roots(scene);
    const double alpha = kind == RootKind::Smaller ? roots.smaller : roots.larger;
    return map_from_alpha(scene, alpha, kind, pole_tolerance);
}

Complex forward(const MobiusMap& map, Complex z) {
    const double a = map.alpha;
    if (std::abs(z + map.beta) <= map.pole_tolerance) {
        throw GeofenceError(ErrorCode::NearPole, "forward map evaluated at its pole z = -1/alpha");
    }
    return a * (z + a) / (1.0 + a * z);
}

Complex inverse(const MobiusMap& map, Complex w) {
    const double a = map.alpha;
    if (std::abs(w - 1.0) <= map.pole_tolerance) {
        throw GeofenceError(ErrorCode::NearPole, "inverse map evaluated at its pole w = 1");
    }
    return (a * a - w) / (a * (w - 1.0));
}

Complex forward_derivative(const MobiusMap& map, Complex z) {
    const double a = map.alpha;
    if (std::abs(z + map.beta) <= map.pole_tolerance) {
        throw GeofenceError(ErrorCode::NearPole, "derivative evaluated at the pole");
    }
    const Complex d = 1.0 + a * z;
    return a * (1.0 - a * a) / (d * d);
}

namespace {

// Signed residuals against the two circles of a plane, plus which one is the
// inner circle of the nesting.
struct PlaneCircles {
    double desired_residual;   // distance-to-center minus radius
    double boundary_residual;
    bool desired_is_inner;
};

PlaneCircles residuals(const MobiusMap& map, Complex p, Plane plane) {
    if (plane == Plane::Actual) {
        return {std::abs(p) - 1.0, std::abs(p - map.scene.lambda) - map.scene.mu,
                map.scene.scene_case == SceneCase::OuterEncirclesInner};
    }
    const double m = std::abs(p);
    return {m - map.radius_fC, m - map.radius_fCp, map.radius_fC < map.radius_fCp};
}

}  // namespace

Region classify_region(const MobiusMap& map, Complex point, Plane plane, double tolerance) {
    const PlaneCircles c = residuals(map, point, plane);
    if (std::abs(c.desired_residual) <= tolerance) return Region::OnDesired;
    if (std::abs(c.boundary_residual) <= tolerance) return Region::OnBoundary;
    const double inner = c.desired_is_inner ? c.desired_residual : c.boundary_residual;
    const double outer = c.desired_is_inner ? c.boundary_residual : c.desired_residual;
    if (inner < 0.0) return Region::InsideDesired;
    if (outer > 0.0) return Region::OutsideBoundary;
    return Region::Annulus;
}

bool within_geofence(const StandardScene& scene, Complex z) {
    const double d = std::abs(z - scene.lambda);
    return scene.scene_case == SceneCase::OuterEncirclesInner ? d < scene.mu : d > scene.mu;
}

bool within_transformed_region(const MobiusMap& map, Complex w) {
    const double m = std::abs(w);
    return map.radius_fC < map.radius_fCp ? m < map.radius_fCp : m > map.radius_fCp;
}

}  // namespace mgf
