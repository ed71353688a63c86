#include <doctest.h>

#include "mobius_geofence/errors.hpp"
#include "mobius_geofence/mobius_core.hpp"

#include <cmath>

using namespace mgf;

namespace {

// Textbook quadratic formula in long double; independent of the
// cancellation-free evaluation used by solve_roots.
std::pair<double, double> naive_roots(long double lambda, long double mu) {
    const long double b = lambda * lambda - mu * mu + 1.0L;
    const long double disc = b * b - 4.0L * lambda * lambda;
    const long double r1 = (-b + std::sqrt(disc)) / (2.0L * lambda);
    const long double r2 = (-b - std::sqrt(disc)) / (2.0L * lambda);
    return std::abs(r1) < std::abs(r2) ? std::pair<double, double>{double(r1), double(r2)}
                                       : std::pair<double, double>{double(r2), double(r1)};
}

StandardScene example1() { return StandardScene::from_parameters(0.5, std::sqrt(2.5)); }
StandardScene example2() { return StandardScene::from_parameters(0.4, 0.4); }

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const GeofenceError& e) {
        return e.code();
    }
    FAIL("expected a GeofenceError");
    return ErrorCode::BadInput;
}

}  // namespace

TEST_CASE("roots of the two worked examples") {
    const RootPair r1 = solve_roots(example1());
    CHECK(r1.smaller == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r1.larger == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(r1.smaller - 0.5) < 1e-12);
    CHECK(std::abs(r1.larger - 2.0) < 1e-12);

    const RootPair r2 = solve_roots(example2());
    CHECK(std::abs(r2.smaller + 0.5) < 1e-12);
    CHECK(std::abs(r2.larger + 2.0) < 1e-12);
}

TEST_CASE("roots agree with the naive formula and are reciprocal") {
    for (auto [lambda, mu] : {std::pair{0.3, 1.9}, std::pair{0.1, 1.2}, std::pair{0.7, 2.5}, std::pair{0.2, 0.5},
                              std::pair{0.45, 0.3}, std::pair{-0.5, std::sqrt(2.5)}}) {
        const StandardScene s = StandardScene::from_parameters(lambda, mu);
        const RootPair r = solve_roots(s);
        const auto [ns, nl] = naive_roots(lambda, mu);
        CHECK(r.smaller == doctest::Approx(ns).epsilon(1e-12));
        CHECK(r.larger == doctest::Approx(nl).epsilon(1e-12));
        CHECK(r.smaller * r.larger == doctest::Approx(1.0).epsilon(1e-14));
        for (double a : {r.smaller, r.larger}) {
            const double residual = lambda * a * a + (lambda * lambda - mu * mu + 1.0) * a + lambda;
            CHECK(std::abs(residual) < 1e-12 * std::max(1.0, a * a));
        }
    }
}

TEST_CASE("near-tangent scene keeps the reciprocal root relation") {
    // Boundary almost touching the desired circle from outside.
    const StandardScene s = StandardScene::from_parameters(0.5, 1.5 + 1e-5);
    const RootPair r = solve_roots(s);
    CHECK(r.smaller * r.larger == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(r.smaller) < 1.0);
}

TEST_CASE("image radii and annulus width") {
    const MobiusMap s = build_map(example1(), RootKind::Smaller);
    CHECK(s.radius_fC == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.radius_fCp == doctest::Approx(std::sqrt(0.4)).epsilon(1e-12));
    CHECK(std::abs(s.delta_T - 0.1325) <= 5e-5);
    CHECK(s.sigma == doctest::Approx(0.5));
    CHECK(s.sgn_delta == 1.0);

    const MobiusMap l = build_map(example1(), RootKind::Larger);
    CHECK(l.radius_fC == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(l.radius_fCp == doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));
    CHECK(std::abs(l.delta_T - 0.4189) <= 5e-5);
    CHECK(l.sigma == doctest::Approx(-2.0));
    CHECK(l.sgn_delta == -1.0);

    // Desired circle encircling the boundary: |(0.4 - 0.5) / 0.4| = 0.25.
    const MobiusMap e2 = build_map(example2(), RootKind::Smaller);
    CHECK(e2.radius_fC == doctest::Approx(0.5));
    CHECK(e2.radius_fCp == doctest::Approx(0.25));
    CHECK(e2.delta_T == doctest::Approx(0.25));
}

TEST_CASE("circles map to concentric circles") {
    for (RootKind k : {RootKind::Smaller, RootKind::Larger}) {
        for (const StandardScene& sc : {example1(), example2()}) {
            const MobiusMap m = build_map(sc, k);
            for (int i = 0; i < 360; ++i) {
                const double t = deg2rad(i + 0.25);
                CHECK(std::abs(forward(m, unit(t))) == doctest::Approx(m.radius_fC).epsilon(1e-12));
                CHECK(std::abs(forward(m, sc.lambda + sc.mu * unit(t))) ==
                      doctest::Approx(m.radius_fCp).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("forward and inverse round trip and fixed points") {
    const MobiusMap m = build_map(example1(), RootKind::Smaller);
    CHECK(std::abs(forward(m, Complex{0.0, 0.0}) - Complex{0.25, 0.0}) < 1e-15);
    for (Complex z : {Complex{0.3, -0.2}, Complex{-0.9, -0.6653}, Complex{1.7, 0.4}}) {
        CHECK(std::abs(inverse(m, forward(m, z)) - z) < 1e-14);
    }
    // f(z) = alpha (z + alpha) / (1 + alpha z) maps -alpha to 0.
    CHECK(std::abs(forward(m, Complex{-m.alpha, 0.0})) < 1e-15);
}

TEST_CASE("poles raise NearPole") {
    const MobiusMap m = build_map(example1(), RootKind::Smaller);
    CHECK(code_of([&] { forward(m, Complex{-2.0, 0.0}); }) == ErrorCode::NearPole);
    CHECK(code_of([&] { inverse(m, Complex{1.0, 0.0}); }) == ErrorCode::NearPole);
    CHECK(code_of([&] { forward_derivative(m, Complex{-2.0, 1e-12}); }) == ErrorCode::NearPole);
}

TEST_CASE("degenerate scenes are rejected") {
    CHECK(code_of([] { StandardScene::from_parameters(0.5, 1.5); }) == ErrorCode::TouchingOrIntersectingCircles);
    CHECK(code_of([] { StandardScene::from_parameters(0.5, 1.0); }) == ErrorCode::TouchingOrIntersectingCircles);
    CHECK(code_of([] { StandardScene::from_parameters(0.0, 2.0); }) == ErrorCode::ConcentricInput);
    CHECK(code_of([] { StandardScene::from_parameters(0.5, 0.0); }) == ErrorCode::DegenerateRadius);
    CHECK(code_of([] { StandardScene::from_parameters(NAN, 1.0); }) == ErrorCode::BadInput);

    SceneSpec overlap{Complex{0.0, 0.0}, 1.0, Complex{1.5, 0.0}, 1.2};
    CHECK(code_of([&] { normalize_scene(overlap, true); }) == ErrorCode::TouchingOrIntersectingCircles);
    SceneSpec concentric{Complex{1.0, 1.0}, 1.0, Complex{1.0, 1.0}, 3.0};
    CHECK(code_of([&] { normalize_scene(concentric, true); }) == ErrorCode::ConcentricInput);
    SceneSpec zero{Complex{0.0, 0.0}, 0.0, Complex{0.5, 0.0}, 2.0};
    CHECK(code_of([&] { normalize_scene(zero, true); }) == ErrorCode::DegenerateRadius);
}

TEST_CASE("normalization puts the desired circle at the origin with unit radius") {
    const SceneSpec spec{Complex{2.0, -1.0}, 0.5, Complex{1.7, -0.6}, 1.5};
    for (bool desired_inner : {true, false}) {
        const StandardScene s = normalize_scene(spec, desired_inner);
        const Normalization& n = s.normalization;
        const Complex dc = desired_inner ? spec.inner_center : spec.outer_center;
        const double dr = desired_inner ? spec.inner_radius : spec.outer_radius;
        const Complex bc = desired_inner ? spec.outer_center : spec.inner_center;
        const double br = desired_inner ? spec.outer_radius : spec.inner_radius;
        CHECK(std::abs(n.to_standard(dc)) < 1e-14);
        CHECK(std::abs(n.to_standard(dc + dr * unit(0.3))) == doctest::Approx(1.0));
        const Complex b = n.to_standard(bc);
        CHECK(std::abs(b.imag()) < 1e-14);
        CHECK(b.real() == doctest::Approx(s.lambda));
        CHECK(s.mu == doctest::Approx(br / dr));
        CHECK(s.scene_case == (desired_inner ? SceneCase::OuterEncirclesInner : SceneCase::InnerEncirclesOuter));
        const Complex z{0.37, 2.2};
        CHECK(std::abs(n.to_original(n.to_standard(z)) - z) < 1e-14);
        CHECK(n.heading_to_original(n.heading_to_standard(1.1)) == doctest::Approx(1.1));
    }
}

TEST_CASE("region classification follows nesting in each plane") {
    const StandardScene sc = example1();
    const MobiusMap s = build_map(sc, RootKind::Smaller);
    const MobiusMap l = build_map(sc, RootKind::Larger);

    CHECK(classify_region(s, Complex{0.0, 0.0}, Plane::Actual) == Region::InsideDesired);
    CHECK(classify_region(s, Complex{1.2, 0.0}, Plane::Actual) == Region::Annulus);
    CHECK(classify_region(s, Complex{3.0, 0.0}, Plane::Actual) == Region::OutsideBoundary);
    CHECK(classify_region(s, Complex{0.0, 1.0}, Plane::Actual) == Region::OnDesired);

    // Smaller root keeps the tag, larger swaps inside and outside.
    CHECK(classify_region(s, forward(s, Complex{0.0, 0.0}), Plane::Transformed) == Region::InsideDesired);
    CHECK(classify_region(l, forward(l, Complex{0.0, 0.0}), Plane::Transformed) == Region::OutsideBoundary);
    CHECK(classify_region(l, forward(l, Complex{1.2, 0.0}), Plane::Transformed) == Region::Annulus);
    CHECK(classify_region(l, forward(l, Complex{3.0, 0.0}), Plane::Transformed) == Region::InsideDesired);

    CHECK(within_geofence(sc, Complex{1.2, 0.0}));
    CHECK_FALSE(within_geofence(sc, Complex{2.2, 0.0}));
    CHECK(within_transformed_region(s, forward(s, Complex{1.2, 0.0})));
    CHECK(within_transformed_region(l, forward(l, Complex{1.2, 0.0})));
    CHECK_FALSE(within_transformed_region(l, forward(l, Complex{2.2, 0.0})));

    const StandardScene sc2 = example2();
    CHECK(within_geofence(sc2, Complex{-0.5, 0.0}));
    CHECK_FALSE(within_geofence(sc2, Complex{0.4, 0.1}));
}

TEST_CASE("enum names") {
    CHECK(to_string(RootKind::Smaller) == "smaller");
    CHECK(to_string(RootKind::Larger) == "larger");
    CHECK(to_string(ErrorCode::BarrierViolated) == "BarrierViolated");
    CHECK(to_string(Region::Annulus) == "Annulus");
}
