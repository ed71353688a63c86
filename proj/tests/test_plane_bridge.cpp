#include <doctest.h>

#include "mobius_geofence/errors.hpp"
#include "mobius_geofence/plane_bridge.hpp"

#include <cmath>

using namespace mgf;

namespace {

MobiusMap example1(RootKind k) { return build_map(StandardScene::from_parameters(0.5, std::sqrt(2.5)), k); }

ActualState start() { return ActualState{Complex{-0.9, -0.6653}, deg2rad(-60.0), 1.0}; }

// Heading of the image motion, read off the complex derivative.
double image_heading(const MobiusMap& m, const ActualState& s) {
    return std::arg(forward_derivative(m, s.r) * unit(s.theta));
}

template <class F>
double central_rate(F angle_at, double h = 1e-6) {
    return wrap_angle(angle_at(h) - angle_at(-h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("initial state in the transformed plane, smaller root") {
    const TransformedState ts = to_transformed(example1(RootKind::Smaller), start());
    CHECK(std::abs(ts.rho.real() - 0.0016) <= 5e-4);
    CHECK(std::abs(ts.rho.imag() + 0.6039) <= 5e-4);
    CHECK(std::abs(rad2deg(ts.gamma) - 2.3326) <= 1e-3);
}

TEST_CASE("initial state in the transformed plane, larger root") {
    const TransformedState ts = to_transformed(example1(RootKind::Larger), start());
    CHECK(std::abs(ts.rho.real() - 0.0044) <= 5e-4);
    CHECK(std::abs(ts.rho.imag() - 1.656) <= 5e-4);
    CHECK(std::abs(rad2deg(ts.gamma) - 2.0313) <= 1e-3);
}

TEST_CASE("initial polar coordinates") {
    const ActualState s = start();
    CHECK(std::abs(s.modulus() - 1.1192) <= 5e-5);
    CHECK(std::abs(rad2deg(s.phi()) + 143.5274) <= 1e-3);
}

TEST_CASE("transformed heading equals the heading of the image motion") {
    for (RootKind k : {RootKind::Smaller, RootKind::Larger}) {
        const MobiusMap m = example1(k);
        for (int i = 0; i < 72; ++i) {
            const ActualState s{Complex{0.2 + 0.01 * i, -0.4 + 0.015 * i}, deg2rad(5.0 * i - 170.0), 1.0};
            const TransformedState ts = to_transformed(m, s);
            CHECK(angle_distance(ts.gamma, image_heading(m, s)) < 1e-12);
            CHECK(ts.speed == doctest::Approx(std::abs(forward_derivative(m, s.r))).epsilon(1e-12));
            CHECK(ts.speed == doctest::Approx(transformed_speed_from_rho(m, ts.rho, 1.0)).epsilon(1e-12));
            // gamma = theta - chi and theta = gamma - xi, both modulo pi.
            CHECK(angle_distance_mod_pi(ts.gamma, s.theta - chi(m, s)) < 1e-12);
            CHECK(angle_distance_mod_pi(s.theta, ts.gamma - xi(m, ts)) < 1e-12);
        }
    }
}

TEST_CASE("state round trip through both planes") {
    for (RootKind k : {RootKind::Smaller, RootKind::Larger}) {
        const MobiusMap m = example1(k);
        const ActualState s{Complex{1.3, 0.7}, 2.9, 0.8};
        const ActualState back = to_actual(m, to_transformed(m, s), s.v);
        CHECK(std::abs(back.r - s.r) < 1e-13);
        CHECK(angle_distance(back.theta, s.theta) < 1e-13);
        CHECK(back.v == s.v);
    }
}

TEST_CASE("chi_dot at the initial state") {
    // Frozen from direct evaluation and checked against a central difference.
    const ActualState s = start();
    const MobiusMap ms = example1(RootKind::Smaller);
    const MobiusMap ml = example1(RootKind::Larger);
    CHECK(chi_dot(ms, s) == doctest::Approx(-0.7502952).epsilon(1e-6));
    CHECK(chi_dot(ml, s) == doctest::Approx(2.2536775).epsilon(1e-6));
    for (const MobiusMap* m : {&ms, &ml}) {
        auto chi_at = [&](double dt) {
            ActualState q = s;
            q.r += dt * s.v * unit(s.theta);
            return chi(*m, q);
        };
        CHECK(chi_dot(*m, s) == doctest::Approx(central_rate(chi_at)).epsilon(1e-7));
    }
}

TEST_CASE("xi_dot is the negative of chi_dot") {
    for (RootKind k : {RootKind::Smaller, RootKind::Larger}) {
        const MobiusMap m = example1(k);
        for (int i = 0; i < 50; ++i) {
            const ActualState s{Complex{-1.0 + 0.04 * i, 0.6 - 0.03 * i}, deg2rad(7.0 * i), 1.3};
            const TransformedState ts = to_transformed(m, s);
            CHECK(chi_dot(m, s) + xi_dot(m, ts, s.v) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("xi_dot against a central difference along the transformed flow") {
    for (RootKind k : {RootKind::Smaller, RootKind::Larger}) {
        const MobiusMap m = example1(k);
        const TransformedState ts = to_transformed(m, start());
        auto xi_at = [&](double dt) {
            TransformedState q = ts;
            q.rho += dt * ts.speed * unit(ts.gamma);
            return xi(m, q);
        };
        CHECK(xi_dot(m, ts, 1.0) == doctest::Approx(central_rate(xi_at)).epsilon(1e-7));
    }
}

TEST_CASE("unsigned prefactor differs from xi_dot exactly when beta < alpha") {
    const TransformedState ts = to_transformed(example1(RootKind::Smaller), start());
    const MobiusMap ms = example1(RootKind::Smaller);
    CHECK(xi_dot_unsigned_prefactor(ms, ts, 1.0) == doctest::Approx(xi_dot(ms, ts, 1.0)));

    const MobiusMap ml = example1(RootKind::Larger);
    const TransformedState tl = to_transformed(ml, start());
    CHECK(xi_dot_unsigned_prefactor(ml, tl, 1.0) == doctest::Approx(-xi_dot(ml, tl, 1.0)));
}

TEST_CASE("xi_dot vanishes for gamma = psi = 0") {
    const MobiusMap m = example1(RootKind::Smaller);
    for (double mod : {0.2, 0.55, 3.0}) {
        TransformedState ts;
        ts.rho = Complex{mod, 0.0};
        ts.gamma = 0.0;
        CHECK(xi_dot(m, ts, 1.0) == doctest::Approx(0.0));
    }
}

TEST_CASE("phi_dot") {
    const ActualState radial{Complex{0.0, 2.0}, kPi / 2, 1.0};
    CHECK(phi_dot(radial) == doctest::Approx(0.0));
    const ActualState tangent{Complex{2.0, 0.0}, kPi / 2, 1.0};
    CHECK(phi_dot(tangent) == doctest::Approx(0.5));
    const ActualState s = start();
    auto phi_at = [&](double dt) { return std::arg(s.r + dt * unit(s.theta)); };
    CHECK(phi_dot(s) == doctest::Approx(central_rate(phi_at)).epsilon(1e-7));
}

TEST_CASE("polar closed forms agree with direct evaluation") {
    for (RootKind k : {RootKind::Smaller, RootKind::Larger}) {
        const MobiusMap m = example1(k);
        for (int i = 0; i < 100; ++i) {
            const ActualState s{std::polar(0.1 + 0.03 * i, deg2rad(11.0 * i - 180.0)), 0.0, 1.0};
            if (std::abs(s.r + m.beta) < 1e-3) continue;
            const Complex w = forward(m, s.r);
            const PolarPair p = polar_transformed(m, s);
            CHECK(p.modulus == doctest::Approx(std::abs(w)).epsilon(1e-12));
            CHECK(angle_distance(p.argument, std::arg(w)) < 1e-12);

            const TransformedState ts = to_transformed(m, s);
            const PolarPair q = polar_actual(m, ts);
            CHECK(q.modulus == doctest::Approx(std::abs(s.r)).epsilon(1e-12));
            CHECK(angle_distance(q.argument, std::arg(s.r)) < 1e-11);
        }
    }
}

TEST_CASE("inverse modulus closed form at rho = 0 gives |alpha|") {
    const MobiusMap m = example1(RootKind::Smaller);
    TransformedState ts;
    CHECK(polar_actual(m, ts).modulus == doctest::Approx(0.5));
}

TEST_CASE("degenerate points raise typed errors") {
    const MobiusMap m = example1(RootKind::Smaller);
    const ActualState at_pole{Complex{-2.0, 0.0}, 0.0, 1.0};
    CHECK_THROWS_AS(to_transformed(m, at_pole), GeofenceError);
    try {
        chi(m, at_pole);
        FAIL("chi at the pole should throw");
    } catch (const GeofenceError& e) {
        CHECK(e.code() == ErrorCode::DegenerateAngle);
    }
    try {
        phi_dot(ActualState{Complex{0.0, 0.0}, 0.0, 1.0});
        FAIL("phi_dot at the origin should throw");
    } catch (const GeofenceError& e) {
        CHECK(e.code() == ErrorCode::OriginSingularity);
    }
    TransformedState ts;
    ts.rho = Complex{1.0, 0.0};
    try {
        to_actual(m, ts, 1.0);
        FAIL("to_actual at rho = 1 should throw");
    } catch (const GeofenceError& e) {
        CHECK(e.code() == ErrorCode::NearPole);
    }
}
