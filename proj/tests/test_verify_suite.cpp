#include <doctest.h>

#include "mobius_geofence/verify_suite.hpp"

#include <sstream>

using namespace mgf;

TEST_CASE("default suite passes") {
    VerifyOptions opt;
    opt.samples = 300;
    const VerifyReport rep = run_verify(opt);
    for (const auto& r : rep.results) {
        CAPTURE(r.name);
        CAPTURE(r.worst);
        CHECK((r.informational || r.passed));
        CHECK(r.checked > 0);
    }
    CHECK(rep.all_passed());
    for (const char* name : {"map_roundtrip", "circle_preservation", "region_commutation", "chi_dot_fd", "xi_dot_fd",
                             "phi_dot_fd", "cross_law_omega", "chi_xi_cancellation", "rotation_sense",
                             "rk4_dt_halving", "polar_inverse_closed_form"}) {
        CHECK(rep.find(name) != nullptr);
    }
    std::ostringstream os;
    rep.print(os);
    CHECK(os.str().find("all properties passed") != std::string::npos);
}

TEST_CASE("unsigned xi_dot prefactor is reported, not failed") {
    VerifyOptions opt;
    opt.samples = 100;
    const VerifyReport rep = run_verify(opt);
    const PropertyResult* p = rep.find("xi_dot_printed_prefactor");
    REQUIRE(p != nullptr);
    CHECK(p->informational);
    CHECK_FALSE(p->passed);
    CHECK(rep.all_passed());
}

TEST_CASE("mutation self-test trips cross-law equality") {
    VerifyOptions opt;
    opt.samples = 100;
    opt.mutate_alpha = true;
    const VerifyReport rep = run_verify(opt);
    CHECK_FALSE(rep.all_passed());
    REQUIRE(rep.find("cross_law_omega") != nullptr);
    CHECK_FALSE(rep.find("cross_law_omega")->passed);
    CHECK(rep.find("map_roundtrip")->passed);
}

TEST_CASE("seeds change samples but not verdicts") {
    for (std::uint64_t seed : {1ULL, 99ULL}) {
        VerifyOptions opt;
        opt.seed = seed;
        opt.samples = 100;
        CHECK(run_verify(opt).all_passed());
    }
    VerifyOptions bad;
    bad.samples = 0;
    CHECK_THROWS_AS(run_verify(bad), GeofenceError);
}
