#pragma once

// Property checks over randomized scenes and states. Shared by the CLI
// `verify` command and the acceptance binary.

#include "mobius_geofence/simulator.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mgf {

struct VerifyOptions {
    std::uint64_t seed = 20240917;
    /// Base count; a few properties scale it (round trips use 10x, region
    /// checks 3x, feasibility equivalence 10x).
    int samples = 1000;
    /// Self-test: evaluate the transformed-plane law with a perturbed alpha so
    /// that cross-law equality must fail.
    bool mutate_alpha = false;
};

struct PropertyResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;
    double tolerance = 0.0;
    long checked = 0;
    std::string detail;
    /// Informational entries are reported but never fail the suite.
    bool informational = false;
};

struct VerifyReport {
    std::vector<PropertyResult> results;

    bool all_passed() const;
    const PropertyResult* find(const std::string& name) const;
    void print(std::ostream& os) const;
};

VerifyReport run_verify(const VerifyOptions& options);

/// Scenes exercised by the suite: Example 1, Example 2 and a seeded set of
/// random nested pairs in standard form.
std::vector<StandardScene> verify_scenes(std::uint64_t seed);

/// The reference closed-loop scenario used throughout the tests.
SimConfig reference_config(RootKind kind);

}  // namespace mgf
