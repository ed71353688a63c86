#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mgf {

enum class ErrorCode {
    TouchingOrIntersectingCircles,
    ConcentricInput,
    DegenerateRadius,
    ComplexRoots,
    UnitRoot,
    NearPole,
    DegenerateAngle,
    OriginSingularity,
    BarrierViolated,
    InfeasibleStart,
    PoleApproach,
    BadInput,
};

std::string_view to_string(ErrorCode code);

class GeofenceError : public std::runtime_error {
public:
    GeofenceError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace mgf
