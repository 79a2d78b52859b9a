#pragma once

#include <array>

#include "gbnet/constraint.hpp"
#include "gbnet/vec2.hpp"

namespace gbnet {

// A triple junction together with its three boundary anchor points and the
// three misorientations of the incident boundaries.  Indices are cyclic:
// x[3] would be x[0], mis 0 would be mis 2 one step back.
struct JunctionStar {
    Vec2 a;
    std::array<Vec2, 3> x;
    MisorientationTriple mis;

    JunctionStar() = default;
    JunctionStar(const Vec2& a_, const Vec2& x1, const Vec2& x2, const Vec2& x3,
                 const MisorientationTriple& m = {})
        : a(a_), x{x1, x2, x3}, mis(m) {}

    double arm_length(int j) const { return norm(a - x[j]); }
    double min_arm_length() const {
        return std::min(arm_length(0), std::min(arm_length(1), arm_length(2)));
    }
};

}  // namespace gbnet
