#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gbnet/vec2.hpp"

// State space of the three boundary misorientations at a triple junction:
// the plane d1 + d2 + d3 = 0 intersected with the open cube (-pi/4, pi/4)^3.
// The intersection is a regular hexagon; we work both in the 3-vector
// representation and in an orthonormal tangent basis of the plane.

namespace gbnet {

inline constexpr double kQuarterPi = 0.7853981633974483096156608458198757;  // pi/4
inline constexpr double kHalfPi = 1.5707963267948966192313216916397514;     // pi/2

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Orthonormal basis of the constraint plane {sum = 0}.
inline constexpr Vec3 kTangentU = {0.7071067811865475244, -0.7071067811865475244, 0.0};
inline constexpr Vec3 kTangentV = {0.4082482904638630164, 0.4082482904638630164, -0.8164965809277260328};

// Reduce an angle to the fundamental misorientation range [-pi/4, pi/4)
// of the square-lattice symmetry (period pi/2).
double wrap_misorientation(double raw);

// Orthogonal projection onto the constraint plane, (I - (1/3)J)v.
Vec3 project_to_constraint(const Vec3& v);

// Tangent-plane coordinates <-> 3-vector representation.
inline Vec2 to_plane(const Vec3& d) { return {dot(d, kTangentU), dot(d, kTangentV)}; }
inline Vec3 from_plane(const Vec2& p) { return p.x * kTangentU + p.y * kTangentV; }

struct MisorientationTriple {
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;

    MisorientationTriple() = default;
    MisorientationTriple(double a, double b, double c) : d1(a), d2(b), d3(c) {}
    explicit MisorientationTriple(const Vec3& v) : d1(v[0]), d2(v[1]), d3(v[2]) {}

    Vec3 vec() const { return {d1, d2, d3}; }
    double operator[](int j) const { return j == 0 ? d1 : (j == 1 ? d2 : d3); }

    double constraint_residual() const { return d1 + d2 + d3; }
    bool in_range(double slack = 0.0) const {
        const double b = kQuarterPi + slack;
        return std::abs(d1) <= b && std::abs(d2) <= b && std::abs(d3) <= b;
    }
    bool valid(double tol = 1e-12) const {
        return std::isfinite(d1) && std::isfinite(d2) && std::isfinite(d3) &&
               std::abs(constraint_residual()) <= tol && in_range(tol);
    }
};

// The hexagonal cross-section of the cube in tangent-plane coordinates.
// Regular hexagon, circumradius pi/(2*sqrt(2)), one vertex on the +u axis.
std::vector<Vec2> misorientation_hexagon();
bool inside_misorientation_domain(const Vec2& plane_pt, double slack = 0.0);

// Radially shrink a tangent-plane point just enough to satisfy the
// component bounds; identity for interior points.
Vec2 clamp_into_domain(const Vec2& plane_pt);

// Area of the intersection of a convex polygon with an axis-aligned
// rectangle [x0,x1]x[y0,y1] (Sutherland-Hodgman clip).
double clip_polygon_rect_area(const std::vector<Vec2>& poly, double x0, double x1, double y0, double y1);

}  // namespace gbnet
