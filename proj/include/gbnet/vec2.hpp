#pragma once

#include <cmath>

namespace gbnet {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline Vec2 operator/(Vec2 a, double s) { return a *= (1.0 / s); }
inline Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
inline bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm2(const Vec2& a) { return dot(a, a); }
inline double norm(const Vec2& a) { return std::sqrt(norm2(a)); }
inline Vec2 normalized(const Vec2& a) { return a / norm(a); }
inline Vec2 perp(const Vec2& a) { return {-a.y, a.x}; }

// Periodic unit square (flat torus) helpers.  Coordinates are wrapped to
// [0,1); displacements use the minimum-image convention.
inline double wrap_unit(double x) {
    double w = x - std::floor(x);
    return (w >= 1.0) ? 0.0 : w;  // guard against floor rounding at 1.0
}

inline Vec2 wrap_unit(const Vec2& p) { return {wrap_unit(p.x), wrap_unit(p.y)}; }

inline double min_image(double d) {
    return d - std::round(d);
}

// Minimum-image displacement p - q on the torus, components in [-0.5, 0.5).
inline Vec2 torus_delta(const Vec2& p, const Vec2& q) {
    return {min_image(p.x - q.x), min_image(p.y - q.y)};
}

inline double torus_dist(const Vec2& p, const Vec2& q) { return norm(torus_delta(p, q)); }

// Lift q to the image nearest to ref (continuous coordinates near ref).
inline Vec2 near_image(const Vec2& q, const Vec2& ref) {
    return ref + torus_delta(q, ref);
}

}  // namespace gbnet
