#include "gbnet/constraint.hpp"

namespace gbnet {

double wrap_misorientation(double raw) {
    if (!std::isfinite(raw)) {
        throw std::invalid_argument("wrap_misorientation: non-finite input");
    }
    double w = raw - kHalfPi * std::round(raw / kHalfPi);
    // round() maps boundary values to +pi/4; fold onto the half-open range.
    if (w >= kQuarterPi) w -= kHalfPi;
    if (w < -kQuarterPi) w += kHalfPi;
    return w;
}

Vec3 project_to_constraint(const Vec3& v) {
    const double mean = (v[0] + v[1] + v[2]) / 3.0;
    return {v[0] - mean, v[1] - mean, v[2] - mean};
}

std::vector<Vec2> misorientation_hexagon() {
    // Vertices are the images of the cube-edge midpoints, e.g. (pi/4,-pi/4,0).
    static const Vec3 corners3[6] = {
        {kQuarterPi, -kQuarterPi, 0.0}, {kQuarterPi, 0.0, -kQuarterPi},
        {0.0, kQuarterPi, -kQuarterPi}, {-kQuarterPi, kQuarterPi, 0.0},
        {-kQuarterPi, 0.0, kQuarterPi}, {0.0, -kQuarterPi, kQuarterPi}};
    std::vector<Vec2> hex(6);
    for (int k = 0; k < 6; ++k) hex[k] = to_plane(corners3[k]);
    return hex;
}

bool inside_misorientation_domain(const Vec2& plane_pt, double slack) {
    const Vec3 d = from_plane(plane_pt);
    const double b = kQuarterPi + slack;
    return std::abs(d[0]) <= b && std::abs(d[1]) <= b && std::abs(d[2]) <= b;
}

Vec2 clamp_into_domain(const Vec2& plane_pt) {
    const Vec3 d = from_plane(plane_pt);
    const double worst = std::max({std::abs(d[0]), std::abs(d[1]), std::abs(d[2])});
    if (worst <= kQuarterPi) return plane_pt;
    return plane_pt * (kQuarterPi / worst * (1.0 - 1e-12));
}

double clip_polygon_rect_area(const std::vector<Vec2>& poly, double x0, double x1, double y0, double y1) {
    // Clip successively against the four half-planes of the rectangle.
    std::vector<Vec2> cur = poly, next;
    auto clip_halfplane = [&](auto inside, auto intersect) {
        next.clear();
        const size_t n = cur.size();
        for (size_t i = 0; i < n; ++i) {
            const Vec2& p = cur[i];
            const Vec2& q = cur[(i + 1) % n];
            const bool pin = inside(p), qin = inside(q);
            if (pin) next.push_back(p);
            if (pin != qin) next.push_back(intersect(p, q));
        }
        cur.swap(next);
    };
    auto lerp_x = [](const Vec2& p, const Vec2& q, double x) {
        const double t = (x - p.x) / (q.x - p.x);
        return Vec2{x, p.y + t * (q.y - p.y)};
    };
    auto lerp_y = [](const Vec2& p, const Vec2& q, double y) {
        const double t = (y - p.y) / (q.y - p.y);
        return Vec2{p.x + t * (q.x - p.x), y};
    };
    clip_halfplane([&](const Vec2& p) { return p.x >= x0; },
                   [&](const Vec2& p, const Vec2& q) { return lerp_x(p, q, x0); });
    if (cur.empty()) return 0.0;
    clip_halfplane([&](const Vec2& p) { return p.x <= x1; },
                   [&](const Vec2& p, const Vec2& q) { return lerp_x(p, q, x1); });
    if (cur.empty()) return 0.0;
    clip_halfplane([&](const Vec2& p) { return p.y >= y0; },
                   [&](const Vec2& p, const Vec2& q) { return lerp_y(p, q, y0); });
    if (cur.empty()) return 0.0;
    clip_halfplane([&](const Vec2& p) { return p.y <= y1; },
                   [&](const Vec2& p, const Vec2& q) { return lerp_y(p, q, y1); });

    double twice_area = 0.0;
    for (size_t i = 0; i < cur.size(); ++i) {
        const Vec2& p = cur[i];
        const Vec2& q = cur[(i + 1) % cur.size()];
        twice_area += cross(p, q);
    }
    return std::abs(twice_area) * 0.5;
}

}  // namespace gbnet
