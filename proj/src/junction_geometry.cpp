#include "gbnet/junction_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gbnet {

std::array<bool, 3> wft_interior_condition(const EnergyModel& model,
                                           const MisorientationTriple& mis, const Vec2& x1,
                                           const Vec2& x2, const Vec2& x3) {
    const std::array<Vec2, 3> x{x1, x2, x3};
    std::array<double, 3> w;
    for (int j = 0; j < 3; ++j) w[j] = model.sigma(mis[j]);

    std::array<bool, 3> interior{};
    for (int k = 0; k < 3; ++k) {
        Vec2 pull{0.0, 0.0};
        for (int j = 0; j < 3; ++j) {
            if (j == k) continue;
            pull += w[j] * normalized(x[j] - x[k]);
        }
        interior[k] = norm(pull) > w[k];
    }
    return interior;
}

Vec2 weighted_fermat_torricelli(const EnergyModel& model, const MisorientationTriple& mis,
                                const Vec2& x1, const Vec2& x2, const Vec2& x3, double tol,
                                int max_iters) {
    const std::array<Vec2, 3> x{x1, x2, x3};
    std::array<double, 3> w;
    for (int j = 0; j < 3; ++j) w[j] = model.sigma(mis[j]);

    const auto interior = wft_interior_condition(model, mis, x1, x2, x3);
    for (int k = 0; k < 3; ++k) {
        if (!interior[k]) return x[k];  // minimizer pinned at a vertex
    }

    auto gradient = [&](const Vec2& p, std::array<double, 3>& d) {
        Vec2 g{0.0, 0.0};
        for (int j = 0; j < 3; ++j) {
            d[j] = norm(p - x[j]);
            g += (w[j] / d[j]) * (p - x[j]);
        }
        return g;
    };

    const double scale = std::max({norm(x1 - x2), norm(x2 - x3), norm(x3 - x1)});
    Vec2 p = (x[0] + x[1] + x[2]) / 3.0;

    for (int it = 0; it < max_iters; ++it) {
        std::array<double, 3> d;
        for (int j = 0; j < 3; ++j) {
            d[j] = norm(p - x[j]);
            if (d[j] < 1e-14 * scale) {
                // interior condition holds, so x_j is not the minimizer; nudge off
                p += Vec2{1e-9 * scale, 1e-9 * scale};
                d[j] = norm(p - x[j]);
            }
        }
        Vec2 g = gradient(p, d);
        if (norm(g) <= tol) return p;

        // Weiszfeld update: p <- (sum w_j x_j / d_j) / (sum w_j / d_j)
        double denom = 0.0;
        Vec2 num{0.0, 0.0};
        for (int j = 0; j < 3; ++j) {
            const double c = w[j] / d[j];
            denom += c;
            num += c * x[j];
        }
        const Vec2 p_next = num / denom;

        // Near the fixed point, switch to Newton on the gradient for the
        // last digits (Weiszfeld stalls linearly).
        if (norm(p_next - p) < 1e-7 * scale) {
            Vec2 q = p_next;
            for (int n = 0; n < 50; ++n) {
                std::array<double, 3> dq;
                const Vec2 gq = gradient(q, dq);
                if (norm(gq) <= tol) return q;
                double hxx = 0.0, hxy = 0.0, hyy = 0.0;
                for (int j = 0; j < 3; ++j) {
                    const Vec2 e = (q - x[j]) / dq[j];
                    const double c = w[j] / dq[j];
                    hxx += c * (1.0 - e.x * e.x);
                    hxy += c * (-e.x * e.y);
                    hyy += c * (1.0 - e.y * e.y);
                }
                const double det = hxx * hyy - hxy * hxy;
                if (det <= 0.0) break;
                const Vec2 step{(hyy * gq.x - hxy * gq.y) / det, (hxx * gq.y - hxy * gq.x) / det};
                q -= step;
                if (norm(step) < 1e-17 * scale) break;
            }
            std::array<double, 3> dq;
            if (norm(gradient(q, dq)) <= tol) return q;
        }
        p = p_next;
    }
    std::array<double, 3> d;
    throw ConvergenceError("weighted_fermat_torricelli: no convergence after " +
                           std::to_string(max_iters) +
                           " iterations, |grad| = " + std::to_string(norm(gradient(p, d))));
}

Vec2 circumcenter(const Vec2& x1, const Vec2& x2, const Vec2& x3) {
    const Vec2 b = x2 - x1;
    const Vec2 c = x3 - x1;
    const double twice_signed_area = cross(b, c);
    if (std::abs(twice_signed_area) * 0.5 < 1e-14) {
        throw DegeneracyError("circumcenter: collinear points");
    }
    const double b2 = norm2(b), c2 = norm2(c);
    const double ux = (c.y * b2 - b.y * c2) / (2.0 * twice_signed_area);
    const double uy = (b.x * c2 - c.x * b2) / (2.0 * twice_signed_area);
    return x1 + Vec2{ux, uy};
}

DihedralAngles dihedral_angles(const JunctionStar& star) {
    std::array<Vec2, 3> e;
    for (int j = 0; j < 3; ++j) {
        const Vec2 arm = star.a - star.x[j];
        const double len = norm(arm);
        if (len < kSingularGuard) throw DegeneracyError("dihedral_angles: zero-length arm");
        e[j] = arm / len;
    }
    DihedralAngles out;
    for (int i = 0; i < 3; ++i) {
        const double c = std::clamp(dot(e[i], e[(i + 1) % 3]), -1.0, 1.0);
        out.psi[i] = std::acos(c);
    }
    return out;
}

double ratio_r1(const EnergyModel& model, const MisorientationTriple& mis,
                const DihedralAngles& angles, int i) {
    const double s_i = model.sigma(mis[i % 3]);
    const double s_ip = model.sigma(mis[(i + 1) % 3]);
    const double s_ipp = model.sigma(mis[(i + 2) % 3]);
    const double one_minus_cos = 1.0 - std::cos(angles.psi[i % 3]);
    if (one_minus_cos <= 1e-12) throw DegeneracyError("ratio_r1: degenerate dihedral angle");
    return ((s_i + s_ip) * (s_i + s_ip) - s_ipp * s_ipp) / (2.0 * one_minus_cos * s_i * s_ip);
}

double ratio_r2(const JunctionStar& star, const DihedralAngles& angles) {
    std::array<double, 3> omc, chord;
    for (int i = 0; i < 3; ++i) {
        omc[i] = 1.0 - std::cos(angles.psi[i]);
        if (omc[i] <= 1e-12) throw DegeneracyError("ratio_r2: degenerate dihedral angle");
        chord[i] = norm(star.x[i] - star.x[(i + 1) % 3]);
        if (!(chord[i] > 0.0)) throw DegeneracyError("ratio_r2: coincident anchor points");
    }
    // chord[0] = |x1-x2|, chord[1] = |x2-x3|, chord[2] = |x3-x1|
    return chord[2] * chord[2] * std::sqrt(omc[0] * omc[1]) / (omc[2] * chord[0] * chord[1]);
}

std::optional<double> ratio_r3(const EnergyModel& model, const JunctionStar& star) {
    std::array<double, 3> s, term;
    for (int j = 0; j < 3; ++j) s[j] = model.sigma(star.mis[j]);
    for (int i = 0; i < 3; ++i) {
        const double chord2 = norm2(star.x[i] - star.x[(i + 1) % 3]);
        if (!(chord2 > 0.0)) throw DegeneracyError("ratio_r3: coincident anchor points");
        const double num = (s[i] + s[(i + 1) % 3]) * (s[i] + s[(i + 1) % 3]) -
                           s[(i + 2) % 3] * s[(i + 2) % 3];
        term[i] = num / (2.0 * chord2 * s[i] * s[(i + 1) % 3]);
        if (!(term[i] > 0.0)) return std::nullopt;
    }
    return std::sqrt(term[0] * term[1]) / term[2];
}

EnergySplit energy_split(const EnergyModel& model, const JunctionStar& star, const Vec2& a_star) {
    double e1 = 0.0;
    for (int j = 0; j < 3; ++j) e1 += model.sigma(star.mis[j]) * norm(a_star - star.x[j]);
    return {e1, local_energy(model, star) - e1};
}

}  // namespace gbnet
