#include "gbnet/state_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace gbnet {

namespace {
// Hexagon bounding rectangle in tangent-plane coordinates: one vertex lies
// on the +u axis at the circumradius, the flat sides at the inradius.
constexpr double kHexCircumradius = 1.1107207345395915617539702475152;  // pi/(2 sqrt 2)
constexpr double kHexInradius = 0.96193976625564337806881802868097;     // pi sqrt(6)/8
}  // namespace

StateGrid::StateGrid(int n_mis_, int n_a_, const Rect& tj)
    : n_mis(n_mis_), n_a(n_a_), omega_tj(tj) {
    if (n_mis < 2 || n_a < 1) throw std::invalid_argument("StateGrid: too few cells");
    u0 = -kHexCircumradius;
    u1 = kHexCircumradius;
    v0 = -kHexInradius;
    v1 = kHexInradius;
    hu = (u1 - u0) / n_mis;
    hv = (v1 - v0) / n_mis;
    hax = omega_tj.width() / n_a;
    hay = omega_tj.height() / n_a;
    live.assign(n_mis * n_mis, false);
    for (int iu = 0; iu < n_mis; ++iu) {
        for (int iv = 0; iv < n_mis; ++iv) {
            live[mis_index(iu, iv)] = inside_misorientation_domain(Vec2{uc(iu), vc(iv)});
        }
    }
}

double StateGrid::clipped_mis_area(int iu, int iv) const {
    static const std::vector<Vec2> hex = misorientation_hexagon();
    return clip_polygon_rect_area(hex, u0 + iu * hu, u0 + (iu + 1) * hu, v0 + iv * hv,
                                  v0 + (iv + 1) * hv);
}

int StateGrid::locate(const Vec2& plane_mis, const Vec2& a) const {
    const int iu = static_cast<int>(std::floor((plane_mis.x - u0) / hu));
    const int iv = static_cast<int>(std::floor((plane_mis.y - v0) / hv));
    const int ia = static_cast<int>(std::floor((a.x - omega_tj.x0) / hax));
    const int ja = static_cast<int>(std::floor((a.y - omega_tj.y0) / hay));
    if (iu < 0 || iu >= n_mis || iv < 0 || iv >= n_mis || ia < 0 || ia >= n_a || ja < 0 ||
        ja >= n_a) {
        return -1;
    }
    return index(iu, iv, ia, ja);
}

std::vector<double> cell_energies(const StateGrid& grid, const StateSpace& space,
                                  const EnergyModel& model) {
    std::vector<double> e(grid.n_cells(), 0.0);
    for (int iu = 0; iu < grid.n_mis; ++iu) {
        for (int iv = 0; iv < grid.n_mis; ++iv) {
            if (!grid.is_live(iu, iv)) continue;
            const MisorientationTriple mis = grid.mis_at(iu, iv);
            std::array<double, 3> sig;
            for (int j = 0; j < 3; ++j) sig[j] = model.sigma(mis[j]);
            for (int ia = 0; ia < grid.n_a; ++ia) {
                for (int ja = 0; ja < grid.n_a; ++ja) {
                    const Vec2 a{grid.axc(ia), grid.ayc(ja)};
                    double val = 0.0;
                    for (int j = 0; j < 3; ++j) val += sig[j] * norm(a - space.anchors[j]);
                    e[grid.index(iu, iv, ia, ja)] = val;
                }
            }
        }
    }
    return e;
}

std::vector<double> boltzmann_cell_masses(const StateGrid& grid, const StateSpace& space,
                                          const EnergyModel& model, double D, int nsub) {
    std::vector<double> mass(grid.n_cells(), 0.0);
    const double sub_hu = grid.hu / nsub, sub_hv = grid.hv / nsub;
    const double sub_hax = grid.hax / nsub, sub_hay = grid.hay / nsub;
    static const std::vector<Vec2> hex = misorientation_hexagon();

    double total = 0.0;
    for (int iu = 0; iu < grid.n_mis; ++iu) {
        for (int iv = 0; iv < grid.n_mis; ++iv) {
            // sub-cell weights in the misorientation plane, exact hexagon clip
            std::vector<double> area(nsub * nsub);
            std::vector<MisorientationTriple> mis(nsub * nsub);
            double cell_area = 0.0;
            for (int su = 0; su < nsub; ++su) {
                for (int sv = 0; sv < nsub; ++sv) {
                    const double a0 = grid.u0 + iu * grid.hu + su * sub_hu;
                    const double b0 = grid.v0 + iv * grid.hv + sv * sub_hv;
                    const double ar = clip_polygon_rect_area(hex, a0, a0 + sub_hu, b0, b0 + sub_hv);
                    area[su * nsub + sv] = ar;
                    cell_area += ar;
                    if (ar > 0.0) {
                        const Vec2 p = clamp_into_domain(Vec2{a0 + 0.5 * sub_hu, b0 + 0.5 * sub_hv});
                        mis[su * nsub + sv] = MisorientationTriple(from_plane(p));
                    }
                }
            }
            if (cell_area <= 0.0) continue;
            for (int ia = 0; ia < grid.n_a; ++ia) {
                for (int ja = 0; ja < grid.n_a; ++ja) {
                    double m = 0.0;
                    for (int s = 0; s < nsub * nsub; ++s) {
                        if (area[s] <= 0.0) continue;
                        double esub = 0.0;
                        for (int sa = 0; sa < nsub; ++sa) {
                            for (int sb = 0; sb < nsub; ++sb) {
                                const Vec2 a{grid.omega_tj.x0 + ia * grid.hax + (sa + 0.5) * sub_hax,
                                             grid.omega_tj.y0 + ja * grid.hay + (sb + 0.5) * sub_hay};
                                esub += std::exp(-space.energy(model, mis[s], a) / D);
                            }
                        }
                        m += area[s] * esub * sub_hax * sub_hay;
                    }
                    mass[grid.index(iu, iv, ia, ja)] = m;
                    total += m;
                }
            }
        }
    }
    if (!(total > 0.0)) throw std::runtime_error("boltzmann_cell_masses: vanishing partition sum");
    for (double& m : mass) m /= total;
    return mass;
}

double log_partition_function(const StateGrid& grid, const StateSpace& space,
                              const EnergyModel& model, double D, int nsub) {
    // Same quadrature as boltzmann_cell_masses, unnormalized.
    double total = 0.0;
    const double sub_hu = grid.hu / nsub, sub_hv = grid.hv / nsub;
    const double sub_hax = grid.hax / nsub, sub_hay = grid.hay / nsub;
    static const std::vector<Vec2> hex = misorientation_hexagon();
    for (int iu = 0; iu < grid.n_mis; ++iu) {
        for (int iv = 0; iv < grid.n_mis; ++iv) {
            for (int su = 0; su < nsub; ++su) {
                for (int sv = 0; sv < nsub; ++sv) {
                    const double a0 = grid.u0 + iu * grid.hu + su * sub_hu;
                    const double b0 = grid.v0 + iv * grid.hv + sv * sub_hv;
                    const double ar = clip_polygon_rect_area(hex, a0, a0 + sub_hu, b0, b0 + sub_hv);
                    if (ar <= 0.0) continue;
                    const Vec2 p = clamp_into_domain(Vec2{a0 + 0.5 * sub_hu, b0 + 0.5 * sub_hv});
                    const MisorientationTriple mis(from_plane(p));
                    for (int ia = 0; ia < grid.n_a * nsub; ++ia) {
                        for (int ja = 0; ja < grid.n_a * nsub; ++ja) {
                            const Vec2 a{grid.omega_tj.x0 + (ia + 0.5) * sub_hax,
                                         grid.omega_tj.y0 + (ja + 0.5) * sub_hay};
                            total += ar * sub_hax * sub_hay *
                                     std::exp(-space.energy(model, mis, a) / D);
                        }
                    }
                }
            }
        }
    }
    return std::log(total);
}

}  // namespace gbnet
