#pragma once

#include <vector>

#include "gbnet/constraint.hpp"
#include "gbnet/energy.hpp"
#include "gbnet/star.hpp"
#include "gbnet/vec2.hpp"

namespace gbnet {

struct Rect {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    bool contains(const Vec2& p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
};

// Geometry of the single-junction state space: fixed anchors x1..x3 and the
// box Omega_TJ the junction lives in.  The misorientation triple lives on
// the hexagonal constraint slice, handled in tangent-plane coordinates.
struct StateSpace {
    std::array<Vec2, 3> anchors;
    Rect omega_tj;

    JunctionStar star(const MisorientationTriple& mis, const Vec2& a) const {
        return JunctionStar(a, anchors[0], anchors[1], anchors[2], mis);
    }
    double energy(const EnergyModel& model, const MisorientationTriple& mis, const Vec2& a) const {
        return local_energy(model, star(mis, a));
    }
};

// Cartesian cell grid over (tangent-plane coords of Omega) x Omega_TJ.
// The tangent-plane axes cover the bounding rectangle of the hexagon;
// cells whose centers fall outside the hexagon are masked out (zero
// volume, no fluxes), which keeps flux-form schemes conservative.
struct StateGrid {
    int n_mis = 16;  // cells per tangent-plane axis
    int n_a = 16;    // cells per junction axis
    double u0, u1, v0, v1;
    Rect omega_tj;
    double hu, hv, hax, hay;
    std::vector<bool> live;  // n_mis*n_mis mask over (iu, iv)

    StateGrid(int n_mis_, int n_a_, const Rect& tj);

    int n_cells() const { return n_mis * n_mis * n_a * n_a; }
    int mis_index(int iu, int iv) const { return iu * n_mis + iv; }
    int index(int iu, int iv, int ia, int ja) const {
        return ((iu * n_mis + iv) * n_a + ia) * n_a + ja;
    }
    bool is_live(int iu, int iv) const { return live[mis_index(iu, iv)]; }
    double cell_volume() const { return hu * hv * hax * hay; }

    double uc(int iu) const { return u0 + (iu + 0.5) * hu; }
    double vc(int iv) const { return v0 + (iv + 0.5) * hv; }
    double axc(int ia) const { return omega_tj.x0 + (ia + 0.5) * hax; }
    double ayc(int ja) const { return omega_tj.y0 + (ja + 0.5) * hay; }

    MisorientationTriple mis_at(int iu, int iv) const {
        return MisorientationTriple(from_plane(Vec2{uc(iu), vc(iv)}));
    }

    // Hexagon-clipped area of the (iu, iv) tangent-plane cell; used by
    // continuum quadrature, not by the finite-volume scheme.
    double clipped_mis_area(int iu, int iv) const;

    // Bin lookup for samples; returns -1 when outside the grid.
    int locate(const Vec2& plane_mis, const Vec2& a) const;
};

// Energies at cell centers, E(iu, iv, ia, ja), for live cells.
std::vector<double> cell_energies(const StateGrid& grid, const StateSpace& space,
                                  const EnergyModel& model);

// Probability mass per cell of the Boltzmann density exp(-E/D)/Z on the true
// (hexagon-clipped) continuum domain, by per-cell sub-quadrature with nsub^2
// midpoint points per 2D factor.  Masked and fully-clipped cells get 0.
std::vector<double> boltzmann_cell_masses(const StateGrid& grid, const StateSpace& space,
                                          const EnergyModel& model, double D, int nsub = 4);

// log of Z = integral of exp(-E/D) over Omega x Omega_TJ by the same
// quadrature.
double log_partition_function(const StateGrid& grid, const StateSpace& space,
                              const EnergyModel& model, double D, int nsub = 4);

}  // namespace gbnet
