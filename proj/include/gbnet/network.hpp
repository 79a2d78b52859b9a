#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gbnet/energy.hpp"
#include "gbnet/star.hpp"
#include "gbnet/vec2.hpp"

namespace gbnet {

struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ids are indices into the owning vectors; erased entries are tombstoned
// (alive = false) and skipped, so junction identity is stable across
// remeshing and surgery.
struct Junction {
    Vec2 pos;                           // wrapped to [0,1)^2
    std::array<int, 3> boundaries{-1, -1, -1};
    bool alive = true;
};

// Polyline grain boundary.  Node coordinates are continuous (consecutive
// deltas below half the domain); nodes.front() is congruent to junction j0
// and nodes.back() to j1 modulo the unit lattice.  A closed boundary
// (j0 = j1 = -1) wraps implicitly from back() to front().
struct GrainBoundary {
    std::vector<Vec2> nodes;
    int j0 = -1;
    int j1 = -1;
    int grain_left = -1;   // grain on the left when walking j0 -> j1
    int grain_right = -1;
    double misorientation = 0.0;  // wrap(orientation[left] - orientation[right])
    bool alive = true;

    bool closed() const { return j0 < 0 && j1 < 0; }
    double length() const;
};

struct Grain {
    double orientation = 0.0;
    std::vector<int> boundaries;  // unordered incidence list
    bool alive = true;
};

// One directed step of a grain's boundary cycle.
struct CycleEdge {
    int boundary;
    bool forward;  // true: walk j0 -> j1 (grain on the left)
};

struct GrainNetwork {
    std::vector<Grain> grains;
    std::vector<GrainBoundary> boundaries;
    std::vector<Junction> junctions;
    double time = 0.0;

    int n_alive_grains() const;
    int n_alive_boundaries() const;
    int n_alive_junctions() const;

    // Ordered boundary cycle of a grain (counterclockwise), reconstructed
    // from the local left/right adjacency.  Throws TopologyError when the
    // adjacency is inconsistent.
    std::vector<CycleEdge> grain_cycle(int grain) const;

    // Closed polygon of a grain, unwrapped by minimum-image steps from its
    // first vertex; junction nodes appear once.
    std::vector<Vec2> grain_polygon(int grain) const;
    double grain_signed_area(int grain) const;

    // The three incident boundaries of a junction in some fixed order,
    // with the adjacent anchor node per boundary.  `use_far_end` selects
    // the other end point instead of the nearest polyline node.
    JunctionStar junction_star(int junction, bool use_far_end = false) const;

    // Anchor node of boundary b next to junction j, lifted near lift_ref.
    Vec2 boundary_anchor(int b, int j, bool far_end, const Vec2& lift_ref) const;

    // Recompute all boundary misorientations from grain orientations;
    // throws TopologyError when a stored value drifted more than drift_tol
    // from the recomputed one (hard error per the data-model contract).
    void refresh_misorientations(double drift_tol = 1e-10);

    // Structural validation of all invariants (trivalence, adjacency
    // symmetry, misorientation consistency, positive areas, Euler count).
    void validate(bool check_euler = true) const;

    // replace the endpooint coordinates of the boundaries incident to a
    // junction after it moved by `delta` (continuous displacement).
    void displace_junction(int j, const Vec2& delta);
};

double polyline_length(const std::vector<Vec2>& nodes, bool closed);

// Total network energy sum_b sigma(mis_b) |Gamma_b|.
double network_energy(const EnergyModel& model, const GrainNetwork& net);

}  // namespace gbnet
