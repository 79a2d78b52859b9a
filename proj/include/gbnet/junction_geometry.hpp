#pragma once

#include <array>
#include <optional>

#include "gbnet/energy.hpp"
#include "gbnet/star.hpp"

namespace gbnet {

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Angles psi_i formed at the junction by consecutive arms (x_i, x_{i+1}),
// computed from normalized arm inner products.
struct DihedralAngles {
    std::array<double, 3> psi;
    double sum() const { return psi[0] + psi[1] + psi[2]; }
};

struct EnergySplit {
    double e1;  // energy with the junction frozen at the reference point
    double e2;  // remainder, e1 + e2 = local_energy
};

// Per-vertex interior test: true at k iff
// |sum_{j != k} sigma_j (x_j - x_k)/|x_j - x_k|| > sigma_k,
// i.e. the weighted Fermat-Torricelli point is not pinned at x_k.
std::array<bool, 3> wft_interior_condition(const EnergyModel& model,
                                           const MisorientationTriple& mis, const Vec2& x1,
                                           const Vec2& x2, const Vec2& x3);

// Minimizer of sum_j sigma(mis_j) |p - x_j| over p.  Damped Weiszfeld
// fixed-point iteration on the first-order condition, with a vertex-capture
// test up front and a Newton polish once near the fixed point.  tol bounds
// the norm of the energy gradient at the returned point (ignored when the
// minimizer is a vertex).
Vec2 weighted_fermat_torricelli(const EnergyModel& model, const MisorientationTriple& mis,
                                const Vec2& x1, const Vec2& x2, const Vec2& x3,
                                double tol = 1e-12, int max_iters = 10000);

// Center of the circle through the three points; throws DegeneracyError on
// (near-)collinear input.
Vec2 circumcenter(const Vec2& x1, const Vec2& x2, const Vec2& x3);

DihedralAngles dihedral_angles(const JunctionStar& star);

// R1(i): generalized Herring check, equals 1 exactly at the wFT point.
double ratio_r1(const EnergyModel& model, const MisorientationTriple& mis,
                const DihedralAngles& angles, int i);

// R2: circumcenter relation between dihedral angles and chord lengths.
double ratio_r2(const JunctionStar& star, const DihedralAngles& angles);

// R3 = sqrt(C1*C2)/C3 of the three chord/energy terms; nullopt (excluded
// from histograms) when some term is non-positive.
std::optional<double> ratio_r3(const EnergyModel& model, const JunctionStar& star);

EnergySplit energy_split(const EnergyModel& model, const JunctionStar& star, const Vec2& a_star);

}  // namespace gbnet
