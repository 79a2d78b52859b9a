#pragma once

#include <utility>

#include "gbnet/energy.hpp"
#include "gbnet/network.hpp"
#include "gbnet/sim_config.hpp"

namespace gbnet {

// Right-hand side of the single-star gradient flow: junction velocity
// -eta dE/da and misorientation velocity -3 gamma grad^Omega E.
struct StarRhs {
    Vec2 v_a;
    Vec3 v_mis;
};

StarRhs star_rhs(const EnergyModel& model, const JunctionStar& star, double gamma, double eta);

// Classical RK4 integration of the star ODE with frozen anchors; returns
// the state after n_steps of size dt.
JunctionStar integrate_star(const EnergyModel& model, JunctionStar star, double gamma, double eta,
                            double dt, int n_steps);

// One explicit Euler step of the network vertex model (all boundaries are
// straight 2-node segments).  Junctions move by -eta dE/da, or are
// projected to the local weighted Fermat-Torricelli point when eta = inf;
// orientations follow -gamma dE/dalpha; misorientations are recomputed
// and wrapped afterwards.
void network_vertex_step(const EnergyModel& model, GrainNetwork& net, const CurvatureConfig& cfg);

// Orientation sub-step shared by both network models; returns the
// explicit dissipation estimate dt * sum |dalpha/dt|^2 / gamma.
double orientation_step(const EnergyModel& model, GrainNetwork& net, double gamma, double dt);

}  // namespace gbnet
