#pragma once

#include <functional>
#include <vector>

#include "gbnet/critical_events.hpp"
#include "gbnet/energy.hpp"
#include "gbnet/network.hpp"
#include "gbnet/sim_config.hpp"

namespace gbnet {

// Curvature vector kappa*n at the nodes of a polyline boundary by the
// arclength-weighted second difference.  Open boundaries get zeros at the
// two endpoint slots; closed boundaries are treated cyclically.
std::vector<Vec2> discrete_curvature(const GrainBoundary& boundary);

// Single-star junction update: explicit Euler on -eta dE/da, or the
// force-balance (Herring) projection onto the local weighted
// Fermat-Torricelli point when eta = inf.
Vec2 junction_step(const EnergyModel& model, const JunctionStar& star, double eta, double dt);

// Node insertion/removal keeping spacing near target_h (midpoint splits,
// short-segment merges).  Endpoint nodes are never touched.
void remesh(GrainNetwork& net, double target_h);

struct DissipationReport {
    double e_before = 0.0;
    double e_after = 0.0;
    // explicit estimate of dt * sum(|v|^2 / mobility) accumulated by the
    // sub-steps; e_after - e_before + dissipated is the discrete residual
    double dissipated = 0.0;
    int wft_projection_failures = 0;
};

// One synchronized update of boundary nodes (v_n = mu sigma kappa),
// junction positions, and grain orientations.  Throws CflError when dt
// violates the stability bounds.
DissipationReport network_step(const EnergyModel& model, GrainNetwork& net,
                               const CurvatureConfig& cfg);

// Largest stable dt for the current mesh (curvature, junction and
// orientation channels combined, with the 0.2 safety factor on the
// parabolic bound).
double stable_network_dt(const EnergyModel& model, const GrainNetwork& net,
                         const CurvatureConfig& cfg);

struct RunObserver {
    // called after every accepted step
    std::function<void(const GrainNetwork&, const DissipationReport&)> on_step;
    // called every cfg.snapshot_every steps (and at the end)
    std::function<void(const GrainNetwork&, int step)> on_snapshot;
};

struct RunResult {
    std::vector<double> time;
    std::vector<double> energy;
    std::vector<int> grain_count;
    EventLog events;
    int steps = 0;
    double dt = 0.0;
};

// Integrate from the given network until stop_fraction of the initial
// grains disappeared or t_end is reached, applying critical events and
// remeshing every step.  Works for both the curvature and the vertex
// model (cfg.mu = inf).
RunResult run(const EnergyModel& model, GrainNetwork& net, const CurvatureConfig& cfg,
              const RunObserver& observer = {});

}  // namespace gbnet
