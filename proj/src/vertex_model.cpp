#include "gbnet/vertex_model.hpp"

#include <cmath>

#include "gbnet/junction_geometry.hpp"

namespace gbnet {

StarRhs star_rhs(const EnergyModel& model, const JunctionStar& star, double gamma, double eta) {
    StarRhs rhs;
    rhs.v_a = -eta * grad_junction(model, star);
    rhs.v_mis = misorientation_rhs(model, star, gamma);
    return rhs;
}

JunctionStar integrate_star(const EnergyModel& model, JunctionStar star, double gamma, double eta,
                            double dt, int n_steps) {
    auto eval = [&](const Vec3& mis, const Vec2& a) {
        JunctionStar s = star;
        s.mis = MisorientationTriple(mis);
        s.a = a;
        return star_rhs(model, s, gamma, eta);
    };
    for (int step = 0; step < n_steps; ++step) {
        const Vec3 m0 = star.mis.vec();
        const Vec2 a0 = star.a;
        const StarRhs k1 = eval(m0, a0);
        const StarRhs k2 = eval(m0 + (0.5 * dt) * k1.v_mis, a0 + (0.5 * dt) * k1.v_a);
        const StarRhs k3 = eval(m0 + (0.5 * dt) * k2.v_mis, a0 + (0.5 * dt) * k2.v_a);
        const StarRhs k4 = eval(m0 + dt * k3.v_mis, a0 + dt * k3.v_a);
        star.mis = MisorientationTriple(project_to_constraint(
            m0 + (dt / 6.0) * (k1.v_mis + 2.0 * k2.v_mis + 2.0 * k3.v_mis + k4.v_mis)));
        star.a = a0 + (dt / 6.0) * (k1.v_a + 2.0 * k2.v_a + 2.0 * k3.v_a + k4.v_a);
    }
    return star;
}

double orientation_step(const EnergyModel& model, GrainNetwork& net, double gamma, double dt) {
    if (gamma == 0.0) return 0.0;

    std::vector<double> dalpha(net.grains.size(), 0.0);
    for (const GrainBoundary& b : net.boundaries) {
        if (!b.alive) continue;
        const double force = model.sigma_theta(b.misorientation) * b.length();
        // mis = alpha_left - alpha_right
        dalpha[b.grain_left] -= gamma * dt * force;
        dalpha[b.grain_right] += gamma * dt * force;
    }
    double dissipated = 0.0;
    for (size_t g = 0; g < net.grains.size(); ++g) {
        if (!net.grains[g].alive) continue;
        net.grains[g].orientation += dalpha[g];
        dissipated += dalpha[g] * dalpha[g] / (gamma * dt);
    }
    // predicted boundary increments, then the recompute-and-compare guard
    for (GrainBoundary& b : net.boundaries) {
        if (!b.alive) continue;
        b.misorientation =
            wrap_misorientation(b.misorientation + dalpha[b.grain_left] - dalpha[b.grain_right]);
    }
    net.refresh_misorientations(1e-10);
    return dissipated;
}

namespace {

// Cap junction displacement so a junction can never run over an adjacent
// node within one step; short boundaries are the critical-event module's
// job, not the integrator's.
Vec2 cap_displacement(const Vec2& delta, const JunctionStar& star) {
    const double limit = 0.45 * star.min_arm_length();
    const double d = norm(delta);
    return (d > limit) ? delta * (limit / d) : delta;
}

}  // namespace

void network_vertex_step(const EnergyModel& model, GrainNetwork& net, const CurvatureConfig& cfg) {
    for (const GrainBoundary& b : net.boundaries) {
        if (b.alive && b.nodes.size() != 2) {
            throw TopologyError("network_vertex_step: boundaries must be 2-node segments");
        }
    }

    if (cfg.herring()) {
        // sequential local minimization; each projection is exact and can
        // only lower the energy
        for (size_t j = 0; j < net.junctions.size(); ++j) {
            if (!net.junctions[j].alive) continue;
            const JunctionStar star = net.junction_star(static_cast<int>(j));
            Vec2 target;
            try {
                target = weighted_fermat_torricelli(model, star.mis, star.x[0], star.x[1],
                                                    star.x[2], 1e-10, 2000);
            } catch (const ConvergenceError&) {
                continue;  // keep the old position; surgery will clean up
            }
            net.displace_junction(static_cast<int>(j), cap_displacement(target - star.a, star));
        }
    } else {
        std::vector<std::pair<int, Vec2>> moves;
        moves.reserve(net.junctions.size());
        for (size_t j = 0; j < net.junctions.size(); ++j) {
            if (!net.junctions[j].alive) continue;
            const JunctionStar star = net.junction_star(static_cast<int>(j));
            const Vec2 v = -cfg.eta * grad_junction(model, star);
            moves.emplace_back(static_cast<int>(j), cap_displacement(cfg.dt * v, star));
        }
        for (const auto& [j, delta] : moves) net.displace_junction(j, delta);
    }

    orientation_step(model, net, cfg.gamma, cfg.dt);
    net.time += cfg.dt;
}

}  // namespace gbnet
