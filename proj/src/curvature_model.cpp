#include "gbnet/curvature_model.hpp"

#include <algorithm>
#include <cmath>

#include "gbnet/junction_geometry.hpp"
#include "gbnet/vertex_model.hpp"

namespace gbnet {

std::vector<Vec2> discrete_curvature(const GrainBoundary& boundary) {
    const auto& p = boundary.nodes;
    const int n = static_cast<int>(p.size());
    std::vector<Vec2> kn(n, Vec2{0.0, 0.0});
    if (!boundary.closed() && n < 3) return kn;

    auto stencil = [&](const Vec2& prev, const Vec2& cur, const Vec2& next) {
        const double h0 = norm(cur - prev);
        const double h1 = norm(next - cur);
        if (h0 == 0.0 || h1 == 0.0) throw TopologyError("discrete_curvature: duplicate nodes");
        return (2.0 / (h0 + h1)) * ((next - cur) / h1 - (cur - prev) / h0);
    };

    if (boundary.closed()) {
        for (int i = 0; i < n; ++i) {
            const Vec2 prev = near_image(p[(i + n - 1) % n], p[i]);
            const Vec2 next = near_image(p[(i + 1) % n], p[i]);
            kn[i] = stencil(prev, p[i], next);
        }
    } else {
        for (int i = 1; i + 1 < n; ++i) kn[i] = stencil(p[i - 1], p[i], p[i + 1]);
    }
    return kn;
}

Vec2 junction_step(const EnergyModel& model, const JunctionStar& star, double eta, double dt) {
    if (eta == kInf) {
        return weighted_fermat_torricelli(model, star.mis, star.x[0], star.x[1], star.x[2], 1e-10,
                                          5000);
    }
    return star.a - (eta * dt) * grad_junction(model, star);
}

void remesh(GrainNetwork& net, double target_h) {
    const double merge_below = 0.5 * target_h;
    const double split_above = 1.5 * target_h;

    for (GrainBoundary& b : net.boundaries) {
        if (!b.alive) continue;
        auto& nodes = b.nodes;
        const size_t min_nodes = b.closed() ? 4 : 2;

        // merge pass: drop a node when either adjacent segment gets short
        // (interior nodes only for open boundaries; any node on a loop)
        bool merged = true;
        while (merged && nodes.size() > min_nodes) {
            merged = false;
            const size_t n = nodes.size();
            const size_t first = b.closed() ? 0 : 1;
            const size_t last = b.closed() ? n - 1 : n - 2;
            for (size_t i = first; i <= last; ++i) {
                const Vec2 prev = (i == 0) ? near_image(nodes.back(), nodes[0]) : nodes[i - 1];
                const Vec2 next =
                    (i + 1 == n) ? near_image(nodes.front(), nodes[i]) : nodes[i + 1];
                if (std::min(norm(nodes[i] - prev), norm(next - nodes[i])) < merge_below) {
                    nodes.erase(nodes.begin() + static_cast<long>(i));
                    merged = true;
                    break;
                }
            }
        }

        // split pass: midpoint insertion until no segment is too long
        bool split = true;
        while (split) {
            split = false;
            const size_t n = nodes.size();
            for (size_t i = 0; i + 1 < n + (b.closed() ? 1 : 0); ++i) {
                const Vec2 a = nodes[i];
                const Vec2 c = (i + 1 < n) ? nodes[i + 1] : near_image(nodes[0], nodes[i]);
                if (norm(c - a) > split_above) {
                    nodes.insert(nodes.begin() + static_cast<long>(i) + 1, 0.5 * (a + c));
                    split = true;
                    break;
                }
            }
        }
    }
}

namespace {

double min_interior_spacing(const GrainNetwork& net) {
    double h = kInf;
    for (const GrainBoundary& b : net.boundaries) {
        if (!b.alive) continue;
        const bool has_interior = b.closed() ? b.nodes.size() >= 3 : b.nodes.size() >= 3;
        if (!has_interior) continue;
        for (size_t i = 0; i + 1 < b.nodes.size(); ++i) {
            h = std::min(h, norm(b.nodes[i + 1] - b.nodes[i]));
        }
        if (b.closed()) h = std::min(h, torus_dist(b.nodes.front(), b.nodes.back()));
    }
    return h;
}

double min_junction_arm(const GrainNetwork& net) {
    double h = kInf;
    for (const GrainBoundary& b : net.boundaries) {
        if (!b.alive || b.closed()) continue;
        h = std::min(h, norm(b.nodes[1] - b.nodes[0]));
        h = std::min(h, norm(b.nodes[b.nodes.size() - 1] - b.nodes[b.nodes.size() - 2]));
    }
    return h;
}

double max_grain_boundary_length(const GrainNetwork& net) {
    std::vector<double> per_grain(net.grains.size(), 0.0);
    for (const GrainBoundary& b : net.boundaries) {
        if (!b.alive) continue;
        const double len = b.length();
        per_grain[b.grain_left] += len;
        per_grain[b.grain_right] += len;
    }
    double m = 0.0;
    for (double v : per_grain) m = std::max(m, v);
    return m;
}

}  // namespace

double stable_network_dt(const EnergyModel& model, const GrainNetwork& net,
                         const CurvatureConfig& cfg) {
    const double smax = std::max(model.sigma_max(), 1e-300);
    double dt = cfg.t_end;
    if (!cfg.vertex_model()) {
        const double h = min_interior_spacing(net);
        if (h < kInf) dt = std::min(dt, 0.2 * h * h / (cfg.mu * smax));
    }
    if (!cfg.herring() && cfg.eta > 0.0) {
        // junction channel: explicit Euler on a Lipschitz gradient with
        // constant <= 3 sigma_max / arm
        dt = std::min(dt, 0.2 * min_junction_arm(net) / (cfg.eta * 3.0 * smax));
    }
    if (cfg.gamma > 0.0) {
        // orientation channel: curvature of E in alpha is bounded by
        // 2 * max|sigma''| * (grain boundary length); builtin has |s''|<=2
        const double lmax = max_grain_boundary_length(net);
        if (lmax > 0.0) dt = std::min(dt, 0.2 / (cfg.gamma * 2.0 * 2.0 * lmax));
    }
    return dt;
}

DissipationReport network_step(const EnergyModel& model, GrainNetwork& net,
                               const CurvatureConfig& cfg) {
    DissipationReport report;
    report.e_before = network_energy(model, net);

    const double smax = model.sigma_max();
    if (!cfg.vertex_model()) {
        const double h = min_interior_spacing(net);
        if (h < kInf && cfg.dt > 0.2 * h * h / (cfg.mu * smax) * (1.0 + 1e-9)) {
            throw CflError("network_step: dt exceeds 0.2 h^2 / (mu sigma_max)");
        }
    }
    if (!cfg.herring()) {
        const double arm = min_junction_arm(net);
        if (arm < kInf && cfg.dt * cfg.eta * 3.0 * smax > 0.5 * arm) {
            throw CflError("network_step: dt exceeds the junction stability bound");
        }
    }

    // boundary nodes: v_n = mu sigma(mis) kappa n at interior nodes
    if (!cfg.vertex_model()) {
        for (GrainBoundary& b : net.boundaries) {
            if (!b.alive) continue;
            const auto kn = discrete_curvature(b);
            const double speed = cfg.mu * model.sigma(b.misorientation);
            const size_t n = b.nodes.size();
            const size_t lo = b.closed() ? 0 : 1;
            const size_t hi = b.closed() ? n : n - 1;
            std::vector<double> ds(n, 0.0);  // arclength weight per node
            for (size_t i = 0; i + 1 < n; ++i) {
                const double seg = norm(b.nodes[i + 1] - b.nodes[i]);
                ds[i] += 0.5 * seg;
                ds[i + 1] += 0.5 * seg;
            }
            if (b.closed()) {
                const double seg = torus_dist(b.nodes.front(), b.nodes.back());
                ds.front() += 0.5 * seg;
                ds.back() += 0.5 * seg;
            }
            for (size_t i = lo; i < hi; ++i) {
                const Vec2 v = speed * kn[i];
                b.nodes[i] += cfg.dt * v;
                report.dissipated += cfg.dt * norm2(v) * ds[i] / cfg.mu;
            }
        }
    }

    // junction positions
    if (cfg.herring()) {
        for (size_t j = 0; j < net.junctions.size(); ++j) {
            if (!net.junctions[j].alive) continue;
            const JunctionStar star = net.junction_star(static_cast<int>(j));
            Vec2 target;
            try {
                target = weighted_fermat_torricelli(model, star.mis, star.x[0], star.x[1],
                                                    star.x[2], 1e-10, 2000);
            } catch (const ConvergenceError&) {
                ++report.wft_projection_failures;
                continue;
            }
            Vec2 delta = target - star.a;
            const double cap = 0.45 * star.min_arm_length();
            if (norm(delta) > cap) delta *= cap / norm(delta);
            net.displace_junction(static_cast<int>(j), delta);
        }
    } else if (cfg.eta > 0.0) {
        std::vector<std::pair<int, Vec2>> moves;
        for (size_t j = 0; j < net.junctions.size(); ++j) {
            if (!net.junctions[j].alive) continue;
            const JunctionStar star = net.junction_star(static_cast<int>(j));
            const Vec2 v = -cfg.eta * grad_junction(model, star);
            Vec2 delta = cfg.dt * v;
            const double cap = 0.45 * star.min_arm_length();
            if (norm(delta) > cap) delta *= cap / norm(delta);
            moves.emplace_back(static_cast<int>(j), delta);
            report.dissipated += cfg.dt * norm2(v) / cfg.eta;
        }
        for (const auto& [j, delta] : moves) net.displace_junction(j, delta);
    }

    report.dissipated += orientation_step(model, net, cfg.gamma, cfg.dt);
    net.time += cfg.dt;
    report.e_after = network_energy(model, net);
    return report;
}

RunResult run(const EnergyModel& model, GrainNetwork& net, const CurvatureConfig& cfg,
              const RunObserver& observer) {
    RunResult result;
    const EventThresholds th = EventThresholds::from_target_h(cfg.target_h);
    const int n0 = net.n_alive_grains();
    const int stop_count =
        std::max(1, static_cast<int>(std::ceil((1.0 - cfg.stop_fraction) * n0)));

    if (!cfg.vertex_model()) remesh(net, cfg.target_h);

    CurvatureConfig step_cfg = cfg;
    for (int step = 0;; ++step) {
        const auto events = detect_events(net, th);
        if (!events.empty()) {
            EventLog log = apply_events(model, net, events, th);
            result.events.insert(result.events.end(), log.begin(), log.end());
            if (cfg.vertex_model()) {
                // boundaries merged by surgery must go back to straight chords
                for (GrainBoundary& b : net.boundaries) {
                    if (b.alive && !b.closed() && b.nodes.size() != 2) {
                        b.nodes = {b.nodes.front(), b.nodes.back()};
                    }
                }
            } else {
                remesh(net, cfg.target_h);
            }
        }
        if (net.n_alive_grains() <= stop_count || net.time >= cfg.t_end) break;

        if (!cfg.vertex_model() && step % 16 == 0) remesh(net, cfg.target_h);
        step_cfg.dt = cfg.dt > 0.0 ? cfg.dt : stable_network_dt(model, net, cfg);
        DissipationReport rep =
            cfg.vertex_model()
                ? [&] {
                      DissipationReport r;
                      r.e_before = network_energy(model, net);
                      network_vertex_step(model, net, step_cfg);
                      r.e_after = network_energy(model, net);
                      return r;
                  }()
                : network_step(model, net, step_cfg);

        result.time.push_back(net.time);
        result.energy.push_back(rep.e_after);
        result.grain_count.push_back(net.n_alive_grains());
        result.steps = step + 1;
        result.dt = step_cfg.dt;
        if (observer.on_step) observer.on_step(net, rep);
        if (observer.on_snapshot && cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0) {
            observer.on_snapshot(net, step);
        }
    }
    if (observer.on_snapshot) observer.on_snapshot(net, result.steps);
    return result;
}

}  // namespace gbnet
