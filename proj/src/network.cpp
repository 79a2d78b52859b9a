#include "gbnet/network.hpp"

#include <algorithm>
#include <cmath>

#include "gbnet/constraint.hpp"

namespace gbnet {

double polyline_length(const std::vector<Vec2>& nodes, bool closed) {
    double len = 0.0;
    for (size_t i = 0; i + 1 < nodes.size(); ++i) len += norm(nodes[i + 1] - nodes[i]);
    if (closed && nodes.size() > 1) len += torus_dist(nodes.front(), nodes.back());
    return len;
}

double GrainBoundary::length() const { return polyline_length(nodes, closed()); }

int GrainNetwork::n_alive_grains() const {
    return static_cast<int>(std::count_if(grains.begin(), grains.end(),
                                          [](const Grain& g) { return g.alive; }));
}
int GrainNetwork::n_alive_boundaries() const {
    return static_cast<int>(std::count_if(boundaries.begin(), boundaries.end(),
                                          [](const GrainBoundary& b) { return b.alive; }));
}
int GrainNetwork::n_alive_junctions() const {
    return static_cast<int>(std::count_if(junctions.begin(), junctions.end(),
                                          [](const Junction& j) { return j.alive; }));
}

std::vector<CycleEdge> GrainNetwork::grain_cycle(int grain) const {
    const Grain& g = grains[grain];
    if (!g.alive || g.boundaries.empty()) throw TopologyError("grain_cycle: dead or empty grain");

    const int b0 = g.boundaries.front();
    if (boundaries[b0].closed()) {
        if (g.boundaries.size() != 1) {
            throw TopologyError("grain_cycle: closed boundary mixed with junctions");
        }
        return {CycleEdge{b0, boundaries[b0].grain_left == grain}};
    }

    std::vector<CycleEdge> cycle;
    CycleEdge cur{b0, boundaries[b0].grain_left == grain};
    const int start_boundary = cur.boundary;
    for (size_t guard = 0; guard <= g.boundaries.size(); ++guard) {
        cycle.push_back(cur);
        const GrainBoundary& b = boundaries[cur.boundary];
        const int end_junction = cur.forward ? b.j1 : b.j0;
        // the unique other boundary at end_junction that keeps `grain` on
        // its left when walked away from end_junction
        int next = -1;
        bool next_forward = false;
        for (int cand : junctions[end_junction].boundaries) {
            if (cand == cur.boundary) continue;
            const GrainBoundary& nb = boundaries[cand];
            if (nb.j0 == end_junction && nb.grain_left == grain) {
                if (next >= 0) throw TopologyError("grain_cycle: ambiguous continuation");
                next = cand;
                next_forward = true;
            } else if (nb.j1 == end_junction && nb.grain_right == grain) {
                if (next >= 0) throw TopologyError("grain_cycle: ambiguous continuation");
                next = cand;
                next_forward = false;
            }
        }
        if (next < 0) throw TopologyError("grain_cycle: no continuation at junction");
        cur = CycleEdge{next, next_forward};
        if (cur.boundary == start_boundary) {
            if (cycle.size() != g.boundaries.size()) {
                throw TopologyError("grain_cycle: cycle does not cover the incidence list");
            }
            return cycle;
        }
    }
    throw TopologyError("grain_cycle: walk did not close");
}

std::vector<Vec2> GrainNetwork::grain_polygon(int grain) const {
    const auto cycle = grain_cycle(grain);
    std::vector<Vec2> poly;
    const GrainBoundary& first = boundaries[cycle.front().boundary];
    Vec2 cursor = cycle.front().forward ? first.nodes.front() : first.nodes.back();
    for (const CycleEdge& e : cycle) {
        const GrainBoundary& b = boundaries[e.boundary];
        const size_t n = b.nodes.size();
        // append all nodes except the far endpoint, unwrapped near cursor
        for (size_t k = 0; k + 1 < n || b.closed(); ++k) {
            const Vec2 raw = e.forward ? b.nodes[k] : b.nodes[n - 1 - k];
            cursor = near_image(raw, cursor);
            poly.push_back(cursor);
            if (b.closed() && k + 1 == n) break;
        }
        if (!b.closed()) {
            const Vec2 far = e.forward ? b.nodes.back() : b.nodes.front();
            cursor = near_image(far, cursor);
        }
    }
    return poly;
}

double GrainNetwork::grain_signed_area(int grain) const {
    const auto poly = grain_polygon(grain);
    double twice = 0.0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % poly.size()];
        twice += cross(p, q);
    }
    return 0.5 * twice;
}

Vec2 GrainNetwork::boundary_anchor(int b, int j, bool far_end, const Vec2& lift_ref) const {
    const GrainBoundary& gb = boundaries[b];
    Vec2 raw;
    if (gb.j0 == j) {
        raw = far_end ? gb.nodes.back() : gb.nodes[1];
    } else if (gb.j1 == j) {
        raw = far_end ? gb.nodes.front() : gb.nodes[gb.nodes.size() - 2];
    } else {
        throw TopologyError("boundary_anchor: boundary not incident to junction");
    }
    return near_image(raw, lift_ref);
}

JunctionStar GrainNetwork::junction_star(int junction, bool use_far_end) const {
    const Junction& j = junctions[junction];
    JunctionStar star;
    star.a = j.pos;
    Vec3 mis;
    for (int k = 0; k < 3; ++k) {
        const int b = j.boundaries[k];
        if (b < 0) throw TopologyError("junction_star: junction not trivalent");
        star.x[k] = boundary_anchor(b, junction, use_far_end, j.pos);
        mis[k] = boundaries[b].misorientation;
    }
    star.mis = MisorientationTriple(mis);
    return star;
}

void GrainNetwork::refresh_misorientations(double drift_tol) {
    for (GrainBoundary& b : boundaries) {
        if (!b.alive) continue;
        const double fresh =
            wrap_misorientation(grains[b.grain_left].orientation - grains[b.grain_right].orientation);
        if (std::abs(wrap_misorientation(fresh - b.misorientation)) > drift_tol) {
            throw TopologyError("refresh_misorientations: stored misorientation drifted");
        }
        b.misorientation = fresh;
    }
}

void GrainNetwork::displace_junction(int j, const Vec2& delta) {
    Junction& jn = junctions[j];
    jn.pos = wrap_unit(jn.pos + delta);
    for (int b : jn.boundaries) {
        if (b < 0) continue;
        GrainBoundary& gb = boundaries[b];
        if (gb.j0 == j) gb.nodes.front() += delta;
        if (gb.j1 == j) gb.nodes.back() += delta;
    }
}

void GrainNetwork::validate(bool check_euler) const {
    int n_closed = 0;
    for (size_t bi = 0; bi < boundaries.size(); ++bi) {
        const GrainBoundary& b = boundaries[bi];
        if (!b.alive) continue;
        if (b.nodes.size() < 2) throw TopologyError("validate: boundary with fewer than 2 nodes");
        for (size_t k = 0; k + 1 < b.nodes.size(); ++k) {
            const Vec2 d = b.nodes[k + 1] - b.nodes[k];
            if (norm(d) == 0.0) throw TopologyError("validate: duplicate consecutive nodes");
            if (std::abs(d.x) >= 0.5 || std::abs(d.y) >= 0.5) {
                throw TopologyError("validate: polyline jump exceeds half the domain");
            }
        }
        if (b.closed()) {
            ++n_closed;
        } else {
            for (int end = 0; end < 2; ++end) {
                const int j = end == 0 ? b.j0 : b.j1;
                if (j < 0 || j >= static_cast<int>(junctions.size()) || !junctions[j].alive) {
                    throw TopologyError("validate: boundary endpoint junction missing");
                }
                const auto& inc = junctions[j].boundaries;
                if (std::count(inc.begin(), inc.end(), static_cast<int>(bi)) !=
                    (b.j0 == b.j1 ? 2 : 1)) {
                    throw TopologyError("validate: junction incidence list mismatch");
                }
                const Vec2& node = end == 0 ? b.nodes.front() : b.nodes.back();
                if (torus_dist(node, junctions[j].pos) > 1e-9) {
                    throw TopologyError("validate: endpoint node disagrees with junction position");
                }
            }
        }
        if (b.grain_left < 0 || b.grain_right < 0 || !grains[b.grain_left].alive ||
            !grains[b.grain_right].alive) {
            throw TopologyError("validate: boundary with missing side grain");
        }
        const double expect = wrap_misorientation(grains[b.grain_left].orientation -
                                                  grains[b.grain_right].orientation);
        if (std::abs(wrap_misorientation(expect - b.misorientation)) > 1e-10) {
            throw TopologyError("validate: misorientation inconsistent with orientations");
        }
    }
    for (size_t ji = 0; ji < junctions.size(); ++ji) {
        const Junction& j = junctions[ji];
        if (!j.alive) continue;
        for (int b : j.boundaries) {
            if (b < 0 || !boundaries[b].alive) throw TopologyError("validate: junction lists dead boundary");
            if (boundaries[b].j0 != static_cast<int>(ji) && boundaries[b].j1 != static_cast<int>(ji)) {
                throw TopologyError("validate: junction lists non-incident boundary");
            }
        }
    }
    for (size_t gi = 0; gi < grains.size(); ++gi) {
        if (!grains[gi].alive) continue;
        grain_cycle(static_cast<int>(gi));  // throws on broken adjacency
        if (grain_signed_area(static_cast<int>(gi)) <= 0.0) {
            throw TopologyError("validate: non-positive grain area");
        }
    }
    if (check_euler && n_closed == 0) {
        if (n_alive_junctions() != 2 * n_alive_grains()) {
            throw TopologyError("validate: trivalent torus Euler relation violated");
        }
    }
}

double network_energy(const EnergyModel& model, const GrainNetwork& net) {
    double e = 0.0;
    for (const GrainBoundary& b : net.boundaries) {
        if (!b.alive) continue;
        e += model.sigma(b.misorientation) * b.length();
    }
    return e;
}

}  // namespace gbnet
