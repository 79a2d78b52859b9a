#include "gbnet/critical_events.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "gbnet/sim_config.hpp"

namespace gbnet {

namespace {

int other_grain(const GrainBoundary& b, int g) {
    return b.grain_left == g ? b.grain_right : b.grain_left;
}

void remove_id(std::vector<int>& v, int id) {
    const auto it = std::find(v.begin(), v.end(), id);
    if (it != v.end()) v.erase(it);
}

// Reverse a boundary's direction in place (swaps ends, sides and the
// misorientation sign).
void reverse_boundary(GrainBoundary& b) {
    std::reverse(b.nodes.begin(), b.nodes.end());
    std::swap(b.j0, b.j1);
    std::swap(b.grain_left, b.grain_right);
    b.misorientation = wrap_misorientation(-b.misorientation);
}

void replace_incidence(Junction& j, int old_b, int new_b) {
    for (int& b : j.boundaries) {
        if (b == old_b) {
            b = new_b;
            return;
        }
    }
    throw TopologyError("critical_events: incidence replacement target missing");
}

struct Surgeon {
    const EnergyModel& model;
    GrainNetwork& net;
    const EventThresholds& th;
    EventLog& log;
    std::deque<int> cascade;  // grains forced below 3 sides

    void note(const std::string& kind, std::vector<int> grains, std::vector<int> bnds,
              double de) {
        log.push_back(EventRecord{net.time, kind, std::move(grains), std::move(bnds), de});
    }

    void queue_if_degenerate(int g) {
        if (g >= 0 && net.grains[g].alive && net.grains[g].boundaries.size() < 3) {
            cascade.push_back(g);
        }
    }

    // ---- T1 / facet interchange ------------------------------------------

    bool neighbor_switch(int bid) {
        GrainBoundary& b = net.boundaries[bid];
        if (!b.alive || b.closed() || b.j0 == b.j1) return false;
        const int L = b.grain_left, R = b.grain_right;
        if (L == R) return false;

        const int J0 = b.j0, J1 = b.j1;
        std::array<int, 2> ext0{-1, -1}, ext1{-1, -1};
        int n0 = 0, n1 = 0;
        for (int e : net.junctions[J0].boundaries) {
            if (e != bid) {
                if (n0 == 2) return false;
                ext0[n0++] = e;
            }
        }
        for (int e : net.junctions[J1].boundaries) {
            if (e != bid) {
                if (n1 == 2) return false;
                ext1[n1++] = e;
            }
        }
        if (n0 != 2 || n1 != 2) return false;
        // all four externals must be distinct open boundaries
        std::set<int> uniq{ext0[0], ext0[1], ext1[0], ext1[1]};
        if (uniq.size() != 4) return false;
        for (int e : uniq) {
            if (net.boundaries[e].closed() || net.boundaries[e].j0 == net.boundaries[e].j1)
                return false;
        }

        auto grain_pair = [&](int e) {
            return std::array<int, 2>{net.boundaries[e].grain_left, net.boundaries[e].grain_right};
        };
        auto third_grain = [&](const std::array<int, 2>& ea, const std::array<int, 2>& eb) {
            for (int ga : ea) {
                if (ga == L || ga == R) continue;
                for (int gb : eb) {
                    if (ga == gb) return ga;
                }
            }
            return -1;
        };
        const int P = third_grain(grain_pair(ext0[0]), grain_pair(ext0[1]));
        const int Q = third_grain(grain_pair(ext1[0]), grain_pair(ext1[1]));
        if (P < 0 || Q < 0 || P == Q) return false;

        auto borders = [&](int e, int g) {
            return net.boundaries[e].grain_left == g || net.boundaries[e].grain_right == g;
        };
        const int e1 = borders(ext0[0], L) ? ext0[0] : ext0[1];  // L|P at J0
        const int e2 = ext0[0] == e1 ? ext0[1] : ext0[0];        // R|P at J0
        const int e3 = borders(ext1[0], L) ? ext1[0] : ext1[1];  // L|Q at J1
        const int e4 = ext1[0] == e3 ? ext1[1] : ext1[0];        // R|Q at J1
        if (!borders(e1, L) || !borders(e2, R) || !borders(e3, L) || !borders(e4, R)) return false;

        const double e_before = network_energy(model, net);

        const Vec2 a0 = net.junctions[J0].pos;
        const Vec2 a1 = near_image(net.junctions[J1].pos, a0);
        const Vec2 u = normalized(a1 - a0);
        const Vec2 m = 0.5 * (a0 + a1);
        const double half = 0.55 * th.delta_l;
        const Vec2 nl = m + half * perp(u);  // toward L
        const Vec2 nr = m - half * perp(u);  // toward R

        // junction slot J0 becomes the L-side junction {e1, e3, b},
        // slot J1 the R-side junction {e2, e4, b}
        net.junctions[J0].pos = wrap_unit(nl);
        net.junctions[J0].boundaries = {e1, e3, bid};
        net.junctions[J1].pos = wrap_unit(nr);
        net.junctions[J1].boundaries = {e2, e4, bid};

        auto rewire = [&](int e, int from, int to) {
            GrainBoundary& gb = net.boundaries[e];
            if (gb.j0 == from) {
                gb.j0 = to;
                gb.nodes.front() = near_image(net.junctions[to].pos, gb.nodes.front());
            } else if (gb.j1 == from) {
                gb.j1 = to;
                gb.nodes.back() = near_image(net.junctions[to].pos, gb.nodes.back());
            } else {
                throw TopologyError("neighbor_switch: external not incident to junction");
            }
        };
        rewire(e1, J0, J0);
        rewire(e3, J1, J0);
        rewire(e2, J0, J1);
        rewire(e4, J1, J1);

        b.nodes = {nl, nr};
        // walking nl -> nr, Q lies on the +u side
        b.grain_left = Q;
        b.grain_right = P;
        b.misorientation = wrap_misorientation(net.grains[Q].orientation -
                                               net.grains[P].orientation);

        remove_id(net.grains[L].boundaries, bid);
        remove_id(net.grains[R].boundaries, bid);
        net.grains[P].boundaries.push_back(bid);
        net.grains[Q].boundaries.push_back(bid);

        note("neighbor_switch", {L, R, P, Q}, {bid}, network_energy(model, net) - e_before);
        queue_if_degenerate(L);
        queue_if_degenerate(R);
        return true;
    }

    // ---- grain removal ----------------------------------------------------

    bool remove_loop_grain(int g, int bid) {
        GrainBoundary& b = net.boundaries[bid];
        const int other = other_grain(b, g);
        const double e_before = network_energy(model, net);
        b.alive = false;
        net.grains[g].alive = false;
        remove_id(net.grains[other].boundaries, bid);
        if (net.grains[other].boundaries.empty()) {
            net.grains[other].alive = false;  // lone grain covering the domain
        }
        note("grain_disappearance", {g, other}, {bid}, network_energy(model, net) - e_before);
        return true;
    }

    bool remove_lens_grain(int g, const std::vector<CycleEdge>& cycle) {
        const int b1 = cycle[0].boundary, b2 = cycle[1].boundary;
        const int Ja = cycle[0].forward ? net.boundaries[b1].j1 : net.boundaries[b1].j0;
        const int Jb = cycle[1].forward ? net.boundaries[b2].j1 : net.boundaries[b2].j0;
        if (Ja == Jb) return false;
        const int A = other_grain(net.boundaries[b1], g);
        const int B = other_grain(net.boundaries[b2], g);
        if (A == B) return false;  // would create a same-grain interface

        int ea = -1, eb = -1;
        for (int e : net.junctions[Ja].boundaries)
            if (e != b1 && e != b2) ea = e;
        for (int e : net.junctions[Jb].boundaries)
            if (e != b1 && e != b2) eb = e;
        if (ea < 0 || eb < 0) return false;
        const double e_before = network_energy(model, net);

        if (ea == eb) {
            // merging would turn the A|B interface into a free-floating
            // loop (an island); the adjacent 2-sided grains resolve this
            // configuration instead
            return false;
        } else {
            GrainBoundary& first = net.boundaries[ea];
            GrainBoundary& second = net.boundaries[eb];
            if (first.j0 == first.j1 || second.j0 == second.j1) return false;
            if (first.j1 != Ja) reverse_boundary(first);
            if (second.j0 != Jb) reverse_boundary(second);
            if (first.grain_left != second.grain_left ||
                first.grain_right != second.grain_right) {
                return false;  // inconsistent sides; leave for later evolution
            }
            for (const Vec2& p : second.nodes) {
                first.nodes.push_back(near_image(p, first.nodes.back()));
            }
            first.j1 = second.j1;
            replace_incidence(net.junctions[second.j1], eb, ea);
            second.alive = false;
            remove_id(net.grains[A].boundaries, eb);
            remove_id(net.grains[B].boundaries, eb);
        }

        net.boundaries[b1].alive = false;
        net.boundaries[b2].alive = false;
        net.junctions[Ja].alive = false;
        net.junctions[Jb].alive = false;
        net.grains[g].alive = false;
        remove_id(net.grains[A].boundaries, b1);
        remove_id(net.grains[A].boundaries, b2);
        remove_id(net.grains[B].boundaries, b1);
        remove_id(net.grains[B].boundaries, b2);

        note("grain_disappearance", {g, A, B}, {b1, b2},
             network_energy(model, net) - e_before);
        queue_if_degenerate(A);
        queue_if_degenerate(B);
        return true;
    }

    bool collapse_triangle(int g, const std::vector<CycleEdge>& cycle) {
        // ordered junctions and the external boundary at each of them
        std::array<int, 3> J, ext, cyc, M;
        for (int k = 0; k < 3; ++k) {
            const CycleEdge& e = cycle[k];
            cyc[k] = e.boundary;
            J[k] = e.forward ? net.boundaries[e.boundary].j0 : net.boundaries[e.boundary].j1;
            M[k] = other_grain(net.boundaries[e.boundary], g);
        }
        if (J[0] == J[1] || J[1] == J[2] || J[0] == J[2]) return false;
        for (int k = 0; k < 3; ++k) {
            ext[k] = -1;
            for (int e : net.junctions[J[k]].boundaries) {
                if (e != cyc[0] && e != cyc[1] && e != cyc[2]) ext[k] = e;
            }
            if (ext[k] < 0) return false;
        }
        if (ext[0] == ext[1] || ext[1] == ext[2] || ext[0] == ext[2]) return false;

        const double e_before = network_energy(model, net);
        const Vec2 base = net.junctions[J[0]].pos;
        Vec2 c{0.0, 0.0};
        for (int k = 0; k < 3; ++k) c += near_image(net.junctions[J[k]].pos, base);
        c = c / 3.0;

        const int hub = J[0];
        net.junctions[hub].pos = wrap_unit(c);
        net.junctions[hub].boundaries = {ext[0], ext[1], ext[2]};
        for (int k = 0; k < 3; ++k) {
            GrainBoundary& e = net.boundaries[ext[k]];
            if (e.j0 == J[k]) {
                e.j0 = hub;
                e.nodes.front() = near_image(net.junctions[hub].pos, e.nodes.front());
            } else if (e.j1 == J[k]) {
                e.j1 = hub;
                e.nodes.back() = near_image(net.junctions[hub].pos, e.nodes.back());
            } else {
                throw TopologyError("collapse_triangle: external not incident");
            }
        }
        net.junctions[J[1]].alive = false;
        net.junctions[J[2]].alive = false;
        for (int k = 0; k < 3; ++k) {
            net.boundaries[cyc[k]].alive = false;
            remove_id(net.grains[M[k]].boundaries, cyc[k]);
        }
        net.grains[g].alive = false;

        note("grain_disappearance", {g, M[0], M[1], M[2]}, {cyc[0], cyc[1], cyc[2]},
             network_energy(model, net) - e_before);
        for (int k = 0; k < 3; ++k) queue_if_degenerate(M[k]);
        return true;
    }

    // Shrink a many-sided grain by switching its shortest side; repeated
    // passes reduce it to a triangle, which then collapses.
    bool reduce_by_switch(int g) {
        const Grain& grain = net.grains[g];
        int best = -1;
        double best_len = kInf;
        for (int b : grain.boundaries) {
            const double len = net.boundaries[b].length();
            if (len < best_len) {
                best_len = len;
                best = b;
            }
        }
        return best >= 0 && neighbor_switch(best);
    }

    bool remove_grain(int g) {
        if (!net.grains[g].alive) return false;
        for (int guard = 0; guard < 16 && net.grains[g].alive; ++guard) {
            std::vector<CycleEdge> cycle;
            try {
                cycle = net.grain_cycle(g);
            } catch (const TopologyError&) {
                return false;
            }
            switch (cycle.size()) {
                case 1:
                    return remove_loop_grain(g, cycle[0].boundary);
                case 2:
                    return remove_lens_grain(g, cycle);
                case 3:
                    return collapse_triangle(g, cycle);
                default:
                    if (!reduce_by_switch(g)) return false;
                    break;  // one side fewer; loop again
            }
        }
        return false;
    }

    void drain_cascade() {
        while (!cascade.empty()) {
            const int g = cascade.front();
            cascade.pop_front();
            if (net.grains[g].alive && net.grains[g].boundaries.size() < 3) remove_grain(g);
        }
    }
};

}  // namespace

std::vector<CriticalEvent> detect_events(const GrainNetwork& net, const EventThresholds& th) {
    std::vector<CriticalEvent> short_bnd, small_grain, close_junc;

    std::vector<bool> grain_flagged(net.grains.size(), false);
    for (size_t gi = 0; gi < net.grains.size(); ++gi) {
        const Grain& g = net.grains[gi];
        if (!g.alive) continue;
        bool flag = g.boundaries.size() < 3;
        double area = 0.0;
        if (!flag) {
            try {
                area = net.grain_signed_area(static_cast<int>(gi));
            } catch (const TopologyError&) {
                continue;
            }
            flag = area < th.delta_a;
        }
        if (flag) {
            grain_flagged[gi] = true;
            small_grain.push_back(
                CriticalEvent{EventKind::RemoveGrain, static_cast<int>(gi), -1, area});
        }
    }

    for (size_t bi = 0; bi < net.boundaries.size(); ++bi) {
        const GrainBoundary& b = net.boundaries[bi];
        if (!b.alive || b.closed()) continue;
        if (grain_flagged[b.grain_left] || grain_flagged[b.grain_right]) continue;
        const double len = b.length();
        if (len < th.delta_l) {
            short_bnd.push_back(
                CriticalEvent{EventKind::NeighborSwitch, -1, static_cast<int>(bi), len});
        } else if (len < 3.0 * th.delta_l && b.j0 != b.j1 &&
                   torus_dist(net.junctions[b.j0].pos, net.junctions[b.j1].pos) < th.delta_j) {
            close_junc.push_back(
                CriticalEvent{EventKind::NeighborSwitch, -1, static_cast<int>(bi), len});
        }
    }

    auto by_severity = [](const CriticalEvent& a, const CriticalEvent& b) {
        return a.severity < b.severity;
    };
    std::sort(short_bnd.begin(), short_bnd.end(), by_severity);
    std::sort(small_grain.begin(), small_grain.end(), by_severity);
    std::sort(close_junc.begin(), close_junc.end(), by_severity);

    std::vector<CriticalEvent> out;
    out.insert(out.end(), short_bnd.begin(), short_bnd.end());
    out.insert(out.end(), small_grain.begin(), small_grain.end());
    out.insert(out.end(), close_junc.begin(), close_junc.end());
    return out;
}

EventLog apply_events(const EnergyModel& model, GrainNetwork& net,
                      const std::vector<CriticalEvent>& events, const EventThresholds& th) {
    EventLog log;
    Surgeon s{model, net, th, log, {}};
    for (const CriticalEvent& ev : events) {
        if (ev.kind == EventKind::NeighborSwitch) {
            const GrainBoundary& b = net.boundaries[ev.boundary];
            if (!b.alive || b.closed() || b.j0 == b.j1) continue;
            const double len = b.length();
            const bool still_short = len < th.delta_l;
            const bool still_close =
                len < 3.0 * th.delta_l &&
                torus_dist(net.junctions[b.j0].pos, net.junctions[b.j1].pos) < th.delta_j;
            if (!still_short && !still_close) continue;
            s.neighbor_switch(ev.boundary);
        } else {
            const Grain& g = net.grains[ev.grain];
            if (!g.alive) continue;
            bool still = g.boundaries.size() < 3;
            if (!still) {
                try {
                    still = net.grain_signed_area(ev.grain) < th.delta_a;
                } catch (const TopologyError&) {
                    continue;
                }
            }
            if (still) s.remove_grain(ev.grain);
        }
        s.drain_cascade();
    }
    return log;
}

}  // namespace gbnet
