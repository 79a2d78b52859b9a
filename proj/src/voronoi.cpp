#include "gbnet/voronoi.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/polygon/voronoi.hpp>

#include "gbnet/constraint.hpp"
#include "gbnet/rng.hpp"

namespace gbnet {

namespace {

struct IntPoint {
    std::int32_t x, y;
};

}  // namespace
}  // namespace gbnet

namespace boost::polygon {
template <>
struct geometry_concept<gbnet::IntPoint> {
    typedef point_concept type;
};
template <>
struct point_traits<gbnet::IntPoint> {
    typedef std::int32_t coordinate_type;
    static coordinate_type get(const gbnet::IntPoint& p, orientation_2d orient) {
        return orient == HORIZONTAL ? p.x : p.y;
    }
};
}  // namespace boost::polygon

namespace gbnet {

namespace {

// One construction attempt; throws TopologyError on degeneracies.
GrainNetwork build_from_seeds(const std::vector<Vec2>& seeds, double orientation_std,
                              std::mt19937_64& rng) {
    const int n = static_cast<int>(seeds.size());
    const int t = (n < 32) ? 2 : 1;  // replication half-width
    const int span = 2 * t + 1;
    const double scale = 1 << 26;

    std::vector<IntPoint> sites;
    std::vector<std::pair<int, Vec2>> site_info;  // (seed index, tile offset)
    sites.reserve(n * span * span);
    for (int ty = -t; ty <= t; ++ty) {
        for (int tx = -t; tx <= t; ++tx) {
            for (int i = 0; i < n; ++i) {
                const std::int64_t bx = std::llround(seeds[i].x * scale);
                const std::int64_t by = std::llround(seeds[i].y * scale);
                sites.push_back({static_cast<std::int32_t>(bx + std::int64_t(tx) * (1 << 26)),
                                 static_cast<std::int32_t>(by + std::int64_t(ty) * (1 << 26))});
                site_info.emplace_back(i, Vec2{double(tx), double(ty)});
            }
        }
    }

    boost::polygon::voronoi_diagram<double> vd;
    boost::polygon::construct_voronoi(sites.begin(), sites.end(), &vd);

    GrainNetwork net;
    net.grains.assign(n, Grain{});
    std::normal_distribution<double> gauss(0.0, orientation_std);
    for (Grain& g : net.grains) g.orientation = gauss(rng);

    // canonical combinatorial key of a Voronoi vertex in the quotient:
    // sorted (seed id, tile - floor(vertex position)) triples
    using VertexKey = std::vector<std::pair<int, std::pair<int, int>>>;
    auto vertex_key = [&](const boost::polygon::voronoi_diagram<double>::vertex_type& v,
                          const Vec2& pos) {
        VertexKey key;
        const double fx = std::floor(pos.x), fy = std::floor(pos.y);
        auto* e = v.incident_edge();
        do {
            const int site = static_cast<int>(e->cell()->source_index());
            const auto& [seed_id, tile] = site_info[site];
            key.emplace_back(seed_id, std::make_pair(int(tile.x - fx), int(tile.y - fy)));
            e = e->rot_next();
        } while (e != v.incident_edge());
        if (key.size() != 3) throw TopologyError("voronoi: non-trivalent vertex (degenerate seeds)");
        std::sort(key.begin(), key.end());
        return key;
    };

    auto vertex_pos = [&](const boost::polygon::voronoi_diagram<double>::vertex_type& v) {
        return Vec2{v.x() / scale, v.y() / scale};
    };

    std::map<VertexKey, int> junction_of;
    for (const auto& v : vd.vertices()) {
        const Vec2 pos = vertex_pos(v);
        if (pos.x < 0.0 || pos.x >= 1.0 || pos.y < 0.0 || pos.y >= 1.0) continue;
        const VertexKey key = vertex_key(v, pos);
        if (junction_of.count(key)) throw TopologyError("voronoi: duplicate canonical vertex");
        junction_of[key] = static_cast<int>(net.junctions.size());
        Junction j;
        j.pos = pos;
        net.junctions.push_back(j);
    }

    for (const auto& e : vd.edges()) {
        if (!e.is_primary() || !e.is_finite()) continue;
        if (&e > e.twin()) continue;  // visit each edge pair once
        const Vec2 p0 = vertex_pos(*e.vertex0());
        const Vec2 p1 = vertex_pos(*e.vertex1());
        const Vec2 mid = 0.5 * (p0 + p1);
        if (mid.x < 0.0 || mid.x >= 1.0 || mid.y < 0.0 || mid.y >= 1.0) continue;

        const auto k0 = vertex_key(*e.vertex0(), p0);
        const auto k1 = vertex_key(*e.vertex1(), p1);
        const auto it0 = junction_of.find(k0);
        const auto it1 = junction_of.find(k1);
        if (it0 == junction_of.end() || it1 == junction_of.end()) {
            throw TopologyError("voronoi: edge endpoint vertex not canonicalized");
        }

        GrainBoundary b;
        b.j0 = it0->second;
        b.j1 = it1->second;
        // exact junction coordinates, lifted to the continuous edge frame
        b.nodes = {near_image(net.junctions[b.j0].pos, p0), near_image(net.junctions[b.j1].pos, p1)};

        const auto& [seed_a, tile_a] = site_info[e.cell()->source_index()];
        const auto& [seed_b, tile_b] = site_info[e.twin()->cell()->source_index()];
        const Vec2 sa = seeds[seed_a] + tile_a;
        const double side = cross(p1 - p0, sa - p0);
        if (side == 0.0) throw TopologyError("voronoi: degenerate zero-length edge");
        const int gl = side > 0.0 ? seed_a : seed_b;
        const int gr = side > 0.0 ? seed_b : seed_a;
        b.grain_left = gl;
        b.grain_right = gr;
        b.misorientation =
            wrap_misorientation(net.grains[gl].orientation - net.grains[gr].orientation);
        const int bid = static_cast<int>(net.boundaries.size());
        net.boundaries.push_back(std::move(b));
        net.grains[gl].boundaries.push_back(bid);
        net.grains[gr].boundaries.push_back(bid);
    }

    // junction incidence lists
    std::vector<int> fill(net.junctions.size(), 0);
    for (size_t bi = 0; bi < net.boundaries.size(); ++bi) {
        const GrainBoundary& b = net.boundaries[bi];
        for (const int j : {b.j0, b.j1}) {
            if (fill[j] >= 3) throw TopologyError("voronoi: junction with more than 3 boundaries");
            net.junctions[j].boundaries[fill[j]++] = static_cast<int>(bi);
        }
    }
    for (int f : fill) {
        if (f != 3) throw TopologyError("voronoi: junction with fewer than 3 boundaries");
    }

    net.validate();
    return net;
}

}  // namespace

GrainNetwork init_voronoi(int n_grains, double orientation_std, std::uint64_t seed) {
    if (n_grains < 3) throw std::invalid_argument("init_voronoi: need at least 3 grains");
    for (int attempt = 0; attempt < 10; ++attempt) {
        std::mt19937_64 rng = make_stream(seed, 0x56726e6f69ULL + attempt);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<Vec2> seeds(n_grains);
        for (Vec2& s : seeds) s = {unif(rng), unif(rng)};
        try {
            return build_from_seeds(seeds, orientation_std, rng);
        } catch (const TopologyError&) {
            continue;  // degenerate placement; retry with fresh seeds
        }
    }
    throw TopologyError("init_voronoi: degenerate seed placement after 10 retries");
}

}  // namespace gbnet
