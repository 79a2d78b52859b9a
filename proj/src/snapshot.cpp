#include "gbnet/snapshot.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gbnet {

namespace {
using json = nlohmann::ordered_json;
constexpr int kSchemaVersion = 1;
}  // namespace

std::string snapshot_to_json(const GrainNetwork& net) {
    json out;
    out["version"] = kSchemaVersion;
    out["time"] = net.time;

    json grains = json::array();
    for (size_t i = 0; i < net.grains.size(); ++i) {
        const Grain& g = net.grains[i];
        if (!g.alive) continue;
        json jg;
        jg["id"] = i;
        jg["orientation"] = g.orientation;
        jg["boundary_ids"] = g.boundaries;
        grains.push_back(std::move(jg));
    }
    out["grains"] = std::move(grains);

    json bnds = json::array();
    for (size_t i = 0; i < net.boundaries.size(); ++i) {
        const GrainBoundary& b = net.boundaries[i];
        if (!b.alive) continue;
        json jb;
        jb["id"] = i;
        jb["misorientation"] = b.misorientation;
        json nodes = json::array();
        for (const Vec2& p : b.nodes) {
            const Vec2 w = wrap_unit(p);
            nodes.push_back(json::array({w.x, w.y}));
        }
        jb["nodes"] = std::move(nodes);
        if (b.closed()) {
            jb["junction_ids"] = nullptr;
        } else {
            jb["junction_ids"] = json::array({b.j0, b.j1});
        }
        jb["grain_ids"] = json::array({b.grain_left, b.grain_right});
        bnds.push_back(std::move(jb));
    }
    out["boundaries"] = std::move(bnds);

    json juncs = json::array();
    for (size_t i = 0; i < net.junctions.size(); ++i) {
        const Junction& j = net.junctions[i];
        if (!j.alive) continue;
        json jj;
        jj["id"] = i;
        const Vec2 w = wrap_unit(j.pos);
        jj["position"] = json::array({w.x, w.y});
        jj["boundary_ids"] = j.boundaries;
        juncs.push_back(std::move(jj));
    }
    out["junctions"] = std::move(juncs);
    return out.dump(1);
}

GrainNetwork snapshot_from_json(const std::string& text) {
    json in;
    try {
        in = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SnapshotError(std::string("snapshot parse error: ") + e.what());
    }
    try {
        if (!in.contains("version") || !in["version"].is_number_integer()) {
            throw SnapshotError("snapshot: missing version field");
        }
        if (in["version"].get<int>() != kSchemaVersion) {
            throw SnapshotError("snapshot: unsupported version " +
                                std::to_string(in["version"].get<int>()));
        }
        GrainNetwork net;
        net.time = in.at("time").get<double>();

        auto max_id = [](const json& arr) {
            size_t m = 0;
            for (const auto& e : arr) m = std::max(m, e.at("id").get<size_t>() + 1);
            return m;
        };
        net.grains.assign(max_id(in.at("grains")), Grain{});
        for (Grain& g : net.grains) g.alive = false;
        net.boundaries.assign(max_id(in.at("boundaries")), GrainBoundary{});
        for (GrainBoundary& b : net.boundaries) b.alive = false;
        net.junctions.assign(max_id(in.at("junctions")), Junction{});
        for (Junction& j : net.junctions) j.alive = false;

        for (const auto& jg : in.at("grains")) {
            Grain& g = net.grains[jg.at("id").get<size_t>()];
            g.alive = true;
            g.orientation = jg.at("orientation").get<double>();
            g.boundaries = jg.at("boundary_ids").get<std::vector<int>>();
        }
        for (const auto& jj : in.at("junctions")) {
            Junction& j = net.junctions[jj.at("id").get<size_t>()];
            j.alive = true;
            j.pos = {jj.at("position").at(0).get<double>(), jj.at("position").at(1).get<double>()};
            const auto ids = jj.at("boundary_ids").get<std::vector<int>>();
            if (ids.size() != 3) throw SnapshotError("snapshot: junction must list 3 boundaries");
            std::copy(ids.begin(), ids.end(), j.boundaries.begin());
        }
        for (const auto& jb : in.at("boundaries")) {
            GrainBoundary& b = net.boundaries[jb.at("id").get<size_t>()];
            b.alive = true;
            b.misorientation = jb.at("misorientation").get<double>();
            const auto& jnodes = jb.at("nodes");
            if (jnodes.size() < 2) throw SnapshotError("snapshot: boundary with fewer than 2 nodes");
            b.nodes.clear();
            b.nodes.reserve(jnodes.size());
            for (const auto& jn : jnodes) {
                const Vec2 w{jn.at(0).get<double>(), jn.at(1).get<double>()};
                // unwrap into a continuous polyline
                b.nodes.push_back(b.nodes.empty() ? w : near_image(w, b.nodes.back()));
            }
            if (jb.at("junction_ids").is_null()) {
                b.j0 = b.j1 = -1;
            } else {
                b.j0 = jb.at("junction_ids").at(0).get<int>();
                b.j1 = jb.at("junction_ids").at(1).get<int>();
            }
            b.grain_left = jb.at("grain_ids").at(0).get<int>();
            b.grain_right = jb.at("grain_ids").at(1).get<int>();
        }
        return net;
    } catch (const json::exception& e) {
        throw SnapshotError(std::string("snapshot schema violation: ") + e.what());
    }
}

void save_snapshot(const GrainNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SnapshotError("save_snapshot: cannot open " + path);
    out << snapshot_to_json(net) << "\n";
}

GrainNetwork load_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SnapshotError("load_snapshot: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return snapshot_from_json(ss.str());
}

}  // namespace gbnet
