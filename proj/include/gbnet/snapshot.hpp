#pragma once

#include <string>

#include "gbnet/network.hpp"

namespace gbnet {

struct SnapshotError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Snapshot schema (version 1): top-level keys `version`, `time`, `grains`
// (id, orientation, boundary_ids), `boundaries` (id, misorientation,
// nodes as [x,y] pairs in [0,1)^2, junction ids or null when closed,
// grain ids left/right), `junctions` (id, position, boundary ids).
std::string snapshot_to_json(const GrainNetwork& net);
GrainNetwork snapshot_from_json(const std::string& text);

void save_snapshot(const GrainNetwork& net, const std::string& path);
GrainNetwork load_snapshot(const std::string& path);

}  // namespace gbnet
