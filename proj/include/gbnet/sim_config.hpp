#pragma once

#include <cstdint>
#include <limits>

namespace gbnet {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared configuration of the curvature and vertex network models.
// mu = inf selects the vertex model (straight boundaries); eta = inf
// selects the Herring-condition limit at junctions.
struct CurvatureConfig {
    double mu = 1.0;
    double gamma = 0.0;
    double eta = kInf;
    double dt = 0.0;          // 0 = derive from the stability bounds
    double target_h = 0.01;
    double t_end = kInf;
    double stop_fraction = 0.8;
    int n_grains = 500;
    double mis_std = 0.3;     // initial misorientation std before wrapping
    std::uint64_t seed = 0;
    int snapshot_every = 0;   // steps between snapshot callbacks; 0 = none

    bool vertex_model() const { return mu == kInf; }
    bool herring() const { return eta == kInf; }
};

}  // namespace gbnet
