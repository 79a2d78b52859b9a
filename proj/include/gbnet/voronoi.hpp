#pragma once

#include <cstdint>

#include "gbnet/network.hpp"

namespace gbnet {

// Periodic Voronoi tessellation of n_grains uniform seeds on the unit
// torus, with straight 2-node boundaries.  Grain orientations are drawn
// i.i.d. normal(0, orientation_std^2), so boundary misorientations come
// out approximately normal with std sqrt(2)*orientation_std (then wrapped).
// Degenerate seed placements are retried with fresh seeds up to 10 times.
GrainNetwork init_voronoi(int n_grains, double orientation_std, std::uint64_t seed);

}  // namespace gbnet
