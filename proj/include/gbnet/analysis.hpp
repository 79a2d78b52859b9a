#pragma once

#include <string>
#include <vector>

#include "gbnet/network.hpp"
#include "gbnet/stats.hpp"

namespace gbnet {

enum class NodeChoice { NearestNode, FarJunction };

// R ratios of one junction (r1 carries the three cyclic index choices;
// r3 < 0 encodes the excluded-from-histograms error flag).
struct JunctionRatios {
    double r1[3];
    double r2;
    double r3;
    bool r3_valid;
};

// Ratios for every alive junction; degenerate junctions (collapsing arms,
// flat angles) are skipped and counted.
std::vector<JunctionRatios> junction_ratios(const EnergyModel& model, const GrainNetwork& net,
                                            NodeChoice choice, int* skipped = nullptr);

// Length-weighted misorientation histogram (GBCD) on [-pi/4, pi/4].
Histogram1D gbcd(const GrainNetwork& net, int n_bins = 64);

struct NetworkAnalysis {
    Histogram1D gbcd_hist;
    Histogram1D r1, r2, r3;
    TemperatureFit fit;
    int skipped_junctions = 0;
};

// Full statistics pass: GBCD + KL temperature fit + R-ratio histograms
// (100 bins clipped to [0,5], out-of-range weight in the overflow fields).
NetworkAnalysis analyze_network(const EnergyModel& model, const GrainNetwork& net,
                                NodeChoice choice = NodeChoice::NearestNode, int gbcd_bins = 64,
                                int ratio_bins = 100);

void write_histogram_csv(const Histogram1D& h, const std::string& path);
void write_series_csv(const std::string& path, const std::string& header,
                      const std::vector<std::vector<double>>& columns);

}  // namespace gbnet
