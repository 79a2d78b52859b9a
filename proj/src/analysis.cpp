#include "gbnet/analysis.hpp"

#include <fstream>

#include "gbnet/junction_geometry.hpp"

namespace gbnet {

std::vector<JunctionRatios> junction_ratios(const EnergyModel& model, const GrainNetwork& net,
                                            NodeChoice choice, int* skipped) {
    std::vector<JunctionRatios> out;
    int n_skipped = 0;
    for (size_t j = 0; j < net.junctions.size(); ++j) {
        if (!net.junctions[j].alive) continue;
        try {
            const JunctionStar star =
                net.junction_star(static_cast<int>(j), choice == NodeChoice::FarJunction);
            const DihedralAngles angles = dihedral_angles(star);
            JunctionRatios r{};
            for (int i = 0; i < 3; ++i) r.r1[i] = ratio_r1(model, star.mis, angles, i);
            r.r2 = ratio_r2(star, angles);
            const auto r3 = ratio_r3(model, star);
            r.r3_valid = r3.has_value();
            r.r3 = r3.value_or(-1.0);
            out.push_back(r);
        } catch (const DegeneracyError&) {
            ++n_skipped;
        } catch (const SingularityError&) {
            ++n_skipped;
        }
    }
    if (skipped) *skipped = n_skipped;
    return out;
}

Histogram1D gbcd(const GrainNetwork& net, int n_bins) {
    Histogram1D h = make_histogram(-kQuarterPi, kQuarterPi, n_bins, "length");
    for (const GrainBoundary& b : net.boundaries) {
        if (!b.alive) continue;
        histogram_add(h, b.misorientation, b.length());
    }
    h.normalize();
    return h;
}

NetworkAnalysis analyze_network(const EnergyModel& model, const GrainNetwork& net,
                                NodeChoice choice, int gbcd_bins, int ratio_bins) {
    NetworkAnalysis a;
    a.gbcd_hist = gbcd(net, gbcd_bins);
    a.r1 = make_histogram(0.0, 5.0, ratio_bins);
    a.r2 = make_histogram(0.0, 5.0, ratio_bins);
    a.r3 = make_histogram(0.0, 5.0, ratio_bins);
    const auto ratios = junction_ratios(model, net, choice, &a.skipped_junctions);
    for (const JunctionRatios& r : ratios) {
        for (int i = 0; i < 3; ++i) histogram_add(a.r1, r.r1[i]);
        histogram_add(a.r2, r.r2);
        if (r.r3_valid) histogram_add(a.r3, r.r3);
    }
    if (a.r1.total_weight > 0.0) a.r1.normalize();
    if (a.r2.total_weight > 0.0) a.r2.normalize();
    if (a.r3.total_weight > 0.0) a.r3.normalize();
    a.fit = fit_temperature(a.gbcd_hist, model);
    return a;
}

void write_histogram_csv(const Histogram1D& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_histogram_csv: cannot open " + path);
    out.precision(17);
    out << "bin_left,bin_right,density\n";
    for (int i = 0; i < h.n_bins(); ++i) {
        out << h.bin_left(i) << "," << h.bin_right(i) << "," << h.density[i] << "\n";
    }
}

void write_series_csv(const std::string& path, const std::string& header,
                      const std::vector<std::vector<double>>& columns) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_series_csv: cannot open " + path);
    out.precision(17);
    out << header << "\n";
    if (columns.empty()) return;
    const size_t rows = columns.front().size();
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < columns.size(); ++c) {
            out << columns[c][r] << (c + 1 < columns.size() ? "," : "");
        }
        out << "\n";
    }
}

}  // namespace gbnet
