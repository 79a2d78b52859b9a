#pragma once

#include <string>
#include <vector>

#include "gbnet/energy.hpp"

namespace gbnet {

// Normalized density histogram on uniform bins: sum(density * width) = 1.
struct Histogram1D {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> density;
    std::string weight_kind = "count";  // or "length"
    double total_weight = 0.0;          // raw weight before normalization
    double overflow_below = 0.0;        // raw weight clipped at the range ends
    double overflow_above = 0.0;

    int n_bins() const { return static_cast<int>(density.size()); }
    double bin_width() const { return (hi - lo) / n_bins(); }
    double bin_left(int i) const { return lo + i * bin_width(); }
    double bin_right(int i) const { return lo + (i + 1) * bin_width(); }
    int argmax() const;
    double mass() const;  // sum(density * width), 1 after normalize()

    void normalize();
};

Histogram1D make_histogram(double lo, double hi, int n_bins, const std::string& weight_kind = "count");

// Adds weight to the bin containing value; out-of-range weight goes to the
// overflow counters.
void histogram_add(Histogram1D& h, double value, double weight = 1.0);

// Bin-averaged Boltzmann density exp(-sigma(theta)/D)/Z_D on [-pi/4, pi/4],
// with Z_D by per-bin Gauss-Legendre quadrature.
Histogram1D boltzmann_density(const EnergyModel& model, double D, int n_bins);

// KL(p || q) = sum p log(p/q) * width on matching bins; 0 log 0 = 0, and a
// support violation (p > 0 where q = 0) returns +infinity.
double kl_divergence(const Histogram1D& p, const Histogram1D& q);

struct TemperatureFit {
    double d_star = 0.0;
    double kl_star = 0.0;
    bool boundary_pinned = false;
};

// argmin_D KL(gbcd || rho_D) by golden-section search on [d_lo, d_hi].
TemperatureFit fit_temperature(const Histogram1D& gbcd_hist, const EnergyModel& model,
                               double d_lo = 1e-3, double d_hi = 10.0, double tol = 1e-5);

struct DecayFit {
    double rate = 0.0;  // magnitude of the log-linear slope
    double r2 = 0.0;
};

// Least-squares line through (t, log y) over [index_lo, index_hi).
DecayFit fit_exponential_decay(const std::vector<double>& t, const std::vector<double>& y,
                               int index_lo, int index_hi);
inline DecayFit fit_exponential_decay(const std::vector<double>& t, const std::vector<double>& y) {
    return fit_exponential_decay(t, y, 0, static_cast<int>(t.size()));
}

// Pool-adjacent-violators projection onto non-increasing sequences.
std::vector<double> isotonic_non_increasing(const std::vector<double>& y);

}  // namespace gbnet
