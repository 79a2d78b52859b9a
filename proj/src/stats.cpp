#include "gbnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gbnet {

int Histogram1D::argmax() const {
    return static_cast<int>(std::max_element(density.begin(), density.end()) - density.begin());
}

double Histogram1D::mass() const {
    double m = 0.0;
    for (double d : density) m += d;
    return m * bin_width();
}

void Histogram1D::normalize() {
    const double m = mass();
    if (m <= 0.0) throw std::runtime_error("Histogram1D::normalize: empty histogram");
    for (double& d : density) d /= m;
}

Histogram1D make_histogram(double lo, double hi, int n_bins, const std::string& weight_kind) {
    if (!(hi > lo) || n_bins < 1) throw std::invalid_argument("make_histogram: bad range or bins");
    Histogram1D h;
    h.lo = lo;
    h.hi = hi;
    h.density.assign(n_bins, 0.0);
    h.weight_kind = weight_kind;
    return h;
}

void histogram_add(Histogram1D& h, double value, double weight) {
    h.total_weight += weight;
    if (value < h.lo) {
        h.overflow_below += weight;
        return;
    }
    if (value >= h.hi) {
        // the right edge itself belongs to the last bin
        if (value == h.hi) {
            h.density.back() += weight;
            return;
        }
        h.overflow_above += weight;
        return;
    }
    int i = static_cast<int>((value - h.lo) / h.bin_width());
    i = std::clamp(i, 0, h.n_bins() - 1);
    h.density[i] += weight;
}

Histogram1D boltzmann_density(const EnergyModel& model, double D, int n_bins) {
    if (!(D > 0.0)) throw std::invalid_argument("boltzmann_density: D must be positive");
    Histogram1D h = make_histogram(-kQuarterPi, kQuarterPi, n_bins, "density");
    // 8-point Gauss-Legendre nodes/weights on [-1, 1]
    static const double gx[8] = {-0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
                                 -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                 0.7966664774136267,  0.9602898564975362};
    static const double gw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    const double w = h.bin_width();
    for (int i = 0; i < n_bins; ++i) {
        const double c = h.bin_left(i) + 0.5 * w;
        double mass = 0.0;
        for (int k = 0; k < 8; ++k) {
            mass += gw[k] * std::exp(-model.sigma(c + 0.5 * w * gx[k]) / D);
        }
        h.density[i] = mass * 0.5;  // bin mass / width (the 0.5*w Jacobian cancels)
    }
    h.normalize();
    return h;
}

double kl_divergence(const Histogram1D& p, const Histogram1D& q) {
    if (p.n_bins() != q.n_bins() || p.lo != q.lo || p.hi != q.hi) {
        throw std::invalid_argument("kl_divergence: histograms must share binning");
    }
    const double w = p.bin_width();
    double kl = 0.0;
    for (int i = 0; i < p.n_bins(); ++i) {
        if (p.density[i] <= 0.0) continue;  // 0 log 0 = 0
        if (q.density[i] <= 0.0) return std::numeric_limits<double>::infinity();
        kl += p.density[i] * std::log(p.density[i] / q.density[i]) * w;
    }
    return std::max(kl, 0.0);
}

TemperatureFit fit_temperature(const Histogram1D& gbcd_hist, const EnergyModel& model,
                               double d_lo, double d_hi, double tol) {
    auto objective = [&](double D) {
        return kl_divergence(gbcd_hist, boltzmann_density(model, D, gbcd_hist.n_bins()));
    };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = d_lo, b = d_hi;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = objective(c), fd = objective(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = objective(d);
        }
    }
    TemperatureFit fit;
    fit.d_star = 0.5 * (a + b);
    fit.kl_star = objective(fit.d_star);
    fit.boundary_pinned = (fit.d_star - d_lo < 10 * tol) || (d_hi - fit.d_star < 10 * tol);
    return fit;
}

DecayFit fit_exponential_decay(const std::vector<double>& t, const std::vector<double>& y,
                               int index_lo, int index_hi) {
    if (t.size() != y.size()) throw std::invalid_argument("fit_exponential_decay: size mismatch");
    index_lo = std::max(index_lo, 0);
    index_hi = std::min<int>(index_hi, static_cast<int>(t.size()));
    const int n = index_hi - index_lo;
    if (n < 5) throw std::invalid_argument("fit_exponential_decay: need at least 5 points");

    double st = 0.0, sl = 0.0;
    for (int i = index_lo; i < index_hi; ++i) {
        if (!(y[i] > 0.0)) throw std::domain_error("fit_exponential_decay: non-positive value");
        st += t[i];
        sl += std::log(y[i]);
    }
    const double mt = st / n, ml = sl / n;
    double stt = 0.0, stl = 0.0, sll = 0.0;
    for (int i = index_lo; i < index_hi; ++i) {
        const double dt = t[i] - mt;
        const double dl = std::log(y[i]) - ml;
        stt += dt * dt;
        stl += dt * dl;
        sll += dl * dl;
    }
    if (stt <= 0.0) throw std::invalid_argument("fit_exponential_decay: degenerate abscissa");
    const double slope = stl / stt;
    DecayFit fit;
    fit.rate = std::abs(slope);
    fit.r2 = (sll <= 0.0) ? 1.0 : (stl * stl) / (stt * sll);
    return fit;
}

std::vector<double> isotonic_non_increasing(const std::vector<double>& y) {
    // PAV on the negated sequence (non-decreasing) with unit weights.
    const int n = static_cast<int>(y.size());
    std::vector<double> level;
    std::vector<int> count;
    for (int i = 0; i < n; ++i) {
        level.push_back(-y[i]);
        count.push_back(1);
        while (level.size() > 1 && level[level.size() - 2] > level.back()) {
            const double merged = (level[level.size() - 2] * count[count.size() - 2] +
                                   level.back() * count.back()) /
                                  (count[count.size() - 2] + count.back());
            count[count.size() - 2] += count.back();
            level[level.size() - 2] = merged;
            level.pop_back();
            count.pop_back();
        }
    }
    std::vector<double> out;
    out.reserve(n);
    for (size_t b = 0; b < level.size(); ++b) {
        for (int k = 0; k < count[b]; ++k) out.push_back(-level[b]);
    }
    return out;
}

}  // namespace gbnet
