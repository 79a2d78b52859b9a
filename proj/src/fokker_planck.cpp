#include "gbnet/fokker_planck.hpp"

#include <cmath>
#include <stdexcept>

namespace gbnet {

namespace {

// Bernoulli function x/(e^x - 1), stable near zero.
double bernoulli_fn(double x) {
    if (std::abs(x) < 1e-5) return 1.0 - 0.5 * x + x * x / 12.0;
    return x / std::expm1(x);
}

}  // namespace

FpSolver::FpSolver(const StateGrid& grid, const StateSpace& space, const EnergyModel& model,
                   const FpConfig& cfg)
    : grid_(grid), space_(space), cfg_(cfg) {
    if (!(cfg.D > 0.0) || !(cfg.gamma > 0.0) || !(cfg.eta > 0.0)) {
        throw std::invalid_argument("FpSolver: gamma, eta, D must be positive");
    }
    energy_ = cell_energies(grid_, space_, model);
    inv_vol_ = 1.0 / grid_.cell_volume();
    build_faces();
}

void FpSolver::build_faces() {
    const double D = cfg_.D;
    // flux from i to +axis neighbor j: (M*D/h^2)*(B(w) f_i - B(-w) f_j),
    // already divided by the cell volume (uniform cells).
    auto add_face = [&](int i, int j, double mobility, double h) {
        const double w = (energy_[j] - energy_[i]) / D;
        const double c = mobility * D / (h * h);
        faces_.lo.push_back(i);
        faces_.hi.push_back(j);
        faces_.c_lo.push_back(c * bernoulli_fn(w));
        faces_.c_hi.push_back(c * bernoulli_fn(-w));
    };

    const int n = grid_.n_mis, na = grid_.n_a;
    for (int iu = 0; iu < n; ++iu) {
        for (int iv = 0; iv < n; ++iv) {
            if (!grid_.is_live(iu, iv)) continue;
            for (int ia = 0; ia < na; ++ia) {
                for (int ja = 0; ja < na; ++ja) {
                    const int c = grid_.index(iu, iv, ia, ja);
                    if (iu + 1 < n && grid_.is_live(iu + 1, iv)) {
                        add_face(c, grid_.index(iu + 1, iv, ia, ja), 3.0 * cfg_.gamma, grid_.hu);
                    }
                    if (iv + 1 < n && grid_.is_live(iu, iv + 1)) {
                        add_face(c, grid_.index(iu, iv + 1, ia, ja), 3.0 * cfg_.gamma, grid_.hv);
                    }
                    if (ia + 1 < na) {
                        add_face(c, grid_.index(iu, iv, ia + 1, ja), cfg_.eta, grid_.hax);
                    }
                    if (ja + 1 < na) {
                        add_face(c, grid_.index(iu, iv, ia, ja + 1), cfg_.eta, grid_.hay);
                    }
                }
            }
        }
    }
}

double FpSolver::stable_dt() const {
    // positivity: dt * (total outflow rate of a cell) <= 1
    std::vector<double> outflow(grid_.n_cells(), 0.0);
    for (size_t k = 0; k < faces_.lo.size(); ++k) {
        outflow[faces_.lo[k]] += faces_.c_lo[k];
        outflow[faces_.hi[k]] += faces_.c_hi[k];
    }
    double worst = 0.0;
    for (double o : outflow) worst = std::max(worst, o);
    return worst > 0.0 ? 1.0 / worst : std::numeric_limits<double>::infinity();
}

FpField FpSolver::boltzmann_reference() const {
    FpField out;
    out.f.assign(grid_.n_cells(), 0.0);
    double z = 0.0;
    for (int iu = 0; iu < grid_.n_mis; ++iu) {
        for (int iv = 0; iv < grid_.n_mis; ++iv) {
            if (!grid_.is_live(iu, iv)) continue;
            for (int ia = 0; ia < grid_.n_a; ++ia) {
                for (int ja = 0; ja < grid_.n_a; ++ja) {
                    const int c = grid_.index(iu, iv, ia, ja);
                    out.f[c] = std::exp(-energy_[c] / cfg_.D);
                    z += out.f[c];
                }
            }
        }
    }
    const double scale = 1.0 / (z * grid_.cell_volume());
    for (double& v : out.f) v *= scale;
    return out;
}

FpField FpSolver::uniform_field() const {
    FpField out;
    out.f.assign(grid_.n_cells(), 0.0);
    int live = 0;
    for (int iu = 0; iu < grid_.n_mis; ++iu)
        for (int iv = 0; iv < grid_.n_mis; ++iv)
            if (grid_.is_live(iu, iv)) live += grid_.n_a * grid_.n_a;
    const double val = 1.0 / (live * grid_.cell_volume());
    for (int iu = 0; iu < grid_.n_mis; ++iu) {
        for (int iv = 0; iv < grid_.n_mis; ++iv) {
            if (!grid_.is_live(iu, iv)) continue;
            for (int ia = 0; ia < grid_.n_a; ++ia)
                for (int ja = 0; ja < grid_.n_a; ++ja)
                    out.f[grid_.index(iu, iv, ia, ja)] = val;
        }
    }
    return out;
}

FpField FpSolver::step(const FpField& field) const {
    if (field.f.size() != static_cast<size_t>(grid_.n_cells())) {
        throw std::invalid_argument("FpSolver::step: field size mismatch");
    }
    if (cfg_.dt > stable_dt()) {
        throw CflError("FpSolver::step: dt exceeds the positivity bound of the scheme");
    }
    FpField out = field;
    const double dt = cfg_.dt;
    const size_t nf = faces_.lo.size();
    const int* lo = faces_.lo.data();
    const int* hi = faces_.hi.data();
    const double* clo = faces_.c_lo.data();
    const double* chi = faces_.c_hi.data();
    const double* f = field.f.data();
    double* g = out.f.data();
    for (size_t k = 0; k < nf; ++k) {
        const double q = dt * (clo[k] * f[lo[k]] - chi[k] * f[hi[k]]);
        g[lo[k]] -= q;
        g[hi[k]] += q;
    }
    return out;
}

double FpSolver::mass(const FpField& field) const {
    double m = 0.0, comp = 0.0;
    for (double v : field.f) {  // Kahan summation; the mass audit is 1e-12 grade
        const double y = v - comp;
        const double t = m + y;
        comp = (t - m) - y;
        m = t;
    }
    return m * grid_.cell_volume();
}

double FpSolver::weighted_l2_distance(const FpField& field, const FpField& reference) const {
    double s = 0.0;
    for (int iu = 0; iu < grid_.n_mis; ++iu) {
        for (int iv = 0; iv < grid_.n_mis; ++iv) {
            if (!grid_.is_live(iu, iv)) continue;
            for (int ia = 0; ia < grid_.n_a; ++ia) {
                for (int ja = 0; ja < grid_.n_a; ++ja) {
                    const int c = grid_.index(iu, iv, ia, ja);
                    const double d = field.f[c] - reference.f[c];
                    s += d * d * std::exp(energy_[c] / cfg_.D);
                }
            }
        }
    }
    return s * grid_.cell_volume();
}

double FpSolver::weighted_gradient_seminorm(const FpField& field, const FpField& reference) const {
    double s = 0.0;
    auto face_term = [&](int i, int j, double mobility, double h) {
        const double gi = field.f[i] - reference.f[i];
        const double gj = field.f[j] - reference.f[j];
        const double d = (gj - gi) / h;
        const double w = 0.5 * (std::exp(energy_[i] / cfg_.D) + std::exp(energy_[j] / cfg_.D));
        return mobility * cfg_.D * d * d * w;
    };
    const int n = grid_.n_mis, na = grid_.n_a;
    for (int iu = 0; iu < n; ++iu) {
        for (int iv = 0; iv < n; ++iv) {
            if (!grid_.is_live(iu, iv)) continue;
            for (int ia = 0; ia < na; ++ia) {
                for (int ja = 0; ja < na; ++ja) {
                    const int c = grid_.index(iu, iv, ia, ja);
                    if (iu + 1 < n && grid_.is_live(iu + 1, iv))
                        s += face_term(c, grid_.index(iu + 1, iv, ia, ja), 3.0 * cfg_.gamma, grid_.hu);
                    if (iv + 1 < n && grid_.is_live(iu, iv + 1))
                        s += face_term(c, grid_.index(iu, iv + 1, ia, ja), 3.0 * cfg_.gamma, grid_.hv);
                    if (ia + 1 < na)
                        s += face_term(c, grid_.index(iu, iv, ia + 1, ja), cfg_.eta, grid_.hax);
                    if (ja + 1 < na)
                        s += face_term(c, grid_.index(iu, iv, ia, ja + 1), cfg_.eta, grid_.hay);
                }
            }
        }
    }
    return s * grid_.cell_volume();
}

double FpSolver::free_energy(const FpField& field) const {
    double s = 0.0;
    for (int c = 0; c < grid_.n_cells(); ++c) {
        const double f = field.f[c];
        if (f > 0.0) s += cfg_.D * f * std::log(f) + f * energy_[c];
    }
    return s * grid_.cell_volume();
}

std::vector<double> FpSolver::marginal_rho1(const FpField& field) const {
    std::vector<double> rho(grid_.n_mis * grid_.n_mis, 0.0);
    const double da = grid_.hax * grid_.hay;
    for (int iu = 0; iu < grid_.n_mis; ++iu) {
        for (int iv = 0; iv < grid_.n_mis; ++iv) {
            if (!grid_.is_live(iu, iv)) continue;
            double s = 0.0;
            for (int ia = 0; ia < grid_.n_a; ++ia)
                for (int ja = 0; ja < grid_.n_a; ++ja)
                    s += field.f[grid_.index(iu, iv, ia, ja)];
            rho[grid_.mis_index(iu, iv)] = s * da;
        }
    }
    return rho;
}

std::vector<double> FpSolver::marginal_rho2(const FpField& field) const {
    std::vector<double> rho(grid_.n_a * grid_.n_a, 0.0);
    const double dm = grid_.hu * grid_.hv;
    for (int iu = 0; iu < grid_.n_mis; ++iu) {
        for (int iv = 0; iv < grid_.n_mis; ++iv) {
            if (!grid_.is_live(iu, iv)) continue;
            for (int ia = 0; ia < grid_.n_a; ++ia)
                for (int ja = 0; ja < grid_.n_a; ++ja)
                    rho[ia * grid_.n_a + ja] += field.f[grid_.index(iu, iv, ia, ja)] * dm;
        }
    }
    return rho;
}

double FpSolver::rho1_time_derivative_residual(const FpField& before, const FpField& after,
                                               int margin) const {
    // Central-in-time derivative needs the midpoint field; one solver step
    // bridges before -> mid -> after when callers pass fields two steps
    // apart.  Here we take (after - before)/(2 dt) against the marginal
    // transport operator applied to the midpoint.
    const FpField mid = step(before);
    const int n = grid_.n_mis;

    // marginal transport: a-summed divergence of the misorientation-plane
    // fluxes of the full field (the discrete right side of the marginal
    // Fokker-Planck equation; a-direction fluxes cancel within a column)
    std::vector<double> rhs(n * n, 0.0);
    auto add_pair = [&](int i_cell, int j_cell, int i_plane, int j_plane, double mobility, double h) {
        const double w = (energy_[j_cell] - energy_[i_cell]) / cfg_.D;
        const double c = mobility * cfg_.D / (h * h);
        const double q =
            c * (bernoulli_fn(w) * mid.f[i_cell] - bernoulli_fn(-w) * mid.f[j_cell]);
        rhs[i_plane] -= q;
        rhs[j_plane] += q;
    };
    for (int iu = 0; iu < n; ++iu) {
        for (int iv = 0; iv < n; ++iv) {
            if (!grid_.is_live(iu, iv)) continue;
            for (int ia = 0; ia < grid_.n_a; ++ia) {
                for (int ja = 0; ja < grid_.n_a; ++ja) {
                    const int c = grid_.index(iu, iv, ia, ja);
                    if (iu + 1 < n && grid_.is_live(iu + 1, iv)) {
                        add_pair(c, grid_.index(iu + 1, iv, ia, ja), grid_.mis_index(iu, iv),
                                 grid_.mis_index(iu + 1, iv), 3.0 * cfg_.gamma, grid_.hu);
                    }
                    if (iv + 1 < n && grid_.is_live(iu, iv + 1)) {
                        add_pair(c, grid_.index(iu, iv + 1, ia, ja), grid_.mis_index(iu, iv),
                                 grid_.mis_index(iu, iv + 1), 3.0 * cfg_.gamma, grid_.hv);
                    }
                }
            }
        }
    }
    const double da = grid_.hax * grid_.hay;
    for (double& r : rhs) r *= da;

    const std::vector<double> r_before = marginal_rho1(before);
    const std::vector<double> r_after = marginal_rho1(after);

    double l1 = 0.0;
    for (int iu = margin; iu < n - margin; ++iu) {
        for (int iv = margin; iv < n - margin; ++iv) {
            bool clean = true;
            for (int du = -margin; du <= margin && clean; ++du)
                for (int dv = -margin; dv <= margin && clean; ++dv)
                    clean = grid_.is_live(iu + du, iv + dv);
            if (!clean) continue;
            const int m = grid_.mis_index(iu, iv);
            const double dot = (r_after[m] - r_before[m]) / (2.0 * cfg_.dt);
            l1 += std::abs(dot - rhs[m]);
        }
    }
    return l1 * grid_.hu * grid_.hv;
}

}  // namespace gbnet
