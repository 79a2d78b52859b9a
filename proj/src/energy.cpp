#include "gbnet/energy.hpp"

#include <algorithm>
#include <cmath>

namespace gbnet {

EnergyModel EnergyModel::constant(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("EnergyModel::constant: sigma must be positive");
    EnergyModel m;
    m.kind_ = Kind::Constant;
    m.constant_ = c;
    m.sigma_max_ = c;
    return m;
}

EnergyModel EnergyModel::builtin_sine() {
    EnergyModel m;
    m.kind_ = Kind::BuiltinSine;
    m.sigma_max_ = 1.25;
    return m;
}

EnergyModel EnergyModel::tabulated(std::vector<double> theta, std::vector<double> sigma) {
    if (theta.size() != sigma.size() || theta.size() < 2) {
        throw std::invalid_argument("EnergyModel::tabulated: need >= 2 matching samples");
    }
    if (!std::is_sorted(theta.begin(), theta.end())) {
        throw std::invalid_argument("EnergyModel::tabulated: theta samples must be increasing");
    }
    if (theta.front() > -kQuarterPi + 1e-12 || theta.back() < kQuarterPi - 1e-12) {
        throw std::invalid_argument("EnergyModel::tabulated: table must cover [-pi/4, pi/4]");
    }
    EnergyModel m;
    m.kind_ = Kind::Tabulated;
    m.tab_theta_ = std::move(theta);
    m.tab_sigma_ = std::move(sigma);

    // Three-point finite-difference slopes give a C^1 cubic Hermite spline.
    const size_t n = m.tab_theta_.size();
    m.tab_slope_.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const size_t lo = (i == 0) ? 0 : i - 1;
        const size_t hi = (i == n - 1) ? n - 1 : i + 1;
        m.tab_slope_[i] = (m.tab_sigma_[hi] - m.tab_sigma_[lo]) / (m.tab_theta_[hi] - m.tab_theta_[lo]);
    }

    // The model requires sigma > 0 on the whole range; scan densely.
    double smax = 0.0;
    for (int k = 0; k <= 2000; ++k) {
        const double t = -kQuarterPi + (2.0 * kQuarterPi) * k / 2000.0;
        const double s = m.sigma(t);
        if (!(s > 0.0)) {
            throw std::invalid_argument("EnergyModel::tabulated: interpolant not positive on range");
        }
        smax = std::max(smax, s);
    }
    m.sigma_max_ = smax;
    return m;
}

EnergyModel EnergyModel::from_name(const std::string& kind, double param) {
    if (kind == "constant") return constant(param);
    if (kind == "builtin_sine") return builtin_sine();
    throw std::invalid_argument("EnergyModel::from_name: unknown kind '" + kind + "'");
}

void EnergyModel::check_range(double theta) const {
    if (!(theta >= -kQuarterPi - 1e-12 && theta <= kQuarterPi + 1e-12)) {
        throw std::domain_error("sigma: misorientation outside [-pi/4, pi/4]; wrap first");
    }
}

int EnergyModel::tab_interval(double theta) const {
    const auto it = std::upper_bound(tab_theta_.begin(), tab_theta_.end(), theta);
    int i = static_cast<int>(it - tab_theta_.begin()) - 1;
    i = std::clamp(i, 0, static_cast<int>(tab_theta_.size()) - 2);
    return i;
}

double EnergyModel::sigma(double theta) const {
    check_range(theta);
    switch (kind_) {
        case Kind::Constant:
            return constant_;
        case Kind::BuiltinSine: {
            const double s = std::sin(2.0 * theta);
            return 1.0 + 0.25 * s * s;
        }
        case Kind::Tabulated: {
            const int i = tab_interval(theta);
            const double h = tab_theta_[i + 1] - tab_theta_[i];
            const double t = (theta - tab_theta_[i]) / h;
            const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
            const double h10 = t * (1 - t) * (1 - t);
            const double h01 = t * t * (3 - 2 * t);
            const double h11 = t * t * (t - 1);
            return h00 * tab_sigma_[i] + h10 * h * tab_slope_[i] + h01 * tab_sigma_[i + 1] +
                   h11 * h * tab_slope_[i + 1];
        }
    }
    return constant_;
}

double EnergyModel::sigma_theta(double theta) const {
    check_range(theta);
    switch (kind_) {
        case Kind::Constant:
            return 0.0;
        case Kind::BuiltinSine:
            return 0.5 * std::sin(4.0 * theta);
        case Kind::Tabulated: {
            const int i = tab_interval(theta);
            const double h = tab_theta_[i + 1] - tab_theta_[i];
            const double t = (theta - tab_theta_[i]) / h;
            const double d00 = 6 * t * (t - 1) / h;
            const double d10 = (1 - t) * (1 - 3 * t);
            const double d01 = -6 * t * (t - 1) / h;
            const double d11 = t * (3 * t - 2);
            return d00 * tab_sigma_[i] + d10 * tab_slope_[i] + d01 * tab_sigma_[i + 1] +
                   d11 * tab_slope_[i + 1];
        }
    }
    return 0.0;
}

double local_energy(const EnergyModel& model, const JunctionStar& star) {
    double e = 0.0;
    for (int j = 0; j < 3; ++j) e += model.sigma(star.mis[j]) * star.arm_length(j);
    return e;
}

Vec2 grad_junction(const EnergyModel& model, const JunctionStar& star) {
    Vec2 g{0.0, 0.0};
    for (int j = 0; j < 3; ++j) {
        const Vec2 arm = star.a - star.x[j];
        const double len = norm(arm);
        if (len < kSingularGuard) {
            throw SingularityError("grad_junction: junction within singular guard of an anchor");
        }
        g += (model.sigma(star.mis[j]) / len) * arm;
    }
    return g;
}

Vec3 grad_orientation(const EnergyModel& model, const MisorientationTriple& mis,
                      const Vec3& lengths) {
    Vec3 g;
    for (int j = 0; j < 3; ++j) {
        const int jp = (j + 1) % 3;
        g[j] = model.sigma_theta(mis[jp]) * lengths[jp] - model.sigma_theta(mis[j]) * lengths[j];
    }
    return g;
}

Vec3 misorientation_gradient(const EnergyModel& model, const MisorientationTriple& mis,
                             const Vec3& lengths) {
    Vec3 raw;
    for (int j = 0; j < 3; ++j) raw[j] = model.sigma_theta(mis[j]) * lengths[j];
    return project_to_constraint(raw);
}

Vec3 misorientation_rhs(const EnergyModel& model, const JunctionStar& star, double gamma) {
    Vec3 lengths;
    for (int j = 0; j < 3; ++j) {
        lengths[j] = star.arm_length(j);
        if (lengths[j] < kSingularGuard) {
            throw SingularityError("misorientation_rhs: junction within singular guard of an anchor");
        }
    }
    return -3.0 * gamma * misorientation_gradient(model, star.mis, lengths);
}

LocalEnergyGradients local_gradients(const EnergyModel& model, const JunctionStar& star) {
    Vec3 lengths;
    for (int j = 0; j < 3; ++j) lengths[j] = star.arm_length(j);
    LocalEnergyGradients g;
    g.grad_a = grad_junction(model, star);
    g.grad_mis = misorientation_gradient(model, star.mis, lengths);
    g.grad_orient = grad_orientation(model, star.mis, lengths);
    return g;
}

}  // namespace gbnet
