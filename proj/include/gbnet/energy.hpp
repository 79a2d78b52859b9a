#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gbnet/constraint.hpp"
#include "gbnet/star.hpp"

namespace gbnet {

struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CflError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Guard radius around a = x_j where |a - x| stops being differentiable.
inline constexpr double kSingularGuard = 1e-9;

// Grain-boundary energy density sigma(theta) on [-pi/4, pi/4].
// builtin_sine is 1 + 0.25 sin^2(2 theta); tabulated uses a C^1 cubic
// Hermite interpolant through (theta_i, sigma_i).
class EnergyModel {
  public:
    enum class Kind { Constant, BuiltinSine, Tabulated };

    static EnergyModel constant(double c);
    static EnergyModel builtin_sine();
    static EnergyModel tabulated(std::vector<double> theta, std::vector<double> sigma);
    static EnergyModel from_name(const std::string& kind, double param = 1.0);

    Kind kind() const { return kind_; }

    double sigma(double theta) const;
    double sigma_theta(double theta) const;
    double sigma_max() const { return sigma_max_; }

  private:
    EnergyModel() = default;

    Kind kind_ = Kind::BuiltinSine;
    double constant_ = 1.0;
    std::vector<double> tab_theta_, tab_sigma_, tab_slope_;
    double sigma_max_ = 1.25;

    void check_range(double theta) const;
    int tab_interval(double theta) const;
};

// Gradients of the local (vertex-limit) energy E = sum_j sigma(mis_j)|a - x_j|.
struct LocalEnergyGradients {
    Vec2 grad_a;       // dE/da
    Vec3 grad_mis;     // tangential gradient on the constraint plane
    Vec3 grad_orient;  // dE/d alpha_j, cyclic star convention
};

double local_energy(const EnergyModel& model, const JunctionStar& star);

// dE/da = sum_j sigma_j (a - x_j)/|a - x_j|.  Throws SingularityError when
// an arm is shorter than kSingularGuard.
Vec2 grad_junction(const EnergyModel& model, const JunctionStar& star);

// dE/d alpha_j = sigma_theta(mis_{j+1}) L_{j+1} - sigma_theta(mis_j) L_j.
Vec3 grad_orientation(const EnergyModel& model, const MisorientationTriple& mis,
                      const Vec3& lengths);

// Misorientation velocity -3 gamma grad^Omega E; exactly tangent to the
// constraint plane.
Vec3 misorientation_rhs(const EnergyModel& model, const JunctionStar& star, double gamma);

// Tangential gradient of E with respect to the misorientation triple.
Vec3 misorientation_gradient(const EnergyModel& model, const MisorientationTriple& mis,
                             const Vec3& lengths);

LocalEnergyGradients local_gradients(const EnergyModel& model, const JunctionStar& star);

}  // namespace gbnet
