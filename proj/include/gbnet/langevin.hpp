#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gbnet/state_grid.hpp"

namespace gbnet {

struct ParticleState {
    MisorientationTriple mis;
    Vec2 a;
};

// Euler-Maruyama configuration for the single-junction Langevin system.
// Only the temperature-like parameter D is stored; the noise amplitudes
// are derived through the fluctuation-dissipation relation
// 6 gamma / beta_mis^2 = 2 eta / beta_a^2, so it holds by construction.
struct LangevinConfig {
    double gamma = 1.0;
    double eta = 1.0;
    double D = 0.1;
    double dt = 1e-3;
    int n_particles = 10000;
    double t_end = 10.0;
    int n_checkpoints = 8;
    StateSpace space;
    std::uint64_t seed = 0;

    double beta_mis() const { return std::sqrt(6.0 * gamma * D); }
    double beta_a() const { return std::sqrt(2.0 * eta * D); }
};

struct EnsembleResult {
    std::vector<double> checkpoint_times;
    // checkpoint -> particle samples
    std::vector<std::vector<ParticleState>> samples;
    std::uint64_t rejected_steps = 0;  // reject-and-resample events
};

// One Euler-Maruyama step with reflection at the domain walls.  Tangential
// noise for the misorientation is generated in the orthonormal tangent
// basis; reflection acts on the 3-vector components at +-pi/4, after which
// the constraint is re-projected.  A proposal still outside the domain
// after one reflection pass is rejected and the noise resampled (counted
// via the optional pointer).
ParticleState em_step(const EnergyModel& model, const ParticleState& state,
                      const LangevinConfig& cfg, std::mt19937_64& rng,
                      std::uint64_t* rejections = nullptr);

// Independent trajectories with per-particle RNG streams derived from the
// master seed; deterministic regardless of the number of worker threads.
EnsembleResult run_ensemble(const EnergyModel& model, const LangevinConfig& cfg, int n_jobs = 1);

// Sample a particle state from the Boltzmann density exp(-E/D)/Z by
// rejection sampling (used by tests and for equilibrium baselines).
ParticleState sample_boltzmann(const EnergyModel& model, const StateSpace& space, double D,
                               std::mt19937_64& rng);

// Uniform sample on Omega x Omega_TJ.
ParticleState sample_uniform(const StateSpace& space, std::mt19937_64& rng);

// Plug-in estimate of the free energy integral(D f log f + f E) from a
// histogram of samples on the given grid, with the Miller-Madow small-
// sample correction on the entropy part; empty bins use 0 log 0 = 0.
double free_energy_estimate(const std::vector<ParticleState>& samples, const EnergyModel& model,
                            double D, const StateSpace& space, const StateGrid& grid);

// KL divergence of the empirical histogram of samples from the reference
// per-cell masses (same grid), Miller-Madow bias corrected.  Samples
// falling outside the grid are an error.
double sample_kl_divergence(const std::vector<ParticleState>& samples, const StateGrid& grid,
                            const std::vector<double>& reference_masses);

}  // namespace gbnet
