#pragma once

#include "ddcid/potential.hpp"
#include "ddcid/spectral.hpp"

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace ddcid {

/// Seeded stream of standard normal vectors and uniform draws.
/// Identical seeds reproduce identical streams.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}

  Vector normal(Eigen::Index n);
  double uniform();  // [0, 1)
  /// Uniform index in [0, count).
  std::size_t index(std::size_t count);
  /// Uniform point in the box.
  Vector point_in(const Box& box);
  std::uint64_t next_seed() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer; derives independent child seeds from (seed, index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct DiffusionConfig {
  double alpha = 1.0;
  int max_diffusive_steps = 50;
  /// Neighbouring eigenvalues within multiplicity_tol·max(1,|λ|) are treated as one eigenspace.
  double multiplicity_tol = 1e-8;
  double zero_tolerance = -1.0;
  /// Saddle-escape predictors must decrease |g| (not g). Encounters with g < 0 are
  /// counted in EscapeResult::negative_value_warnings.
  bool absolute_value_acceptance = true;
  bool record_trace = false;
};

enum class Extremal { largest, smallest };

/// Unit vector along the largest or smallest eigenvector. When that eigenvalue is
/// repeated, a uniformly random unit vector in its eigenspace.
Vector extremal_direction(const SpectralInfo& s, Extremal which, NoiseSource& noise,
                          double multiplicity_tol);

/// σW with σ = −vvᵀ for the selected extremal direction v.
Vector colored_noise(const SpectralInfo& s, Extremal which, NoiseSource& noise,
                     double multiplicity_tol);

/// x0 + α v (vᵀW).
Vector initial_kick(const Vector& x0, const Vector& v, double alpha, const Vector& w);

/// One Euler-Maruyama step x − h∇g(x) + √h σ W of white-noise intermittent diffusion.
Vector white_noise_id_step(const Potential& p, const Vector& x, double h, double sigma,
                           NoiseSource& noise);

enum class EscapeStatus { switched, budget_exhausted, step_underflow };

struct TracePoint {
  int step = 0;
  Vector x;
  double value = 0.0;
  double aux = 0.0;
  Inertia inertia;
};

struct EscapeResult {
  Vector point;
  EscapeStatus status = EscapeStatus::budget_exhausted;
  /// Includes the initial kick.
  int diffusive_steps = 0;
  /// Iterates at which g < 0 was met while |g| acceptance was active.
  int negative_value_warnings = 0;
  std::vector<TracePoint> trace;
  /// Stochastic increments (the kick first), recorded alongside the trace.
  std::vector<Vector> noise_increments;
  /// Deterministic-predictor values of G, one per diffused step.
  std::vector<double> predictor_aux;
};

/// From a minimum towards a saddle: kick along v1, then diffused damped Newton steps
/// x̂ = x − hH†∇g (h chosen so G(x̂) < G(x)), x⁺ = x̂ + α√h σ W, σ = −v1v1ᵀ,
/// until the Hessian has a negative eigenvalue or the step budget is spent.
EscapeResult escape_minimum(const Potential& p, const Vector& x_min, const DiffusionConfig& cfg,
                            NoiseSource& noise);

/// From a saddle towards a minimum: kick along vn, then diffused double-descent steps when ∇g
/// is aligned with V₊ (else diffused gradient steps), σ = −vnvnᵀ, until the Hessian
/// is free of negative eigenvalues or the step budget is spent.
EscapeResult escape_saddle(const Potential& p, const Vector& x_sad, const DiffusionConfig& cfg,
                           NoiseSource& noise);

std::string_view to_string(EscapeStatus s);

}  // namespace ddcid
