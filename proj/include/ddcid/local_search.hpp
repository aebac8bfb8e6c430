#pragma once

#include "ddcid/potential.hpp"
#include "ddcid/spectral.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace ddcid {

/// Step length h confined to [2⁻²⁶, 2⁵].
///
/// An accepted step doubles h when it was accepted on its first trial; a rejected trial
/// halves it. A rejection at the minimum step is an underflow.
class StepController {
 public:
  static constexpr double kMinStep = 1.0 / 67108864.0;  // 2^-26
  static constexpr double kMaxStep = 32.0;              // 2^5

  explicit StepController(double initial = 1.0);

  [[nodiscard]] double current() const { return step_; }

  void accept();
  /// Returns false (and leaves h at the minimum) when h cannot be halved any further.
  [[nodiscard]] bool reject();

 private:
  double step_;
  bool rejected_since_accept_ = false;
};

struct Tolerances {
  double atol = 1e-8;
  double rtol = 1e-8;
  int max_iterations = 2000;
};

enum class Direction { double_descent, gradient, newton };
enum class Outcome { converged, budget_exhausted, step_underflow };

std::string_view to_string(Direction d);
std::string_view to_string(Outcome o);

struct LocalSearchConfig {
  Tolerances tolerances;
  /// Sufficient-decrease constant for g: g(x+hv) <= g(x) + c·h·vᵀ∇g.
  double armijo = 1e-4;
  /// Consecutive rejected double-descent trials before reverting to gradient descent.
  int damping_limit = 10;
  /// Accepted gradient steps taken after a fallback before double descent is retried.
  int fallback_steps = 5;
  /// Negative selects the default eigenvalue zero tolerance.
  double zero_tolerance = -1.0;
  bool record_path = false;
};

struct LocalSearchResult {
  Vector final_point;
  double final_value = 0.0;
  double final_gradient_norm = 0.0;
  int iterations = 0;
  Outcome outcome = Outcome::budget_exhausted;
  std::vector<Direction> direction_log;
  std::vector<Vector> path;  // iterates including x0, only when record_path is set
};

/// Alignment below which ∇g is treated as having no meaningful component in V₊: √n/10.
double alignment_threshold(Eigen::Index n);

/// −(H₊)†∇g, or nullopt when n₊ = 0 or the alignment ratio is at or below the threshold.
std::optional<Vector> double_descent_direction(const Vector& grad, const SpectralInfo& s);

/// True when iteration should stop: ‖∇g(x_k)‖ < atol + ‖∇g(x0)‖·rtol or
/// ‖x_k − x_{k−1}‖ < atol + ‖x0‖·rtol.
bool stopping_criterion(const Vector& x_k, const Vector& x_km1, const Vector& grad_k,
                        const Vector& x0, const Vector& grad0, const Tolerances& tol);

/// Double-descent minimization with gradient-descent fallback.
LocalSearchResult minimize(const Potential& p, const Vector& x0, const LocalSearchConfig& cfg = {},
                           StepController ctrl = StepController{});

/// Damped Newton iteration on ∇g = 0; steps are accepted when G = ½‖∇g‖² decreases.
/// Converges to critical points of any index.
LocalSearchResult saddle_search(const Potential& p, const Vector& x0,
                                const LocalSearchConfig& cfg = {},
                                StepController ctrl = StepController{});

/// Plain normalized gradient descent under the same step policy and stopping rule.
LocalSearchResult gradient_descent(const Potential& p, const Vector& x0,
                                   const LocalSearchConfig& cfg = {},
                                   StepController ctrl = StepController{});

}  // namespace ddcid
