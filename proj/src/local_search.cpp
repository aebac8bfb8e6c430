#include "ddcid/local_search.hpp"

#include <cmath>
#include <stdexcept>

namespace ddcid {

StepController::StepController(double initial) : step_(initial) {
  if (!(initial >= kMinStep && initial <= kMaxStep)) {
    throw std::invalid_argument("initial step outside [2^-26, 2^5]");
  }
}

void StepController::accept() {
  if (!rejected_since_accept_) step_ = std::min(2.0 * step_, kMaxStep);
  rejected_since_accept_ = false;
}

bool StepController::reject() {
  rejected_since_accept_ = true;
  if (step_ <= kMinStep) return false;
  step_ = std::max(0.5 * step_, kMinStep);
  return true;
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::double_descent: return "double_descent";
    case Direction::gradient: return "gradient";
    case Direction::newton: return "newton";
  }
  return "?";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::converged: return "converged";
    case Outcome::budget_exhausted: return "budget_exhausted";
    case Outcome::step_underflow: return "step_underflow";
  }
  return "?";
}

double alignment_threshold(Eigen::Index n) { return std::sqrt(static_cast<double>(n)) / 10.0; }

std::optional<Vector> double_descent_direction(const Vector& grad, const SpectralInfo& s) {
  const auto ratio = alignment_ratio(s, grad);
  if (!ratio || *ratio <= alignment_threshold(grad.size())) return std::nullopt;
  const auto vp = s.positive_basis();
  const Vector coeff = (vp.transpose() * grad).cwiseQuotient(s.eigenvalues.head(s.inertia.plus));
  return -(vp * coeff);
}

bool stopping_criterion(const Vector& x_k, const Vector& x_km1, const Vector& grad_k,
                        const Vector& x0, const Vector& grad0, const Tolerances& tol) {
  if (grad_k.norm() < tol.atol + grad0.norm() * tol.rtol) return true;
  return (x_k - x_km1).norm() < tol.atol + x0.norm() * tol.rtol;
}

namespace {

struct State {
  Vector x;
  Evaluation e;
  double aux = 0.0;  // G = ½‖∇g‖²
};

std::optional<State> try_state(const Potential& p, Vector x) {
  if (!x.allFinite()) return std::nullopt;
  try {
    Evaluation e = p.evaluate(x);
    const double aux = AuxiliaryPotential::from_gradient(e.gradient);
    return State{std::move(x), std::move(e), aux};
  } catch (const EvaluationError&) {
    return std::nullopt;
  }
}

enum class Mode { minimize, saddle, gradient_only };

// Shared driver for the three local searches. Each iteration picks a direction, then
// halves/doubles h through the controller until the mode's acceptance test passes.
LocalSearchResult run_search(const Potential& p, const Vector& x0, const LocalSearchConfig& cfg,
                             StepController ctrl, Mode mode) {
  const Tolerances& tol = cfg.tolerances;
  LocalSearchResult out;

  auto start = try_state(p, x0);
  if (!start) throw EvaluationError(p.name() + ": cannot evaluate at the starting point");
  State cur = std::move(*start);
  const Vector grad0 = cur.e.gradient;

  auto finish = [&](Outcome o) {
    out.final_point = cur.x;
    out.final_value = cur.e.value;
    out.final_gradient_norm = cur.e.gradient.norm();
    out.outcome = o;
    return out;
  };
  if (cfg.record_path) out.path.push_back(cur.x);
  if (cur.e.gradient.norm() < tol.atol + grad0.norm() * tol.rtol) return finish(Outcome::converged);

  int fallback_left = mode == Mode::gradient_only ? 1 : 0;
  while (out.iterations < tol.max_iterations) {
    Vector dir;
    Direction kind = Direction::gradient;
    if (mode == Mode::saddle) {
      dir = -newton_solve(p.hessian(cur.x), cur.e.gradient);
      kind = Direction::newton;
    } else if (fallback_left == 0) {
      const SpectralInfo s = eigendecompose(p.hessian(cur.x), cfg.zero_tolerance);
      if (auto v = double_descent_direction(cur.e.gradient, s)) {
        dir = std::move(*v);
        kind = Direction::double_descent;
      } else {
        fallback_left = cfg.fallback_steps;
      }
    }
    if (kind == Direction::gradient) dir = -cur.e.gradient.normalized();

    int damping = 0;
    std::optional<State> next;
    while (!next) {
      const double h = ctrl.current();
      const double slope = dir.dot(cur.e.gradient);
      auto trial = try_state(p, cur.x + h * dir);
      bool ok = false;
      if (trial) {
        switch (kind) {
          case Direction::newton:
            ok = trial->aux < cur.aux;
            break;
          case Direction::double_descent:
            ok = trial->e.value <= cur.e.value + cfg.armijo * h * slope && trial->aux < cur.aux;
            break;
          case Direction::gradient:
            ok = trial->e.value <= cur.e.value + cfg.armijo * h * slope;
            break;
        }
      }
      if (ok) {
        ctrl.accept();
        next = std::move(trial);
        break;
      }
      if (!ctrl.reject()) return finish(Outcome::step_underflow);
      if (kind == Direction::double_descent && ++damping >= cfg.damping_limit) {
        kind = Direction::gradient;
        dir = -cur.e.gradient.normalized();
        fallback_left = cfg.fallback_steps;
      }
    }

    const Vector previous = std::move(cur.x);
    cur = std::move(*next);
    ++out.iterations;
    out.direction_log.push_back(kind);
    if (cfg.record_path) out.path.push_back(cur.x);
    if (kind == Direction::gradient && mode != Mode::gradient_only) --fallback_left;
    if (stopping_criterion(cur.x, previous, cur.e.gradient, x0, grad0, tol)) {
      return finish(Outcome::converged);
    }
  }
  return finish(Outcome::budget_exhausted);
}

}  // namespace

LocalSearchResult minimize(const Potential& p, const Vector& x0, const LocalSearchConfig& cfg,
                           StepController ctrl) {
  return run_search(p, x0, cfg, ctrl, Mode::minimize);
}

LocalSearchResult saddle_search(const Potential& p, const Vector& x0, const LocalSearchConfig& cfg,
                                StepController ctrl) {
  return run_search(p, x0, cfg, ctrl, Mode::saddle);
}

LocalSearchResult gradient_descent(const Potential& p, const Vector& x0,
                                   const LocalSearchConfig& cfg, StepController ctrl) {
  return run_search(p, x0, cfg, ctrl, Mode::gradient_only);
}

}  // namespace ddcid
