#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace ddcid {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when a potential cannot be evaluated at a point (overflow, coincident atoms, ...).
/// Line searches treat it as a rejected trial step.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned box used to draw random starting points.
struct Box {
  Vector lower;
  Vector upper;

  [[nodiscard]] Eigen::Index dimension() const { return lower.size(); }
  [[nodiscard]] bool contains(const Vector& x) const;
  [[nodiscard]] double diameter() const { return (upper - lower).norm(); }

  static Box cube(Eigen::Index n, double lo, double hi);
};

/// Value and gradient computed together; most potentials share work between the two.
struct Evaluation {
  double value = 0.0;
  Vector gradient;
};

/// Objective g with gradient and Hessian.
///
/// A Potential is an immutable bundle of callables and may be evaluated concurrently.
/// When no analytic Hessian is supplied, the Hessian is a symmetrized forward-difference
/// Jacobian of the gradient (see fd_hessian).
class Potential {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using EvalFn = std::function<Evaluation(const Vector&)>;
  using HessianFn = std::function<Matrix(const Vector&)>;

  Potential(std::string name, Eigen::Index dimension, EvalFn evaluate, HessianFn hessian,
            Box search_region);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] Eigen::Index dimension() const { return dimension_; }
  [[nodiscard]] const Box& search_region() const { return region_; }
  [[nodiscard]] bool has_analytic_hessian() const { return analytic_hessian_; }

  [[nodiscard]] double value(const Vector& x) const { return evaluate(x).value; }
  [[nodiscard]] Vector gradient(const Vector& x) const { return evaluate(x).gradient; }
  [[nodiscard]] Evaluation evaluate(const Vector& x) const;
  [[nodiscard]] Matrix hessian(const Vector& x) const;

  /// Copy of this potential with a different random-start region.
  [[nodiscard]] Potential with_region(Box region) const;

 private:
  std::string name_;
  Eigen::Index dimension_;
  EvalFn evaluate_;
  HessianFn hessian_;
  bool analytic_hessian_;
  Box region_;
};

/// G(x) = ½‖∇g(x)‖², with ∇G = H∇g.
class AuxiliaryPotential {
 public:
  explicit AuxiliaryPotential(const Potential& base) : base_(&base) {}

  [[nodiscard]] double value(const Vector& x) const;
  [[nodiscard]] Vector gradient(const Vector& x) const;

  static double from_gradient(const Vector& grad) { return 0.5 * grad.squaredNorm(); }

 private:
  const Potential* base_;
};

/// Default forward-difference step: sqrt(eps) * max(1, ‖x‖∞).
double default_fd_step(const Vector& x);

/// Forward-difference Jacobian of the gradient, symmetrized as (A + Aᵀ)/2.
Matrix fd_hessian(const Potential::EvalFn& evaluate, const Vector& x, double step);
Matrix fd_hessian(const Potential& p, const Vector& x, double step);

/// Central-difference gradient of the value; used as an independent check of analytic gradients.
Vector central_difference_gradient(const Potential& p, const Vector& x, double step);

}  // namespace ddcid
