#include "ddcid/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ddcid {

bool Box::contains(const Vector& x) const {
  if (x.size() != lower.size()) return false;
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

Box Box::cube(Eigen::Index n, double lo, double hi) {
  return Box{Vector::Constant(n, lo), Vector::Constant(n, hi)};
}

Potential::Potential(std::string name, Eigen::Index dimension, EvalFn evaluate, HessianFn hessian,
                     Box search_region)
    : name_(std::move(name)),
      dimension_(dimension),
      evaluate_(std::move(evaluate)),
      hessian_(std::move(hessian)),
      analytic_hessian_(static_cast<bool>(hessian_)),
      region_(std::move(search_region)) {
  if (dimension_ < 1) throw std::invalid_argument("potential dimension must be positive");
  if (!evaluate_) throw std::invalid_argument("potential needs an evaluator");
  if (region_.dimension() != dimension_) {
    throw std::invalid_argument("search region dimension does not match potential");
  }
}

Evaluation Potential::evaluate(const Vector& x) const {
  if (x.size() != dimension_) throw std::invalid_argument("point has wrong dimension for " + name_);
  Evaluation e = evaluate_(x);
  if (!std::isfinite(e.value) || !e.gradient.allFinite()) {
    throw EvaluationError(name_ + ": non-finite evaluation");
  }
  return e;
}

Matrix Potential::hessian(const Vector& x) const {
  if (x.size() != dimension_) throw std::invalid_argument("point has wrong dimension for " + name_);
  Matrix h = analytic_hessian_ ? hessian_(x) : fd_hessian(evaluate_, x, default_fd_step(x));
  if (!h.allFinite()) throw EvaluationError(name_ + ": non-finite Hessian");
  return h;
}

Potential Potential::with_region(Box region) const {
  Potential copy = *this;
  if (region.dimension() != dimension_) {
    throw std::invalid_argument("search region dimension does not match potential");
  }
  copy.region_ = std::move(region);
  return copy;
}

double AuxiliaryPotential::value(const Vector& x) const {
  return from_gradient(base_->gradient(x));
}

Vector AuxiliaryPotential::gradient(const Vector& x) const {
  return base_->hessian(x) * base_->gradient(x);
}

double default_fd_step(const Vector& x) {
  const double scale = x.size() > 0 ? std::max(1.0, x.cwiseAbs().maxCoeff()) : 1.0;
  return std::sqrt(std::numeric_limits<double>::epsilon()) * scale;
}

Matrix fd_hessian(const Potential::EvalFn& evaluate, const Vector& x, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  const Eigen::Index n = x.size();
  const Vector g0 = evaluate(x).gradient;
  Matrix a(n, n);
  Vector probe = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    probe[j] = x[j] + step;
    const double actual = probe[j] - x[j];
    a.col(j) = (evaluate(probe).gradient - g0) / actual;
    probe[j] = x[j];
  }
  return 0.5 * (a + a.transpose());
}

Matrix fd_hessian(const Potential& p, const Vector& x, double step) {
  return fd_hessian([&p](const Vector& y) { return p.evaluate(y); }, x, step);
}

Vector central_difference_gradient(const Potential& p, const Vector& x, double step) {
  Vector g(x.size());
  Vector probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + step;
    const double up = p.value(probe);
    probe[j] = x[j] - step;
    const double down = p.value(probe);
    probe[j] = x[j];
    g[j] = (up - down) / (2.0 * step);
  }
  return g;
}

}  // namespace ddcid
