#include "ddcid/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddcid {

double default_zero_tolerance(Eigen::Index n, double spectral_radius) {
  return static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
         std::max(1.0, spectral_radius);
}

void normalize_sign(Eigen::Ref<Vector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

SpectralInfo eigendecompose(const Matrix& h, double zero_tol) {
  if (h.rows() != h.cols() || h.rows() == 0) throw std::invalid_argument("Hessian must be square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw std::invalid_argument("Hessian is not symmetric");
  }

  const Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");

  const Eigen::Index n = h.rows();
  SpectralInfo s;
  s.eigenvalues = solver.eigenvalues().reverse();
  s.eigenvectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index i = 0; i < n; ++i) normalize_sign(s.eigenvectors.col(i));

  const double radius = s.eigenvalues.cwiseAbs().maxCoeff();
  s.zero_tolerance = zero_tol >= 0.0 ? zero_tol : default_zero_tolerance(n, radius);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = s.eigenvalues[i];
    if (lambda > s.zero_tolerance) {
      ++s.inertia.plus;
    } else if (lambda < -s.zero_tolerance) {
      ++s.inertia.minus;
    } else {
      ++s.inertia.zero;
    }
  }
  return s;
}

std::optional<Matrix> positive_part_pseudoinverse(const SpectralInfo& s) {
  const int k = s.inertia.plus;
  if (k == 0) return std::nullopt;
  const auto vp = s.positive_basis();
  const Vector inv = s.eigenvalues.head(k).cwiseInverse();
  return vp * inv.asDiagonal() * vp.transpose();
}

Vector newton_solve(const Matrix& h, const Vector& rhs) {
  if (h.rows() != rhs.size()) throw std::invalid_argument("newton_solve: size mismatch");
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(h);
  return cod.solve(rhs);
}

ExtremalPairs extremal_eigenpairs(const Matrix& h) {
  const SpectralInfo s = eigendecompose(h);
  const Eigen::Index n = s.dimension();
  return ExtremalPairs{{s.eigenvalues[0], s.eigenvectors.col(0)},
                       {s.eigenvalues[n - 1], s.eigenvectors.col(n - 1)}};
}

std::optional<double> alignment_ratio(const SpectralInfo& s, const Vector& grad) {
  const double norm = grad.norm();
  if (norm == 0.0) return std::nullopt;
  if (s.inertia.plus == 0) return 0.0;
  return std::min(1.0, (s.positive_basis().transpose() * grad).norm() / norm);
}

}  // namespace ddcid
