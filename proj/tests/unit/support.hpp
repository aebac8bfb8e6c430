#pragma once

#include "ddcid/potential.hpp"

#include <Eigen/QR>

#include <random>

namespace testing {

using ddcid::Matrix;
using ddcid::Vector;

inline Vector gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> d;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

inline Matrix random_orthogonal(std::mt19937_64& rng, Eigen::Index n) {
  Matrix a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) = gaussian(rng, n);
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(n, n);
}

// Q diag(lambda) Qᵀ, exactly symmetrized.
inline Matrix with_spectrum(std::mt19937_64& rng, const Vector& lambda) {
  const Matrix q = random_orthogonal(rng, lambda.size());
  Matrix h = q * lambda.asDiagonal() * q.transpose();
  return 0.5 * (h + h.transpose());
}

// Eigenvalue magnitudes in [lo, hi], with `negative` of them negated.
inline Vector random_spectrum(std::mt19937_64& rng, Eigen::Index n, Eigen::Index negative,
                              double lo = 0.5, double hi = 5.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector l(n);
  for (Eigen::Index i = 0; i < n; ++i) l[i] = (i < negative ? -1.0 : 1.0) * u(rng);
  return l;
}

}  // namespace testing
