#pragma once

#include "ddcid/potential.hpp"

#include <optional>

namespace ddcid {

/// Counts of positive, zero and negative eigenvalues.
struct Inertia {
  int plus = 0;
  int zero = 0;
  int minus = 0;

  [[nodiscard]] int size() const { return plus + zero + minus; }
  [[nodiscard]] bool hyperbolic() const { return zero == 0; }
  [[nodiscard]] bool positive_definite() const { return zero == 0 && minus == 0; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Eigendecomposition of a symmetric Hessian, eigenvalues in descending order.
///
/// Eigenvector signs are normalized so the first component with magnitude above
/// 1e-12 is positive, which keeps seeded runs reproducible.
struct SpectralInfo {
  Vector eigenvalues;    // λ1 >= λ2 >= ... >= λn
  Matrix eigenvectors;   // column i pairs with eigenvalues[i]
  Inertia inertia;
  double zero_tolerance = 0.0;

  [[nodiscard]] Eigen::Index dimension() const { return eigenvalues.size(); }
  /// V₊: the leading inertia.plus columns.
  [[nodiscard]] auto positive_basis() const { return eigenvectors.leftCols(inertia.plus); }
};

/// n·eps·max(1, ‖H‖₂) for a matrix with the given spectral radius.
double default_zero_tolerance(Eigen::Index n, double spectral_radius);

/// Rejects matrices that are not symmetric to within 1e-8·max(1, max|H_ij|).
/// A negative zero_tol selects default_zero_tolerance.
SpectralInfo eigendecompose(const Matrix& h, double zero_tol = -1.0);

/// (H₊)† = V₊ Λ₊⁻¹ V₊ᵀ, or nullopt when there is no positive eigenvalue.
std::optional<Matrix> positive_part_pseudoinverse(const SpectralInfo& s);

/// Solves Hv = rhs through a column-pivoted QR (completed to a complete orthogonal
/// decomposition), giving the minimum-norm least-squares solution when H is singular.
Vector newton_solve(const Matrix& h, const Vector& rhs);

struct EigenPair {
  double value = 0.0;
  Vector vector;
};

struct ExtremalPairs {
  EigenPair largest;
  EigenPair smallest;
};

/// Largest and smallest eigenpairs. Dense backend for now; callers only need this
/// interface, so an iterative solver can replace it.
ExtremalPairs extremal_eigenpairs(const Matrix& h);

/// ‖V₊ᵀ grad‖ / ‖grad‖, or nullopt when grad is zero.
std::optional<double> alignment_ratio(const SpectralInfo& s, const Vector& grad);

/// Flips v so its first component above 1e-12 in magnitude is positive.
void normalize_sign(Eigen::Ref<Vector> v);

}  // namespace ddcid
