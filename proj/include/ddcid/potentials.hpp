#pragma once

#include "ddcid/potential.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ddcid {

// Two-dimensional test functions.
Potential make_molei();     // (x²-1)² + (x²+y-1)², minima (±1,0), saddle (0,1)
Potential make_shubert();   // product of two 5-term cosine sums
Potential make_biggs();     // Biggs EXP2 least-squares function
Potential make_camel();     // six-hump camel back
Potential make_rosenbrock(int n);

/// Minimum pair separation below which cluster potentials refuse to evaluate.
inline constexpr double kMinPairDistance = 1e-8;

/// Atom positions for a d-atom cluster with the rigid motions pinned:
/// P1 at the origin, P2 on the x axis, P3 in the xy plane.
///
/// The reduced vector is (x2, x3, y3, x4, y4, z4, ..., xd, yd, zd), of length 3d-6
/// (length 1 when d = 2).
class ClusterCoordinates {
 public:
  explicit ClusterCoordinates(int atom_count);

  [[nodiscard]] int atom_count() const { return atoms_; }
  [[nodiscard]] Eigen::Index reduced_dimension() const;

  /// d x 3 matrix of positions.
  [[nodiscard]] Eigen::MatrixX3d positions(const Vector& reduced) const;

  /// Projects a d x 3 position gradient onto the reduced coordinates.
  [[nodiscard]] Vector reduce_gradient(const Eigen::MatrixX3d& full) const;

  /// Distances r_ij for i < j in row-major pair order.
  [[nodiscard]] std::vector<double> pair_distances(const Vector& reduced) const;

  static Eigen::Index reduced_dimension_for(int atom_count);

 private:
  int atoms_;
};

/// Pair energy φ(r) and its derivative φ'(r).
struct PairTerm {
  double energy;
  double slope;
};
using PairFunction = std::function<PairTerm(double)>;

/// Pairwise cluster potential Σ_{i<j} φ(r_ij) in reduced coordinates.
/// Gradient is analytic; the Hessian is a forward-difference Jacobian of the gradient.
Potential make_cluster_potential(std::string name, int atom_count, PairFunction pair,
                                 Box search_region);

Potential make_lennard_jones(int atom_count);
Potential make_morse(int atom_count, double rho);

/// Square nonlinear system S(x) = 0 with Jacobian.
struct NonlinearSystem {
  std::string name;
  Eigen::Index dimension = 0;
  std::function<Vector(const Vector&)> residual;
  std::function<Matrix(const Vector&)> jacobian;
  Box search_region;
};

NonlinearSystem make_boggs();

/// g = ½ SᵀS with ∇g = J_Sᵀ S; the Hessian is taken by forward differences of ∇g.
Potential sum_of_squares(const NonlinearSystem& system);

/// Registry keys: molei, shubert, biggs, camel, rosenbrock:<N>, lj:<d>, morse:<d>:<rho>, boggs.
Potential make_problem(const std::string& key);

struct ProblemInfo {
  std::string key;
  std::string description;
};
std::vector<ProblemInfo> list_problems();

}  // namespace ddcid
