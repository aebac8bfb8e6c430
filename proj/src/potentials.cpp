#include "ddcid/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ddcid {

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Matrix sym2(double a, double b, double c) {
  Matrix m(2, 2);
  m << a, b, b, c;
  return m;
}

struct ShubertSum {
  double s = 0.0;   // Σ i cos((i+1)x + i)
  double ds = 0.0;  // d/dx
  double d2s = 0.0; // d²/dx²
};

ShubertSum shubert_sum(double x) {
  ShubertSum r;
  for (int i = 1; i <= 5; ++i) {
    const double arg = (i + 1) * x + i;
    const double c = std::cos(arg);
    const double s = std::sin(arg);
    r.s += i * c;
    r.ds -= i * (i + 1) * s;
    r.d2s -= i * (i + 1) * (i + 1) * c;
  }
  return r;
}

// Biggs EXP2 data: t_i = 0.1 i, y_i = e^{-t_i} - 5 e^{-10 t_i}.
constexpr int kBiggsTerms = 10;
constexpr double kBiggsSafeLower = -100.0;

void check_biggs_domain(const Vector& x) {
  if (x.minCoeff() < kBiggsSafeLower) {
    throw EvaluationError("biggs: point outside the overflow-safe box");
  }
}

}  // namespace

Potential make_molei() {
  auto eval = [](const Vector& p) {
    const double x = p[0], y = p[1];
    const double a = x * x - 1.0;
    const double b = x * x + y - 1.0;
    return Evaluation{a * a + b * b, vec2(4.0 * x * a + 4.0 * x * b, 2.0 * b)};
  };
  auto hess = [](const Vector& p) {
    const double x = p[0], y = p[1];
    return sym2(24.0 * x * x + 4.0 * y - 8.0, 4.0 * x, 2.0);
  };
  return Potential("molei", 2, eval, hess, Box::cube(2, -3.0, 3.0));
}

Potential make_shubert() {
  auto eval = [](const Vector& p) {
    const ShubertSum sx = shubert_sum(p[0]);
    const ShubertSum sy = shubert_sum(p[1]);
    return Evaluation{sx.s * sy.s, vec2(sx.ds * sy.s, sx.s * sy.ds)};
  };
  auto hess = [](const Vector& p) {
    const ShubertSum sx = shubert_sum(p[0]);
    const ShubertSum sy = shubert_sum(p[1]);
    return sym2(sx.d2s * sy.s, sx.ds * sy.ds, sx.s * sy.d2s);
  };
  return Potential("shubert", 2, eval, hess, Box::cube(2, -10.0, 10.0));
}

Potential make_biggs() {
  auto eval = [](const Vector& p) {
    check_biggs_domain(p);
    Evaluation e{0.0, Vector::Zero(2)};
    for (int i = 1; i <= kBiggsTerms; ++i) {
      const double t = 0.1 * i;
      const double y = std::exp(-t) - 5.0 * std::exp(-10.0 * t);
      const double e1 = std::exp(-t * p[0]);
      const double e2 = std::exp(-t * p[1]);
      const double r = e1 - 5.0 * e2 - y;
      e.value += r * r;
      e.gradient[0] += 2.0 * r * (-t * e1);
      e.gradient[1] += 2.0 * r * (5.0 * t * e2);
    }
    return e;
  };
  auto hess = [](const Vector& p) {
    check_biggs_domain(p);
    Matrix h = Matrix::Zero(2, 2);
    for (int i = 1; i <= kBiggsTerms; ++i) {
      const double t = 0.1 * i;
      const double y = std::exp(-t) - 5.0 * std::exp(-10.0 * t);
      const double e1 = std::exp(-t * p[0]);
      const double e2 = std::exp(-t * p[1]);
      const double r = e1 - 5.0 * e2 - y;
      const double j1 = -t * e1;
      const double j2 = 5.0 * t * e2;
      h(0, 0) += 2.0 * (j1 * j1 + r * t * t * e1);
      h(1, 1) += 2.0 * (j2 * j2 - r * 5.0 * t * t * e2);
      h(0, 1) += 2.0 * j1 * j2;
    }
    h(1, 0) = h(0, 1);
    return h;
  };
  return Potential("biggs", 2, eval, hess, Box::cube(2, 0.0, 25.0));
}

Potential make_camel() {
  auto eval = [](const Vector& p) {
    const double x = p[0], y = p[1];
    const double x2 = x * x, y2 = y * y;
    const double value = (4.0 - 2.1 * x2 + x2 * x2 / 3.0) * x2 + x * y + 4.0 * (y2 - 1.0) * y2;
    return Evaluation{value, vec2(8.0 * x - 8.4 * x2 * x + 2.0 * x2 * x2 * x + y,
                                  x - 8.0 * y + 16.0 * y2 * y)};
  };
  auto hess = [](const Vector& p) {
    const double x2 = p[0] * p[0];
    return sym2(8.0 - 25.2 * x2 + 10.0 * x2 * x2, 1.0, -8.0 + 48.0 * p[1] * p[1]);
  };
  Box region{vec2(-2.0, -1.0), vec2(2.0, 1.0)};
  return Potential("camel", 2, eval, hess, region);
}

Potential make_rosenbrock(int n) {
  if (n < 2) throw std::invalid_argument("rosenbrock needs N >= 2");
  auto eval = [n](const Vector& x) {
    Evaluation e{0.0, Vector::Zero(n)};
    for (int i = 0; i + 1 < n; ++i) {
      const double a = x[i + 1] - x[i] * x[i];
      const double b = x[i] - 1.0;
      e.value += 100.0 * a * a + b * b;
      e.gradient[i] += -400.0 * x[i] * a + 2.0 * b;
      e.gradient[i + 1] += 200.0 * a;
    }
    return e;
  };
  auto hess = [n](const Vector& x) {
    Matrix h = Matrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
      h(i, i) += 1200.0 * x[i] * x[i] - 400.0 * x[i + 1] + 2.0;
      h(i + 1, i + 1) += 200.0;
      h(i, i + 1) -= 400.0 * x[i];
      h(i + 1, i) -= 400.0 * x[i];
    }
    return h;
  };
  return Potential("rosenbrock:" + std::to_string(n), n, eval, hess, Box::cube(n, -5.0, 10.0));
}

// ---------------------------------------------------------------------------
// Clusters

ClusterCoordinates::ClusterCoordinates(int atom_count) : atoms_(atom_count) {
  if (atom_count < 2) throw std::invalid_argument("cluster needs at least 2 atoms");
}

Eigen::Index ClusterCoordinates::reduced_dimension_for(int atom_count) {
  return atom_count == 2 ? 1 : 3 * atom_count - 6;
}

Eigen::Index ClusterCoordinates::reduced_dimension() const { return reduced_dimension_for(atoms_); }

Eigen::MatrixX3d ClusterCoordinates::positions(const Vector& reduced) const {
  if (reduced.size() != reduced_dimension()) {
    throw std::invalid_argument("reduced cluster vector has wrong length");
  }
  Eigen::MatrixX3d p = Eigen::MatrixX3d::Zero(atoms_, 3);
  p(1, 0) = reduced[0];
  if (atoms_ >= 3) {
    p(2, 0) = reduced[1];
    p(2, 1) = reduced[2];
    for (int k = 3; k < atoms_; ++k) {
      p.row(k) = reduced.segment<3>(3 * k - 6).transpose();
    }
  }
  return p;
}

Vector ClusterCoordinates::reduce_gradient(const Eigen::MatrixX3d& full) const {
  Vector g(reduced_dimension());
  g[0] = full(1, 0);
  if (atoms_ >= 3) {
    g[1] = full(2, 0);
    g[2] = full(2, 1);
    for (int k = 3; k < atoms_; ++k) g.segment<3>(3 * k - 6) = full.row(k).transpose();
  }
  return g;
}

std::vector<double> ClusterCoordinates::pair_distances(const Vector& reduced) const {
  const Eigen::MatrixX3d p = positions(reduced);
  std::vector<double> r;
  r.reserve(static_cast<std::size_t>(atoms_ * (atoms_ - 1) / 2));
  for (int i = 0; i < atoms_; ++i) {
    for (int j = i + 1; j < atoms_; ++j) r.push_back((p.row(j) - p.row(i)).norm());
  }
  return r;
}

Potential make_cluster_potential(std::string name, int atom_count, PairFunction pair,
                                 Box search_region) {
  const ClusterCoordinates coords(atom_count);
  const Eigen::Index n = coords.reduced_dimension();
  auto eval = [coords, pair = std::move(pair), name](const Vector& x) {
    const Eigen::MatrixX3d p = coords.positions(x);
    const int d = coords.atom_count();
    Eigen::MatrixX3d force = Eigen::MatrixX3d::Zero(d, 3);
    double energy = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const Eigen::RowVector3d diff = p.row(j) - p.row(i);
        const double r = diff.norm();
        if (!(r >= kMinPairDistance)) throw EvaluationError(name + ": coincident atoms");
        const PairTerm t = pair(r);
        energy += t.energy;
        const Eigen::RowVector3d dr = (t.slope / r) * diff;
        force.row(j) += dr;
        force.row(i) -= dr;
      }
    }
    return Evaluation{energy, coords.reduce_gradient(force)};
  };
  return Potential(std::move(name), n, eval, nullptr, std::move(search_region));
}

namespace {

Box cluster_region(int atom_count, double bond_length) {
  const double half = 0.75 * bond_length * std::cbrt(static_cast<double>(atom_count));
  return Box::cube(ClusterCoordinates::reduced_dimension_for(atom_count), -half, half);
}

}  // namespace

Potential make_lennard_jones(int atom_count) {
  auto pair = [](double r) {
    const double inv6 = 1.0 / (r * r * r * r * r * r);
    const double inv12 = inv6 * inv6;
    return PairTerm{4.0 * (inv12 - inv6), 4.0 * (-12.0 * inv12 + 6.0 * inv6) / r};
  };
  return make_cluster_potential("lj:" + std::to_string(atom_count), atom_count, pair,
                                cluster_region(atom_count, std::pow(2.0, 1.0 / 6.0)));
}

Potential make_morse(int atom_count, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("morse needs rho > 0");
  auto pair = [rho](double r) {
    const double e = std::exp(rho * (1.0 - r));
    return PairTerm{e * (e - 2.0), -2.0 * rho * e * (e - 1.0)};
  };
  std::string rho_text = std::to_string(rho);
  rho_text.erase(rho_text.find_last_not_of('0') + 1);
  if (!rho_text.empty() && rho_text.back() == '.') rho_text.pop_back();
  return make_cluster_potential("morse:" + std::to_string(atom_count) + ":" + rho_text, atom_count,
                                pair, cluster_region(atom_count, 1.0));
}

// ---------------------------------------------------------------------------
// Nonlinear systems

NonlinearSystem make_boggs() {
  NonlinearSystem s;
  s.name = "boggs";
  s.dimension = 2;
  s.residual = [](const Vector& p) {
    return vec2(p[0] * p[0] - p[1] + 1.0, p[0] - std::cos(0.5 * std::numbers::pi * p[1]));
  };
  s.jacobian = [](const Vector& p) {
    Matrix j(2, 2);
    j << 2.0 * p[0], -1.0, 1.0, 0.5 * std::numbers::pi * std::sin(0.5 * std::numbers::pi * p[1]);
    return j;
  };
  s.search_region = Box{vec2(-3.0, -1.0), vec2(2.0, 7.0)};
  return s;
}

Potential sum_of_squares(const NonlinearSystem& system) {
  if (!system.residual || !system.jacobian || system.dimension < 1) {
    throw std::invalid_argument("nonlinear system is incomplete");
  }
  auto eval = [residual = system.residual, jacobian = system.jacobian](const Vector& x) {
    const Vector s = residual(x);
    return Evaluation{0.5 * s.squaredNorm(), jacobian(x).transpose() * s};
  };
  return Potential(system.name, system.dimension, eval, nullptr, system.search_region);
}

}  // namespace ddcid
