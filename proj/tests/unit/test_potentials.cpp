#include "ddcid/local_search.hpp"
#include "ddcid/potentials.hpp"
#include "ddcid/spectral.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace ddcid;

namespace {

Vector v2(double x, double y) { return Vector{{x, y}}; }

// Reduced coordinates of an arbitrary placement: translate atom 0 to the origin and rotate
// atom 1 onto the x axis and atom 2 into the xy plane.
Vector reduce_positions(const Eigen::MatrixX3d& pos) {
  const Eigen::Index d = pos.rows();
  Eigen::MatrixX3d p = pos.rowwise() - pos.row(0);
  const Eigen::Vector3d e1 = p.row(1).transpose().normalized();
  Eigen::Vector3d e2 = p.row(2).transpose() - p.row(2).dot(e1) * e1;
  e2.normalize();
  const Eigen::Vector3d e3 = e1.cross(e2);
  Vector x(ClusterCoordinates::reduced_dimension_for(static_cast<int>(d)));
  x[0] = p.row(1).dot(e1);
  if (d == 2) return x;
  x[1] = p.row(2).dot(e1);
  x[2] = p.row(2).dot(e2);
  for (Eigen::Index k = 3; k < d; ++k) {
    x[3 * k - 6] = p.row(k).dot(e1);
    x[3 * k - 5] = p.row(k).dot(e2);
    x[3 * k - 4] = p.row(k).dot(e3);
  }
  return x;
}

Eigen::MatrixX3d icosahedron13(double edge) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Eigen::MatrixX3d pos(13, 3);
  pos.row(0) << 0, 0, 0;
  int k = 1;
  for (double s1 : {-1.0, 1.0}) {
    for (double s2 : {-1.0, 1.0}) {
      pos.row(k++) << 0, s1, s2 * phi;
      pos.row(k++) << s1, s2 * phi, 0;
      pos.row(k++) << s2 * phi, 0, s1;
    }
  }
  pos *= edge / 2.0;  // vertex spacing of the unscaled solid is 2
  return pos;
}

}  // namespace

TEST_CASE("molei values and critical points") {
  const Potential p = make_molei();
  CHECK(p.value(v2(1, 0)) == doctest::Approx(0.0));
  CHECK(p.value(v2(-1, 0)) == doctest::Approx(0.0));
  CHECK(p.gradient(v2(0, 1)).norm() == doctest::Approx(0.0));
  CHECK(p.value(v2(0, 0)) == doctest::Approx(2.0));
  CHECK(p.has_analytic_hessian());
  CHECK(p.search_region().lower == v2(-3, -3));
}

TEST_CASE("shubert symmetry and global value") {
  const Potential p = make_shubert();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 20; ++i) {
    const double x = u(rng), y = u(rng);
    CHECK(p.value(v2(x, y)) == doctest::Approx(p.value(v2(y, x))).epsilon(1e-14));
  }
  // Global minimizer from a 0.01 grid scan, refined by Newton steps.
  Vector xstar = v2(-7.7083137401, -0.8003210994);
  for (int k = 0; k < 5; ++k) xstar -= p.hessian(xstar).ldlt().solve(p.gradient(xstar));
  CHECK((xstar - v2(-7.7083137401, -0.8003210994)).norm() < 1e-6);
  CHECK(std::abs(p.value(xstar) + 186.7309) < 1e-3);
  CHECK(p.gradient(xstar).norm() < 1e-8);
}

TEST_CASE("biggs critical points under the canonical data") {
  const Potential p = make_biggs();
  CHECK(p.gradient(v2(1, 10)).norm() < 1e-8);
  CHECK(p.value(v2(1, 10)) < 1e-20);
  CHECK(p.gradient(v2(16.7047, 16.7047)).norm() < 1e-3);
  CHECK(p.gradient(v2(16.70467613, 16.70467613)).norm() < 1e-8);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    std::uniform_real_distribution<double> u(0, 25);
    const Vector x = v2(u(rng), u(rng));
    const Matrix h = p.hessian(x);
    CHECK(h == h.transpose());
  }
  CHECK_THROWS_AS((void)p.evaluate(v2(-200, 1)), EvaluationError);
}

TEST_CASE("camel values, spectra and symmetry") {
  const Potential p = make_camel();
  CHECK(std::abs(p.value(v2(0.0898, -0.7127)) + 1.0316) < 1e-4);
  const SpectralInfo s = eigendecompose(p.hessian(v2(0, 0)));
  CHECK(s.eigenvalues[0] == doctest::Approx(8.0623).epsilon(1e-3 / 8));
  CHECK(s.eigenvalues[1] == doctest::Approx(-8.0623).epsilon(1e-3 / 8));
  CHECK(p.search_region().lower == v2(-2, -1));
  CHECK(p.search_region().upper == v2(2, 1));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const Vector x = testing::gaussian(rng, 2);
    CHECK(p.value(x) == doctest::Approx(p.value(-x)).epsilon(1e-14));
  }
}

TEST_CASE("rosenbrock minimizer and tridiagonal hessian") {
  const Potential p = make_rosenbrock(50);
  CHECK(p.dimension() == 50);
  const Vector ones = Vector::Ones(50);
  CHECK(p.value(ones) == 0.0);
  CHECK(p.gradient(ones).norm() == 0.0);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const Matrix h = p.hessian(testing::gaussian(rng, 50));
    for (Eigen::Index i = 0; i < 50; ++i) {
      for (Eigen::Index j = 0; j < 50; ++j) {
        if (std::abs(i - j) > 1) CHECK(h(i, j) == 0.0);
      }
    }
  }
  CHECK_THROWS((void)make_rosenbrock(1));
}

TEST_CASE("cluster coordinates") {
  CHECK(ClusterCoordinates::reduced_dimension_for(2) == 1);
  CHECK(ClusterCoordinates::reduced_dimension_for(3) == 3);
  CHECK(ClusterCoordinates::reduced_dimension_for(13) == 33);
  const ClusterCoordinates c(4);
  const Vector x{{1.0, 0.5, 0.8, 0.3, 0.2, 0.9}};
  const Eigen::MatrixX3d pos = c.positions(x);
  CHECK(pos.row(0).norm() == 0.0);
  CHECK(pos(1, 1) == 0.0);
  CHECK(pos(1, 2) == 0.0);
  CHECK(pos(2, 2) == 0.0);
  CHECK(c.pair_distances(x) == c.pair_distances(x));
  CHECK(c.pair_distances(x).size() == 6);
  CHECK(c.pair_distances(x)[0] == doctest::Approx(1.0));
}

TEST_CASE("lennard-jones dimer and icosahedron") {
  const Potential p2 = make_lennard_jones(2);
  CHECK(p2.dimension() == 1);
  const Vector r{{std::pow(2.0, 1.0 / 6.0)}};
  CHECK(p2.value(r) == doctest::Approx(-1.0));
  CHECK(p2.gradient(r).norm() < 1e-12);

  const Potential p13 = make_lennard_jones(13);
  const Vector x0 = reduce_positions(icosahedron13(1.1));
  const LocalSearchResult res = minimize(p13, x0);
  CHECK(std::abs(res.final_value + 44.327) < 1e-2);
}

TEST_CASE("lennard-jones value is invariant under permutation of free atoms") {
  const Potential p = make_lennard_jones(6);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    Vector x = p.search_region().lower;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x[i] += std::uniform_real_distribution<double>(0, 1)(rng) *
              (p.search_region().upper[i] - p.search_region().lower[i]);
    }
    Vector y = x;
    y.segment(3, 3).swap(y.segment(9, 3));  // atoms 4 and 6
    CHECK(p.value(x) == doctest::Approx(p.value(y)).epsilon(1e-12));
  }
}

TEST_CASE("lennard-jones trimer hessian is semidefinite at the minimum") {
  const Potential p = make_lennard_jones(3);
  const double r = std::pow(2.0, 1.0 / 6.0);
  const Vector x{{r, r / 2, r * std::sqrt(3.0) / 2}};
  CHECK(p.value(x) == doctest::Approx(-3.0));
  const SpectralInfo s = eigendecompose(p.hessian(x));
  CHECK(s.eigenvalues.minCoeff() >= -1e-4);
  // Central-difference oracle on the gradient.
  Matrix c(3, 3);
  for (int j = 0; j < 3; ++j) {
    Vector e = Vector::Zero(3);
    e[j] = 1e-6;
    c.col(j) = (p.gradient(x + e) - p.gradient(x - e)) / 2e-6;
  }
  CHECK((p.hessian(x) - 0.5 * (c + c.transpose())).norm() < 1e-4);
}

TEST_CASE("cluster potentials refuse coincident atoms") {
  const Potential p = make_lennard_jones(3);
  CHECK_THROWS_AS((void)p.evaluate(Vector{{0.0, 1.0, 1.0}}), EvaluationError);
  CHECK_THROWS_AS((void)make_morse(3, 3.0).evaluate(Vector{{1.0, 1.0, 0.0}}), EvaluationError);
}

TEST_CASE("morse dimer") {
  for (double rho : {3.0, 6.0, 14.0}) {
    const Potential p = make_morse(2, rho);
    CHECK(p.value(Vector{{1.0}}) == doctest::Approx(-1.0));
    CHECK(p.gradient(Vector{{1.0}}).norm() < 1e-12);
  }
  CHECK(make_morse(11, 3.0).name() == "morse:11:3");
}

TEST_CASE("boggs system") {
  const NonlinearSystem sys = make_boggs();
  CHECK(sys.residual(v2(0, 1)).norm() < 1e-15);
  CHECK(sys.residual(v2(-1, 2)).norm() < 1e-15);
  const Matrix j = sys.jacobian(v2(0, 0));
  CHECK(j(0, 0) == 0.0);
  CHECK(j(0, 1) == -1.0);
  CHECK(j(1, 0) == 1.0);
  CHECK(j(1, 1) == doctest::Approx(0.0));

  const Potential p = sum_of_squares(sys);
  CHECK(p.value(v2(-1, 2)) < 1e-28);
  CHECK(p.value(v2(-std::sqrt(2.0) / 2, 1.5)) < 1e-28);
  for (const Vector& z : {v2(0, 1), v2(-1, 2), v2(-std::sqrt(2.0) / 2, 1.5)}) {
    CHECK(p.gradient(z).norm() < 1e-14);
  }

  // Jacobian against forward differences of the residual.
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const Vector x = testing::gaussian(rng, 2);
    Matrix fd(2, 2);
    for (int c = 0; c < 2; ++c) {
      Vector e = Vector::Zero(2);
      e[c] = 1e-7;
      fd.col(c) = (sys.residual(x + e) - sys.residual(x - e)) / 2e-7;
    }
    CHECK((fd - sys.jacobian(x)).norm() < 1e-6);
  }
}

TEST_CASE("fd hessian") {
  const Matrix a{{3.0, 1.0, 0.5}, {1.0, 2.0, -0.3}, {0.5, -0.3, 4.0}};
  const Potential::EvalFn quad = [a](const Vector& x) {
    return Evaluation{0.5 * x.dot(a * x), a * x};
  };
  const Vector x{{0.3, -1.2, 2.0}};
  const Matrix h = fd_hessian(quad, x, 1e-6);
  CHECK((h - a).norm() < 1e-6);
  CHECK(h == h.transpose());
  const Potential p13 = make_lennard_jones(4);
  const Vector y = p13.search_region().upper * 0.3;
  const Matrix hl = p13.hessian(y);
  CHECK(hl == hl.transpose());
}

TEST_CASE("auxiliary potential identity") {
  std::mt19937_64 rng(19);
  for (const Potential& p : {make_molei(), make_camel(), make_shubert(), make_rosenbrock(6)}) {
    const AuxiliaryPotential aux(p);
    for (int t = 0; t < 20; ++t) {
      const Vector x = testing::gaussian(rng, p.dimension());
      const Vector g = p.gradient(x);
      CHECK(aux.value(x) >= 0.0);
      CHECK(aux.value(x) == doctest::Approx(0.5 * g.squaredNorm()));
      const Vector expect = p.hessian(x) * g;
      CHECK((aux.gradient(x) - expect).norm() <= 1e-8 * (1.0 + expect.norm()));
    }
  }
  CHECK(AuxiliaryPotential(make_molei()).value(v2(1, 0)) == 0.0);
}

TEST_CASE("analytic gradients agree with central differences on every registry problem") {
  const std::vector<std::string> keys = {"molei",        "shubert",      "biggs",  "camel",
                                         "boggs",        "rosenbrock:2", "rosenbrock:50",
                                         "lj:2",         "lj:3",         "lj:7",   "lj:13",
                                         "morse:2:6",    "morse:11:3",   "morse:11:14"};
  for (const std::string& key : keys) {
    CAPTURE(key);
    const Potential p = make_problem(key);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      Vector x(p.dimension());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const Box& b = p.search_region();
        x[i] = b.lower[i] + (b.upper[i] - b.lower[i]) * u(rng);
      }
      Evaluation e;
      try {
        e = p.evaluate(x);
      } catch (const EvaluationError&) {
        continue;
      }
      // Two step sizes: near-collision cluster samples need the smaller one.
      const double h = 1e-6 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
      double err = std::numeric_limits<double>::infinity();
      for (double step : {h, 0.1 * h}) {
        err = std::min(err, (e.gradient - central_difference_gradient(p, x, step)).norm() /
                                (1.0 + e.gradient.norm()));
      }
      worst = std::max(worst, err);
    }
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("registry") {
  CHECK(make_problem("rosenbrock:7").dimension() == 7);
  CHECK(make_problem("lj:5").dimension() == 9);
  CHECK(make_problem("morse:11:3").dimension() == 27);
  CHECK_THROWS_AS((void)make_problem("nonsense"), std::invalid_argument);
  CHECK_THROWS_AS((void)make_problem("lj:x"), std::invalid_argument);
  CHECK(list_problems().size() == 8);
}
