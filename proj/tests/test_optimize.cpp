#include <doctest.h>

#include <cmath>
#include <random>

#include "gen.hpp"
#include "latdef/nelder_mead.hpp"
#include "latdef/optimize.hpp"
#include "latdef/sums.hpp"

using namespace latdef;

namespace {

const double kSqrt3_2 = std::sqrt(3.0) / 2.0;

GridSpec small_grid(int n = 24) {
  GridSpec g;
  g.n_x = n;
  g.n_y = n;
  return g;
}

Objective theta_obj(double alpha) {
  return [alpha](const Lattice& L) { return theta(L, alpha, SumConfig{1e-14}).value; };
}

Objective zeta_obj(double two_s) {
  return [two_s](const Lattice& L) { return epstein_zeta(L, two_s, SumConfig{1e-14}).value; };
}

}  // namespace

TEST_CASE("Nelder-Mead finds the Rosenbrock minimum") {
  auto rosen = [](const std::vector<double>& z) {
    return 100 * std::pow(z[1] - z[0] * z[0], 2) + std::pow(1 - z[0], 2);
  };
  NelderMeadOptions opt;
  opt.tol = 1e-10;
  opt.max_iter = 10000;
  const auto r = nelder_mead(rosen, {-1.2, 1.0}, {0.1, 0.1}, opt);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Gaussian energy is minimized by the triangular lattice") {
  const auto r = minimize2d(theta_obj(1.0), 1.0, small_grid());
  CHECK(r.shape == ShapeClass::Triangular);
  CHECK(r.best_param.x == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(r.best_param.y == doctest::Approx(kSqrt3_2).epsilon(1e-5));
  CHECK(r.certified);
  CHECK_FALSE(r.unbounded);
  CHECK(r.runner_up_gap > 1e-8);
  CHECK(r.best_value <= r.grid_value);
}

TEST_CASE("Alternating theta is maximized by the triangular lattice") {
  auto obj = [](const Lattice& L) { return theta_alternating(L, 1.0, SumConfig{1e-14}).value; };
  const auto r = minimize2d(obj, 1.0, small_grid(), Sense::Max);
  CHECK(r.shape == ShapeClass::Triangular);
  CHECK(r.best_value >= r.grid_value);
}

TEST_CASE("Epstein zeta in 2D is minimized by the triangular lattice") {
  const auto r = minimize2d(zeta_obj(4.0), 1.0, small_grid(16));
  CHECK(r.shape == ShapeClass::Triangular);
}

TEST_CASE("Orthorhombic scans pick the cubic lattice") {
  OrthoGrid g;
  g.n = 17;
  const auto r2 = minimize_orthorhombic(theta_obj(1.0), 2, 1.0, g);
  CHECK(r2.is_cubic);
  CHECK(r2.best_value == doctest::Approx(std::pow(theta(Lattice::from_basis(Matrix::Identity(1, 1)), 1.0,
                                                        SumConfig{1e-15}).value, 2)).epsilon(1e-10));
  const auto r3 = minimize_orthorhombic(zeta_obj(4.0), 3, 1.0, g);
  CHECK(r3.is_cubic);
  double prod = 1.0;
  for (double t : r3.sides) prod *= t;
  CHECK(prod == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Sense Max negates consistently") {
  auto neg = [](const Lattice& L) { return -theta(L, 1.0, SumConfig{1e-14}).value; };
  const auto a = minimize2d(theta_obj(1.0), 1.0, small_grid());
  const auto b = minimize2d(neg, 1.0, small_grid(), Sense::Max);
  CHECK(b.best_value == doctest::Approx(-a.best_value).epsilon(1e-12));
  CHECK(a.shape == b.shape);
}

TEST_CASE("Unbounded direction is reported at the cap") {
  // Grows without bound towards the triangular point, decays as y grows.
  auto obj = [](const Lattice& L) {
    const Param2D p = lattice_to_param(L);
    return 1.0 / p.y;
  };
  GridSpec g = small_grid(16);
  const auto r = minimize2d(obj, 1.0, g);
  CHECK(r.unbounded);
  CHECK(r.best_param.y == doctest::Approx(g.y_max));
}

TEST_CASE("Objective failures report the offending point") {
  auto bad = [](const Lattice& L) {
    const Param2D p = lattice_to_param(L);
    if (p.y > 2.0) throw std::runtime_error("boom");
    return p.y;
  };
  try {
    minimize2d(bad, 1.0, small_grid(16));
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ObjectiveFailure);
    CHECK(std::string(e.what()).find("(x, y)") != std::string::npos);
  }
}

TEST_CASE("Parallel grid evaluation is deterministic") {
  GridSpec g1 = small_grid(), g4 = small_grid();
  g4.workers = 4;
  const auto a = minimize2d(theta_obj(0.7), 1.0, g1);
  const auto b = minimize2d(theta_obj(0.7), 1.0, g4);
  CHECK(a.best_value == b.best_value);
  CHECK(a.best_param.x == b.best_param.x);
  CHECK(a.best_param.y == b.best_param.y);
  CHECK(a.runner_up_gap == b.runner_up_gap);
}

TEST_CASE("Optimum is invariant under change of volume scaling") {
  // theta_{sL}(alpha) = theta_L(alpha s^2): same shape optimum.
  const auto a = minimize2d(theta_obj(1.0), 1.0, small_grid());
  const auto b = minimize2d(theta_obj(0.5), 2.0, small_grid());
  CHECK(a.best_value == doctest::Approx(b.best_value).epsilon(1e-10));
  CHECK(a.shape == b.shape);
}

TEST_CASE("Grid optimum is no worse than any random domain point") {
  std::mt19937_64 rng(7);
  const auto r = minimize2d(theta_obj(1.3), 1.0, small_grid());
  for (int i = 0; i < 100; ++i) {
    const Param2D p = gen::random_param(rng, 1.0);
    CHECK(r.best_value <= theta(param_to_lattice(p), 1.3, SumConfig{1e-14}).value + 1e-12);
  }
}

TEST_CASE("Phase scan with and without warm start agree") {
  ObjectiveFamily fam = [](double alpha) { return theta_obj(alpha); };
  const std::vector<double> alphas{0.5, 1.0, 2.0};
  PhaseScanOptions cold;
  cold.warm_start = false;
  const auto a = phase_scan(fam, alphas, 1.0, small_grid(16));
  const auto b = phase_scan(fam, alphas, 1.0, small_grid(16), Sense::Min, cold);
  REQUIRE(a.size() == 3);
  REQUIRE(b.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a[i].ok);
    CHECK(a[i].shape == b[i].shape);
    CHECK(a[i].shape == ShapeClass::Triangular);
  }
  CHECK(shape_sequence(a) == std::vector<ShapeClass>{ShapeClass::Triangular});
}

TEST_CASE("Phase scan records failures per row") {
  ObjectiveFamily fam = [](double c) -> Objective {
    if (c > 1.5) throw Error(ErrorKind::InvalidArgument, "bad control");
    return theta_obj(c);
  };
  const auto rows = phase_scan(fam, {1.0, 2.0}, 1.0, small_grid(12));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ok);
  CHECK_FALSE(rows[1].ok);
  CHECK(rows[1].error == "bad control");
}

TEST_CASE("Boundary bisection refines a shape change") {
  // Square below c = 1, triangular above.
  ObjectiveFamily fam = [](double c) -> Objective {
    const Param2D target = c < 1.0 ? Param2D{0.0, 1.0, 1.0} : Param2D{0.5, kSqrt3_2, 1.0};
    return [target](const Lattice& L) {
      const Param2D p = lattice_to_param(L);
      return std::pow(p.x - target.x, 2) + std::pow(p.y - target.y, 2);
    };
  };
  PhaseScanOptions opt;
  opt.boundary_bisections = 6;
  const auto rows = phase_scan(fam, {0.5, 2.0}, 1.0, small_grid(12), Sense::Min, opt);
  CHECK(rows.size() == 8);
  double lo = 0, hi = 0;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    if (rows[i].shape != rows[i + 1].shape) {
      lo = rows[i].control;
      hi = rows[i + 1].control;
    }
  CHECK(lo < 1.0);
  CHECK(hi >= 1.0);
  CHECK(hi / lo < 1.05);
  CHECK(shape_sequence(rows) == std::vector<ShapeClass>{ShapeClass::Square, ShapeClass::Triangular});
}

TEST_CASE("Hessian at the triangular lattice is positive definite") {
  const auto h = hessian_check(theta_obj(1.0), {0.5, kSqrt3_2, 1.0});
  CHECK(h.positive_definite);
  CHECK(h.grad.norm() < 1e-6);
  CHECK(h.eigenvalues[0] > 10 * h.fd_error);
}

TEST_CASE("Hessian of a quadratic is exact") {
  auto q = [](const Lattice& L) {
    const Param2D p = lattice_to_param(L);
    return 3 * std::pow(p.x - 0.3, 2) + (p.x - 0.3) * (p.y - 1.5) + 2 * std::pow(p.y - 1.5, 2);
  };
  const auto h = hessian_check(q, {0.3, 1.5, 1.0}, 1e-2);
  CHECK(h.hess(0, 0) == doctest::Approx(6.0).epsilon(1e-8));
  CHECK(h.hess(0, 1) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(h.hess(1, 1) == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(h.positive_definite);
}

TEST_CASE("Square lattice is a saddle of the defect Epstein energy") {
  auto obj = [](const Lattice& L) { return (1.0 - 2.0 * std::pow(2.0, -4.0)) * epstein_zeta(L, 4.0, SumConfig{1e-14}).value; };
  const auto h = hessian_check(obj, {0.0, 1.0, 1.0});
  CHECK(h.grad.norm() < 1e-6);
  CHECK(h.eigenvalues[0] < -10 * h.fd_error);
  CHECK(h.eigenvalues[1] > 10 * h.fd_error);
  CHECK_FALSE(h.positive_definite);
}

TEST_CASE("Hessian rejects steps that reach the boundary") {
  CHECK_THROWS_AS(hessian_check(theta_obj(1.0), {0.5, 1e-3, 1.0}, 1e-3), Error);
}
