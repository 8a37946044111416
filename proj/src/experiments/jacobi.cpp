#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "experiments/common.hpp"

namespace latdef {

namespace {

double jacobi_residual(const Lattice& L, double y, const SumConfig& cfg) {
  const double lhs = theta(L, 1.0 / y, cfg).value;
  const double rhs = std::pow(y, 0.5 * L.dim()) * theta(dual(L), y, cfg).value / L.volume();
  return std::abs(lhs - rhs) / std::abs(lhs);
}

// int_0^inf e^{-rt} g(t) dt, split at the breakpoints.
template <class F>
double laplace(F g, double r, std::vector<double> bps) {
  std::sort(bps.begin(), bps.end());
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  auto h = [&](double t) {
    const double e = std::exp(-r * t);
    return e == 0.0 ? 0.0 : e * g(t);
  };
  double total = 0.0, lo = 0.0;
  for (double b : bps) {
    if (b > lo) total += ts.integrate(h, lo, b);
    lo = std::max(lo, b);
  }
  return total + es.integrate(h, lo, std::numeric_limits<double>::infinity());
}

}  // namespace

ExperimentReport run_jacobi_suite(int n_random, const std::vector<double>& ys, const ExperimentContext& ctx) {
  if (n_random < 0 || ys.empty()) throw Error(ErrorKind::InvalidArgument, "jacobi needs y values");
  detail::Stopwatch sw;
  ExperimentReport r;
  r.name = "jacobi";
  r.parameters = {{"n_random", n_random}, {"ys", ys}, {"seed", ctx.seed}};

  SumConfig cfg = detail::sums_for(ctx, 1e-15);
  cfg.theta_mode = ThetaMode::Direct;
  std::mt19937_64 rng(ctx.seed);
  double worst2 = 0.0;
  for (int i = 0; i < n_random; ++i) {
    const Lattice L = param_to_lattice(detail::random_param(rng));
    for (double y : ys) worst2 = std::max(worst2, jacobi_residual(L, y, cfg));
  }
  if (n_random > 0) r.add("random 2D lattices", worst2 < 1e-11, worst2, 1e-11);
  double worst3 = 0.0;
  for (NamedLattice n : {NamedLattice::Z3, NamedLattice::D3})
    for (double y : ys) worst3 = std::max(worst3, jacobi_residual(named(n), y, cfg));
  r.add("Z3 and D3", worst3 < 1e-11, worst3, 1e-11);
  const double z2 = jacobi_residual(named(NamedLattice::Z2), 1.0, cfg);
  r.add("Z2 at y = 1", z2 == 0.0, z2, 0.0);
  r.runtime_seconds = sw.seconds();
  finish(r, ctx);
  return r;
}

ExperimentReport run_laplace_suite(int n_random, const ExperimentContext& ctx) {
  if (n_random < 1) throw Error(ErrorKind::InvalidArgument, "laplace needs n_random >= 1");
  detail::Stopwatch sw;
  ExperimentReport r;
  r.name = "laplace";
  r.parameters = {{"n_random", n_random}, {"seed", ctx.seed}};

  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto base = [&]() -> Potential {
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
      case 0: return InversePower{1.05 + 3.0 * u(rng)};
      case 1: return YukawaPower{0.1 + 2.0 * u(rng), 0.6 + 3.0 * u(rng)};
      default: {
        const double x1 = 1.05 + 3.0 * u(rng);
        return LennardJones{0.5 + u(rng), 0.5 + u(rng), x1, x1 + 0.5 + 3.0 * u(rng)};
      }
    }
  };
  double worst = 0.0;
  for (int i = 0; i < n_random; ++i) {
    Potential f = base();
    if (i % 2 == 1) f = Potential::defect_modified(f, DefectSpec({{2, 2 * u(rng) - 1, {}}, {3, u(rng), {}}}));
    const DensityFn rho = density(f);
    for (double x : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double q = laplace([&](double t) { return rho(t); }, x, rho.breakpoints);
      const double scale = laplace([&](double t) { return std::abs(rho(t)); }, x, rho.breakpoints);
      worst = std::max(worst, std::abs(q - f(x)) / scale);
    }
  }
  r.add("densities reproduce the potentials", worst <= 1e-8, worst, 1e-8);
  r.runtime_seconds = sw.seconds();
  finish(r, ctx);
  return r;
}

}  // namespace latdef
