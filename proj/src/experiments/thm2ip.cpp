#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/zeta.hpp>

#include "experiments/common.hpp"
#include "latdef/objectives.hpp"

namespace latdef {

ExperimentReport run_thm2ip(const DefectSpec& spec, double s, int n_random, const ExperimentContext& ctx) {
  if (!spec.non_shifted()) throw Error(ErrorKind::InvalidSpec, "thm2ip needs a non-shifted spec");
  if (!(s > 1.0)) throw Error(ErrorKind::InvalidArgument, "thm2ip needs s > d/2 = 1");
  if (n_random < 1) throw Error(ErrorKind::InvalidArgument, "thm2ip needs n_random >= 1");
  detail::Stopwatch sw;
  ExperimentReport r;
  r.name = "thm2ip";
  r.parameters = {{"spec", spec.to_json()}, {"s", s}, {"n_random", n_random}, {"seed", ctx.seed}};

  const SumConfig cfg = detail::sums_for(ctx, 1e-14);
  const Potential f = InversePower{s};
  const double Lk = dirichlet_L(spec, 2.0 * s);
  r.measurements["L"] = Lk;

  std::mt19937_64 rng(ctx.seed);
  double worst = 0.0, worst_abs = 0.0;
  std::string csv = "x,y,defect_energy,zeta,residual\n";
  for (int i = 0; i < n_random; ++i) {
    const Param2D p = detail::random_param(rng);
    const Lattice L = param_to_lattice(p);
    const double e = energy_defect(L, f, spec, cfg).value;
    const double z = epstein_zeta(L, 2.0 * s, cfg).value;
    const double res = std::abs(e - (1.0 - Lk) * z) / std::abs(z);
    worst = std::max(worst, res);
    worst_abs = std::max(worst_abs, std::abs(e) / std::abs(z));
    csv += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.3e}\n", p.x, p.y, e, z, res);
  }
  r.add("factorization through the Epstein zeta", worst <= 1e-10, worst, 1e-10);

  const GridSpec grid = detail::grid_for(ctx);
  const Objective obj = energy_objective(f, spec, cfg);
  if (std::abs(Lk - 1.0) <= 1e-12) {
    r.add("defect energy vanishes identically", worst_abs <= 1e-10, worst_abs, 1e-10);
  } else {
    const bool reversed = Lk > 1.0;
    const MinimizeResult m = minimize2d(obj, 1.0, grid, reversed ? Sense::Max : Sense::Min);
    r.add(reversed ? "A2 grid-maximal (order reversed)" : "A2 grid-minimal", detail::at_a2(m),
          detail::dist_to_a2(m.best_param), 1e-4);
  }

  const bool vacancies = std::all_of(spec.entries().begin(), spec.entries().end(),
                                     [](const DefectEntry& e) { return e.a == 1.0; });
  if (vacancies && !spec.empty()) {
    const double bound = boost::math::zeta(2.0 * s) - 1.0;
    r.add("vacancies only: L <= zeta(2s) - 1", Lk <= bound, Lk, bound);
    r.add("vacancies only: L < 1", Lk < 1.0, Lk, 1.0);
  }
  detail::emit(r, ctx, "thm2ip.csv", csv);
  r.runtime_seconds = sw.seconds();
  finish(r, ctx);
  return r;
}

}  // namespace latdef
