#include <algorithm>
#include <cmath>

#include "experiments/common.hpp"
#include "latdef/objectives.hpp"

namespace latdef {

namespace {

// Charged neighbours at the nearest-neighbour distance of the site u_1.
int neighbours_of_u1(const ChargedPointSet& ps) {
  const Vector u = ps.lattice.column(0);
  const double nn = u.norm();
  int n = 0;
  for (const auto& p : ps.points)
    if (std::abs((p.position - u).norm() - nn) <= 1e-9 * nn) ++n;
  return n;
}

}  // namespace

ExperimentReport run_kagome(double radius, const ExperimentContext& ctx) {
  if (!(radius > 2.0)) throw Error(ErrorKind::InvalidArgument, "kagome needs radius > 2");
  detail::Stopwatch sw;
  ExperimentReport r;
  r.name = "kagome";
  r.parameters = {{"radius", radius}, {"seed", ctx.seed}};

  const DefectSpec plain({{2, 1.0, {}}});
  const DefectSpec shifted({{2, 1.0, {{1, 1}}}});
  const LennardJones lj{1, 1, 3, 6};
  const double vk = V_kappa(lj, plain, 2);
  r.measurements["V_kappa"] = vk;

  struct Case {
    Potential f;
    const DefectSpec* spec;
    double V;
  };
  const std::vector<Case> cases{{InversePower{2.0}, &plain, 1.0},
                                {YukawaPower{1.0, 2.0}, &plain, 1.0},
                                {Gaussian{1.0}, &shifted, 1.0},
                                {lj, &plain, 0.5 * vk}};
  const SumConfig cfg = detail::sums_for(ctx);
  const GridSpec grid = detail::grid_for(ctx);
  for (const auto& c : cases) {
    const std::string tag = c.f.describe() + (c.spec == &shifted ? " shifted" : "");
    const MinimizeResult m = minimize2d(energy_objective(c.f, *c.spec, cfg), c.V, grid);
    r.add("optimum at A2 for " + tag, detail::at_a2(m), detail::dist_to_a2(m.best_param), 1e-4);
    const double err = energy_defect(param_to_lattice(m.best_param), c.f, *c.spec, cfg).error_bound();
    const double need = 10.0 * (err + grid.nm_tol);
    r.add("runner-up gap for " + tag, m.runner_up_gap > need, m.runner_up_gap, need);

    const Lattice A2 = reduce2d(param_to_lattice(detail::a2_param(c.V)));
    const EnergyValue e = energy_defect(A2, c.f, *c.spec, cfg);
    const ChargedPointSet ps = materialize(A2, *c.spec, radius * std::sqrt(c.V));
    const double diff = std::abs(energy_pointset(ps, c.f) - e.value);
    const double bound = pointset_tail_bound(ps, c.f) + e.error_bound() + 1e-12 * std::abs(e.value);
    r.add("materialized patch matches the defect energy for " + tag, diff <= bound, diff, bound);
  }

  const Lattice A2 = reduce2d(param_to_lattice(detail::a2_param()));
  const ChargedPointSet k_plain = materialize(A2, plain, 6.0);
  const ChargedPointSet k_shift = materialize(A2, shifted, 6.0);
  r.measurements["nearest_neighbours"] = neighbours_of_u1(k_plain);
  detail::emit(r, ctx, "kagome.svg", detail::render(k_plain, &write_svg));
  detail::emit(r, ctx, "kagome_shifted.svg", detail::render(k_shift, &write_svg));
  r.runtime_seconds = sw.seconds();
  finish(r, ctx);
  return r;
}

}  // namespace latdef
