#include <algorithm>
#include <cmath>

#include "experiments/common.hpp"
#include "latdef/objectives.hpp"

namespace latdef {

ExperimentReport run_ionic(const std::vector<double>& alphas, const ExperimentContext& ctx) {
  if (alphas.empty()) throw Error(ErrorKind::InvalidArgument, "ionic needs at least one alpha");
  detail::Stopwatch sw;
  ExperimentReport r;
  r.name = "ionic";
  r.parameters = {{"alphas", alphas}, {"seed", ctx.seed}};

  const SumConfig cfg = detail::sums_for(ctx, 1e-14);
  const GridSpec grid = detail::grid_for(ctx);
  for (double alpha : alphas) {
    auto alt = [alpha, cfg](const Lattice& L) { return theta_alternating(L, alpha, cfg).value; };
    const MinimizeResult m = minimize2d(alt, 1.0, grid, Sense::Max);
    r.add(fmt::format("alternating theta: A2 grid-maximal at alpha = {}", alpha), detail::at_a2(m),
          detail::dist_to_a2(m.best_param), 1e-4);
  }

  OrthoGrid og;
  og.n = grid.n_x;
  og.workers = ctx.workers;
  og.nm_tol = grid.nm_tol;
  auto alt1 = [cfg](const Lattice& L) { return theta_alternating(L, 1.0, cfg).value; };
  auto th1 = [cfg](const Lattice& L) { return theta(L, 1.0, cfg).value; };
  const OrthoResult omax = minimize_orthorhombic(alt1, 2, 1.0, og, Sense::Max);
  r.add("rectangles: square maximal for alternating theta", omax.is_cubic, std::abs(omax.log_aspects.front()),
        kShapeTol);
  const OrthoResult omin = minimize_orthorhombic(th1, 2, 1.0, og, Sense::Min);
  r.add("rectangles: square minimal for theta", omin.is_cubic, std::abs(omin.log_aspects.front()), kShapeTol);

  // zeta_L(4) - 2 zeta_{2L}(4).
  const DefectSpec app({{2, 2.0, {}}});
  const Potential f = InversePower{2.0};
  const Objective obj = energy_objective(f, app, cfg);
  const MinimizeResult m = minimize2d(obj, 1.0, grid);
  r.add("zeta_L(4) - 2 zeta_2L(4): A2 grid-minimal", detail::at_a2(m), detail::dist_to_a2(m.best_param), 1e-4);

  const Param2D z2{0.0, 1.0, 1.0};
  const double h = 1e-3;
  const HessianResult hs = hessian_check(obj, z2, h);
  const double eval_err = energy_defect(param_to_lattice(z2), f, app, cfg).error_bound();
  const double noise = hs.fd_error + 16.0 * eval_err / (h * h);
  r.measurements["hessian_eigenvalues"] = {hs.eigenvalues[0], hs.eigenvalues[1]};
  r.measurements["hessian_noise"] = noise;
  const bool saddle = hs.eigenvalues[0] < -10.0 * noise && hs.eigenvalues[1] > 10.0 * noise;
  r.add("Z2 is a saddle point", saddle, std::min(std::abs(hs.eigenvalues[0]), std::abs(hs.eigenvalues[1])),
        10.0 * noise);
  r.add("Z2 is a critical point", hs.grad.norm() <= 1e-6, hs.grad.norm(), 1e-6);

  const Lattice A2 = reduce2d(param_to_lattice(detail::a2_param()));
  const DefectSpec alternating({{2, 2.0, {{1, 0}, {0, 1}}}});
  const DefectSpec centred({{2, 2.0, {{1, 1}}}});
  detail::emit(r, ctx, "ionic_alternating.svg", detail::render(materialize(A2, alternating, 5.0), &write_svg));
  detail::emit(r, ctx, "ionic_sublattice.svg", detail::render(materialize(A2, app, 5.0), &write_svg));
  detail::emit(r, ctx, "ionic_shifted.svg", detail::render(materialize(A2, centred, 5.0), &write_svg));
  r.runtime_seconds = sw.seconds();
  finish(r, ctx);
  return r;
}

}  // namespace latdef
