#include <algorithm>
#include <cmath>

#include "experiments/common.hpp"
#include "latdef/objectives.hpp"

namespace latdef {

using detail::a2_param;

ExperimentReport run_thm0(int k, double a, const std::vector<double>& alphas, const ExperimentContext& ctx) {
  if (k < 2 || a == 0.0 || alphas.empty())
    throw Error(ErrorKind::InvalidArgument, "thm0 needs k >= 2, a != 0 and at least one alpha");
  for (double al : alphas)
    if (!(al > 0.0)) throw Error(ErrorKind::InvalidArgument, "thm0: alpha must be positive");
  detail::Stopwatch sw;
  ExperimentReport r;
  r.name = "thm0";
  r.parameters = {{"k", k}, {"a", a}, {"alphas", alphas}, {"seed", ctx.seed}};

  std::vector<double> al(alphas);
  std::sort(al.begin(), al.end());
  // Excess thetas carry the whole lattice dependence, which is tiny at small alpha.
  const SumConfig cfg = detail::sums_for(ctx, 1e-300);
  const GridSpec grid = detail::grid_for(ctx, 8.0);
  const Lattice A2 = param_to_lattice(a2_param());
  const Lattice near = param_to_lattice({0.45, 0.92, 1.0});
  const double k2 = static_cast<double>(k) * k;

  auto err = [&](const Lattice& L, double alpha) {
    return theta_excess(L, alpha, cfg).error_bound() + std::abs(a) * theta_excess(L, k2 * alpha, cfg).error_bound();
  };

  std::string csv = "alpha,x,y,shape,best_value,a2_value,gap,margin,ratio\n";
  std::vector<double> detected, ratios;
  bool a2_everywhere = true;
  for (double alpha : al) {
    const Objective obj = gauss_defect_objective(k, a, alpha, cfg);
    const MinimizeResult m = minimize2d(obj, 1.0, grid);
    const double va2 = obj(A2);
    const double margin = 10.0 * (err(A2, alpha) + err(param_to_lattice(m.best_param), alpha));
    const double gap = va2 - m.best_value;
    const double ratio =
        (theta_excess(near, alpha, cfg).value - theta_excess(A2, alpha, cfg).value) /
        (theta_excess(near, k2 * alpha, cfg).value - theta_excess(A2, k2 * alpha, cfg).value);
    ratios.push_back(ratio);
    if (gap > margin) detected.push_back(alpha);
    csv += fmt::format("{:.17g},{:.17g},{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", alpha,
                       m.best_param.x, m.best_param.y, to_string(m.shape), m.best_value, va2, gap, margin, ratio);
    if (a < 0.0) {
      const bool ok = detail::at_a2(m) && gap <= margin;
      a2_everywhere = a2_everywhere && ok;
      r.add(fmt::format("A2 grid-minimal at alpha = {}", alpha), ok, detail::dist_to_a2(m.best_param), 1e-4);
    }
  }
  r.measurements["ratio"] = ratios;

  if (a > 0.0) {
    const double largest = detected.empty() ? 0.0 : detected.back();
    r.measurements["largest_alpha_with_lower_lattice"] = largest;
    r.add("some tested alpha has a lattice strictly below A2 beyond 10x error bounds", !detected.empty(),
          detected.empty() ? 0.0 : detected.front(), 0.0);
    bool shrinking = true;
    for (std::size_t i = 0; i + 1 < ratios.size(); ++i)
      shrinking = shrinking && std::abs(ratios[i]) < std::abs(ratios[i + 1]);
    r.add("ratio statistic decreases with alpha", shrinking, std::abs(ratios.front()), 0.0);
  } else {
    r.measurements["a2_minimal_everywhere"] = a2_everywhere;
  }
  detail::emit(r, ctx, "thm0.csv", csv);
  r.runtime_seconds = sw.seconds();
  finish(r, ctx);
  return r;
}

}  // namespace latdef
