#include <algorithm>
#include <cmath>

#include "experiments/common.hpp"
#include "latdef/objectives.hpp"

namespace latdef {

void check_shift_condition(const DefectSpec& spec) {
  if (spec.empty()) throw Error(ErrorKind::ShiftConditionViolated, "empty defect spec");
  for (const auto& e : spec.entries()) {
    if (e.shifts.empty())
      throw Error(ErrorKind::ShiftConditionViolated, fmt::format("k = {} has no shift", e.k));
    if (e.k % 2 != 0)
      throw Error(ErrorKind::ShiftConditionViolated, fmt::format("k = {} is odd; k/2 is not an integer", e.k));
    for (const auto& m : e.shifts)
      for (auto mi : m) {
        const std::int64_t r = ((mi % e.k) + e.k) % e.k;
        if (r != e.k / 2)
          throw Error(ErrorKind::ShiftConditionViolated,
                      fmt::format("k = {}: coordinate {} is not k/2 modulo k", e.k, mi));
      }
  }
}

namespace {

// Sum over q in L + c of f(k^2 |q|^2).
double dilated_shifted(const Lattice& L, const Vector& c, const Potential& f, int k, const SumConfig& cfg) {
  const double k2 = static_cast<double>(k) * k;
  if (const auto* g = std::get_if<Gaussian>(&f.variant()))
    return energy_shifted(L, c, Gaussian{g->alpha * k2}, cfg).value;
  if (const auto* p = std::get_if<InversePower>(&f.variant()))
    return std::pow(k2, -p->s) * energy_shifted(L, c, f, cfg).value;
  if (const auto* lj = std::get_if<LennardJones>(&f.variant()))
    return energy_shifted(L, c,
                          LennardJones{lj->c1 * std::pow(k2, -lj->x1), lj->c2 * std::pow(k2, -lj->x2), lj->x1,
                                       lj->x2},
                          cfg)
        .value;
  throw Error(ErrorKind::InvalidArgument, "no dilation rule for " + f.describe());
}

}  // namespace

ExperimentReport run_thm02(const DefectSpec& spec, int n_random, const ExperimentContext& ctx) {
  spec.check_dimension(2);
  check_shift_condition(spec);
  if (n_random < 1) throw Error(ErrorKind::InvalidArgument, "thm02 needs n_random >= 1");
  detail::Stopwatch sw;
  ExperimentReport r;
  r.name = "thm02";
  r.parameters = {{"spec", spec.to_json()}, {"n_random", n_random}, {"seed", ctx.seed}};

  const SumConfig cfg = detail::sums_for(ctx, 1e-14);
  const std::vector<Potential> fs{Gaussian{0.5}, Gaussian{1.0}, Gaussian{2.0}, InversePower{2.0}};

  std::mt19937_64 rng(ctx.seed);
  double worst = 0.0;
  std::string csv = "potential,x,y,defect_energy,decomposition,residual\n";
  for (int i = 0; i < n_random; ++i) {
    const Param2D p = detail::random_param(rng);
    const Lattice L = reduce2d(param_to_lattice(p));
    const Vector c = cell_center(L);
    for (const auto& f : fs) {
      const double lhs = energy_defect(L, f, spec, cfg).value;
      const double ef = energy(L, f, cfg).value;
      double rhs = ef;
      for (const auto& e : spec.entries())
        rhs -= e.a * static_cast<double>(e.shifts.size()) * dilated_shifted(L, c, f, e.k, cfg);
      const double res = std::abs(lhs - rhs) / std::max(1.0, std::abs(ef));
      worst = std::max(worst, res);
      csv += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.3e}\n", f.describe(), p.x, p.y, lhs, rhs, res);
    }
  }
  r.add("decomposition identity on random lattices", worst <= 1e-11, worst, 1e-11);

  const GridSpec grid = detail::grid_for(ctx);
  for (const auto& f : fs) {
    const MinimizeResult m = minimize2d(energy_objective(f, spec, cfg), 1.0, grid);
    r.add("A2 grid-minimal for " + f.describe(), detail::at_a2(m), detail::dist_to_a2(m.best_param), 1e-4);
  }
  detail::emit(r, ctx, "thm02.csv", csv);
  r.runtime_seconds = sw.seconds();
  finish(r, ctx);
  return r;
}

}  // namespace latdef
