#include <algorithm>
#include <sstream>

#include "experiments/common.hpp"
#include "latdef/objectives.hpp"

namespace latdef {

ExperimentReport run_phase(const std::vector<double>& alphas, double a, const ExperimentContext& ctx) {
  if (alphas.size() < 2 || !(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "phase needs alphas and a > 0");
  detail::Stopwatch sw;
  ExperimentReport r;
  r.name = "phase";
  r.parameters = {{"alphas", alphas}, {"a", a}, {"seed", ctx.seed}};

  const SumConfig cfg = detail::sums_for(ctx, 1e-300);
  const GridSpec grid = detail::grid_for(ctx, 8.0);
  PhaseScanOptions opt;
  opt.boundary_bisections = 8;
  const std::vector<ShapeClass> expected{ShapeClass::Triangular, ShapeClass::Rhombic, ShapeClass::Square,
                                         ShapeClass::Rectangular};
  auto names = [](const std::vector<ShapeClass>& seq) {
    std::vector<std::string> out;
    for (auto s : seq) out.push_back(to_string(s));
    return out;
  };

  struct Family {
    const char* tag;
    ObjectiveFamily fam;
  };
  const std::vector<Family> families{
      {"defect", [&](double al) { return gauss_defect_objective(2, a, al, cfg); }},
      {"shifted", [&](double al) { return gauss_shifted_objective(-a, al, cfg); }}};
  for (const auto& fm : families) {
    const auto rows = phase_scan(fm.fam, alphas, 1.0, grid, Sense::Min, opt);
    const auto seq = shape_sequence(rows);
    r.measurements[std::string(fm.tag) + "_sequence"] = names(seq);
    std::vector<double> bounds;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
      if (rows[i].ok && rows[i + 1].ok && rows[i].shape != rows[i + 1].shape)
        bounds.push_back(std::sqrt(rows[i].control * rows[i + 1].control));
    r.measurements[std::string(fm.tag) + "_boundaries"] = bounds;
    const bool failed = std::any_of(rows.begin(), rows.end(), [](const PhaseScanRow& x) { return !x.ok; });
    r.add(std::string(fm.tag) + " family: shape sequence is Triangular, Rhombic, Square, Rectangular",
          seq == expected && !failed, static_cast<double>(seq.size()), static_cast<double>(expected.size()));
    std::ostringstream csv, svg;
    write_csv(csv, rows);
    write_phase_svg(svg, rows, "alpha");
    detail::emit(r, ctx, std::string("phase_") + fm.tag + ".csv", csv.str());
    detail::emit(r, ctx, std::string("phase_") + fm.tag + ".svg", svg.str());
  }
  r.runtime_seconds = sw.seconds();
  finish(r, ctx);
  return r;
}

}  // namespace latdef
