#include "latdef/objectives.hpp"

#include <cmath>

#include "latdef/error.hpp"

namespace latdef {

namespace {

Vector center_of(const Lattice& L) {
  return cell_center(L.dim() == 2 ? reduce2d(L) : L);
}

}  // namespace

Objective parse_objective(const std::string& text, const SumConfig& cfg) {
  cfg.validate();
  Tagged t = parse_tagged(text);
  if (t.family == "theta") {
    const double a = t.take({"alpha"})[0];
    return [a, cfg](const Lattice& L) { return theta(L, a, cfg).value; };
  }
  if (t.family == "alt") {
    const double a = t.take({"alpha"})[0];
    return [a, cfg](const Lattice& L) { return theta_alternating(L, a, cfg).value; };
  }
  if (t.family == "centered") {
    const double a = t.take({"alpha"})[0];
    return [a, cfg](const Lattice& L) { return theta_shifted(L, center_of(L), a, cfg).value; };
  }
  if (t.family == "zeta") {
    const double s = t.take({"s"})[0];
    return [s, cfg](const Lattice& L) { return epstein_zeta(L, s, cfg).value; };
  }
  throw Error(ErrorKind::InvalidArgument, "unknown objective '" + t.family + "'");
}

Objective energy_objective(const Potential& f, const DefectSpec& kappa, const SumConfig& cfg) {
  cfg.validate();
  if (kappa.empty()) return [f, cfg](const Lattice& L) { return energy(L, f, cfg).value; };
  return [f, kappa, cfg](const Lattice& L) { return energy_defect(L, f, kappa, cfg).value; };
}

Objective gauss_defect_objective(int k, double a, double alpha, const SumConfig& cfg) {
  if (k < 2 || !(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "gauss-defect needs k >= 2, alpha > 0");
  cfg.validate();
  const double ka = k * k * alpha;
  return [=](const Lattice& L) {
    return theta_excess(L, alpha, cfg).value - a * theta_excess(L, ka, cfg).value;
  };
}

Objective gauss_shifted_objective(double a, double alpha, const SumConfig& cfg) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "gauss-shifted needs alpha > 0");
  cfg.validate();
  const double w = std::abs(a);
  return [=](const Lattice& L) {
    return theta_excess(L, alpha, cfg).value + w * theta_shifted_excess(L, center_of(L), alpha, cfg).value;
  };
}

ObjectiveFamily parse_family(const std::string& text, const SumConfig& cfg) {
  Tagged t = parse_tagged(text);
  if (t.family == "theta") {
    t.take({});
    return [cfg](double alpha) -> Objective {
      return [alpha, cfg](const Lattice& L) { return theta(L, alpha, cfg).value; };
    };
  }
  if (t.family == "gauss-defect") {
    const auto v = t.take({"k", "a"});
    if (v[0] != std::round(v[0])) throw Error(ErrorKind::InvalidArgument, "gauss-defect: k must be an integer");
    const int k = static_cast<int>(v[0]);
    const double a = v[1];
    gauss_defect_objective(k, a, 1.0, cfg);
    return [=](double alpha) { return gauss_defect_objective(k, a, alpha, cfg); };
  }
  if (t.family == "gauss-shifted") {
    const double a = t.take({"a"})[0];
    return [=](double alpha) { return gauss_shifted_objective(a, alpha, cfg); };
  }
  throw Error(ErrorKind::InvalidArgument, "unknown family '" + t.family + "'");
}

Objective at_volume(const Objective& obj, double V) {
  if (!(V > 0.0)) throw Error(ErrorKind::InvalidArgument, "volume must be positive");
  return [obj, V](const Lattice& L) { return obj(scaled(L, std::pow(V / L.volume(), 1.0 / L.dim()))); };
}

ObjectiveFamily volume_family(const Potential& f, const DefectSpec& kappa, const SumConfig& cfg) {
  const Objective base = energy_objective(f, kappa, cfg);
  return [base](double V) { return at_volume(base, V); };
}

}  // namespace latdef
