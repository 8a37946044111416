#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "latdef/lattice.hpp"
#include "latdef/potential.hpp"

namespace latdef {

enum class ZetaMode { Direct, MellinAccelerated };
enum class ThetaMode { Auto, Direct, Dual };

struct SumConfig {
  double tol = 1e-10;  // absolute truncation error target
  std::int64_t max_points = 10'000'000;
  ZetaMode zeta_mode = ZetaMode::MellinAccelerated;
  ThetaMode theta_mode = ThetaMode::Auto;

  void validate() const;
};

struct EnergyValue {
  double value = 0.0;
  double tail_bound = 0.0;      // certified bound on the truncation error
  double rounding_bound = 0.0;  // a-priori bound on floating-point summation error
  double cutoff_radius = 0.0;
  std::int64_t points_used = 0;
  bool capped = false;  // point cap reached before tol

  double error_bound() const noexcept { return tail_bound + rounding_bound; }
};

/// E_f[L] = sum over p != 0 of f(|p|^2).
EnergyValue energy(const Lattice& L, const Potential& f, const SumConfig& cfg = {});

/// sum over p in L with p + c != 0 of f(|p + c|^2).
EnergyValue energy_shifted(const Lattice& L, const Vector& c, const Potential& f,
                           const SumConfig& cfg = {});

/// theta_L(alpha), p = 0 included.
EnergyValue theta(const Lattice& L, double alpha, const SumConfig& cfg = {});

/// theta_L(alpha) - 1/(V alpha^{d/2}); accurate when alpha is small.
EnergyValue theta_excess(const Lattice& L, double alpha, const SumConfig& cfg = {});

EnergyValue theta_shifted(const Lattice& L, const Vector& c, double alpha,
                          const SumConfig& cfg = {});

EnergyValue theta_shifted_excess(const Lattice& L, const Vector& c, double alpha,
                                 const SumConfig& cfg = {});

/// sum of (-1)^{m_1+...+m_d} exp(-pi alpha |p|^2) in the given (reduced) basis.
EnergyValue theta_alternating(const Lattice& L, double alpha, const SumConfig& cfg = {});

/// zeta_L(two_s) = sum over p != 0 of |p|^{-two_s}.
EnergyValue epstein_zeta(const Lattice& L, double two_s, const SumConfig& cfg = {});

/// sum over p in L with p + c != 0 of |p + c|^{-two_s}.
EnergyValue epstein_zeta_shifted(const Lattice& L, const Vector& c, double two_s,
                                 const SumConfig& cfg = {});

/// E_f^kappa[L]. In d = 2 the basis is reduced first; shifts refer to it.
EnergyValue energy_defect(const Lattice& L, const Potential& f, const DefectSpec& spec,
                          const SumConfig& cfg = {});

struct ChargedPoint {
  Vector position;
  double charge = 1.0;
};

struct ChargedPointSet {
  std::vector<ChargedPoint> points;
  Lattice lattice;  // basis the charges refer to
  DefectSpec spec;
  double radius = 0.0;
};

/// Charge of the lattice point with the given integer coordinates.
double defect_charge(const DefectSpec& spec, const std::int64_t* coords, int d);

ChargedPointSet materialize(const Lattice& L, const DefectSpec& spec, double radius,
                            std::int64_t max_points = 10'000'000);

/// sum of charge * f(|p|^2), skipping the origin.
double energy_pointset(const ChargedPointSet& ps, const Potential& f);

/// Bound on the part of E_f^kappa carried by points beyond ps.radius.
double pointset_tail_bound(const ChargedPointSet& ps, const Potential& f);

void write_csv(std::ostream& os, const ChargedPointSet& ps);
/// Filled disks for positive charge, open circles for negative, cross at the origin.
void write_svg(std::ostream& os, const ChargedPointSet& ps);

}  // namespace latdef
