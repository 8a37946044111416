#pragma once

#include <string>

#include "latdef/optimize.hpp"
#include "latdef/potential.hpp"
#include "latdef/sums.hpp"

namespace latdef {

/// Objectives by name:
///   theta:alpha=A     theta_L(A)
///   alt:alpha=A       alternating theta in the reduced basis
///   centered:alpha=A  theta_{L + c_L}(A)
///   zeta:s=S          sum over p != 0 of |p|^{-S}
Objective parse_objective(const std::string& text, const SumConfig& cfg = {});

/// E_f[L], or E_f^kappa[L] when kappa is non-empty.
Objective energy_objective(const Potential& f, const DefectSpec& kappa, const SumConfig& cfg = {});

/// sum over p != 0 of exp(-pi alpha |p|^2) - a exp(-pi alpha k^2 |p|^2) minus its
/// lattice-independent part V^{-1} alpha^{-d/2} (1 - a k^{-d}) - (1 - a).
Objective gauss_defect_objective(int k, double a, double alpha, const SumConfig& cfg = {});

/// theta_L(alpha) + |a| theta_{L + c_L}(alpha) minus (1 + |a|) V^{-1} alpha^{-d/2}.
Objective gauss_shifted_objective(double a, double alpha, const SumConfig& cfg = {});

/// Families over alpha:
///   theta
///   gauss-defect:k=K,a=A
///   gauss-shifted:a=A
ObjectiveFamily parse_family(const std::string& text, const SumConfig& cfg = {});

/// Control is the cell volume: L -> sqrt(c) L for unit-volume L (d = 2).
ObjectiveFamily volume_family(const Potential& f, const DefectSpec& kappa, const SumConfig& cfg = {});

/// Energy of a scaled copy; fixes the volume of the scan.
Objective at_volume(const Objective& obj, double V);

}  // namespace latdef
