#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latdef/lattice.hpp"

namespace latdef {

using Objective = std::function<double(const Lattice&)>;

enum class Sense { Min, Max };

struct GridSpec {
  int n_x = 64;
  int n_y = 64;
  double y_min = 0.99 * 0.8660254037844386;
  double y_max = 4.0;  // objectives are evaluated with y capped here
  bool refine = true;
  double nm_tol = 1e-8;
  int nm_max_iter = 2000;
  int workers = 1;

  void validate() const;
};

struct MinimizeResult {
  Param2D best_param;
  double best_value = 0.0;
  ShapeClass shape = ShapeClass::Generic;
  double runner_up_gap = 0.0;  // to the best grid point not equivalent to the optimum
  bool certified = false;      // refinement converged
  bool unbounded = false;      // optimum sits at the y cap with monotone improvement towards it
  Param2D grid_param;
  double grid_value = 0.0;
  int evaluations = 0;
};

/// Grid search over the fundamental domain plus Nelder-Mead polish.
MinimizeResult minimize2d(const Objective& objective, double V, const GridSpec& grid = {},
                          Sense sense = Sense::Min,
                          std::optional<Param2D> warm_start = std::nullopt);

struct OrthoResult {
  std::vector<double> sides;        // diagonal entries, product = V
  std::vector<double> log_aspects;  // log(t_i / V^{1/d})
  double best_value = 0.0;
  double runner_up_gap = 0.0;
  bool is_cubic = false;
  bool certified = false;
};

struct OrthoGrid {
  int n = 64;
  double max_log_aspect = 1.3862943611198906;  // ln 4
  bool refine = true;
  double nm_tol = 1e-8;
  int workers = 1;
};

/// Orthorhombic lattices diag(t_1..t_d) with prod t_i = V, d in {2, 3}.
OrthoResult minimize_orthorhombic(const Objective& objective, int d, double V,
                                  const OrthoGrid& grid = {}, Sense sense = Sense::Min);

struct PhaseScanRow {
  double control = 0.0;
  Param2D best_param;
  ShapeClass shape = ShapeClass::Generic;
  double value = 0.0;
  bool unbounded = false;
  bool ok = true;
  std::string error;
};

using ObjectiveFamily = std::function<Objective(double control)>;

struct PhaseScanOptions {
  bool warm_start = true;
  int boundary_bisections = 0;  // extra rows inserted between rows of different shape
};

std::vector<PhaseScanRow> phase_scan(const ObjectiveFamily& family, const std::vector<double>& controls,
                                     double V, const GridSpec& grid = {}, Sense sense = Sense::Min,
                                     const PhaseScanOptions& opt = {});

/// Consecutive distinct shapes of successful rows.
std::vector<ShapeClass> shape_sequence(const std::vector<PhaseScanRow>& rows);

struct HessianResult {
  Eigen::Vector2d grad;
  Eigen::Matrix2d hess;
  Eigen::Vector2d eigenvalues;
  double fd_error = 0.0;  // Richardson disagreement plus rounding estimate
  bool positive_definite = false;
};

/// Central differences in (x, y) with Richardson refinement at h/2. The
/// objective is modular invariant, so the stencil may leave the domain.
HessianResult hessian_check(const Objective& objective, const Param2D& p, double h = 1e-3);

}  // namespace latdef
