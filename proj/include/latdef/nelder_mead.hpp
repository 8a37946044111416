#pragma once

#include <functional>
#include <vector>

namespace latdef {

struct NelderMeadOptions {
  double tol = 1e-8;  // stop when the simplex diameter drops below this
  int max_iter = 2000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f starting from x0 with initial edge lengths `step`.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const std::vector<double>& step,
                             const NelderMeadOptions& opt = {});

}  // namespace latdef
