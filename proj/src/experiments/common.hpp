#pragma once

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "latdef/experiments.hpp"
#include "latdef/io.hpp"

namespace latdef::detail {

inline const double kSqrt3_2 = std::sqrt(3.0) / 2.0;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline Param2D a2_param(double V = 1.0) { return {0.5, kSqrt3_2, V}; }

inline double dist_to_a2(const Param2D& p) { return std::hypot(p.x - 0.5, p.y - kSqrt3_2); }

inline bool at_a2(const MinimizeResult& m, double tol = 1e-4) {
  return m.shape == ShapeClass::Triangular && dist_to_a2(m.best_param) <= tol;
}

inline Param2D random_param(std::mt19937_64& rng, double V = 1.0) {
  std::uniform_real_distribution<double> ux(0.0, 0.5);
  Param2D p;
  p.x = ux(rng);
  std::uniform_real_distribution<double> uy(std::sqrt(1.0 - p.x * p.x), 4.0);
  p.y = uy(rng);
  p.V = V;
  return p;
}

inline GridSpec grid_for(const ExperimentContext& ctx, double y_max = 0.0) {
  GridSpec g = ctx.grid;
  g.workers = ctx.workers;
  if (y_max > 0.0) g.y_max = std::max(g.y_max, y_max);
  return g;
}

inline SumConfig sums_for(const ExperimentContext& ctx, double tol = 0.0) {
  SumConfig c;
  c.tol = tol > 0.0 ? tol : ctx.tol;
  return c;
}

inline void emit(ExperimentReport& r, const ExperimentContext& ctx, const std::string& name,
                 const std::string& text) {
  if (ctx.out_dir.empty()) return;
  const std::string path = ctx.out_dir + "/" + name;
  write_file(path, text);
  r.artifacts.push_back(path);
}

template <class T>
std::string render(const T& x, void (*fn)(std::ostream&, const T&)) {
  std::ostringstream os;
  fn(os, x);
  return os.str();
}

}  // namespace latdef::detail
