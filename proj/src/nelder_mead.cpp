#include "latdef/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "latdef/error.hpp"

namespace latdef {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const std::vector<double>& step,
                             const NelderMeadOptions& opt) {
  const std::size_t n = x0.size();
  if (n == 0 || step.size() != n) throw Error(ErrorKind::InvalidArgument, "nelder_mead: bad dimensions");
  NelderMeadResult res;
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  for (std::size_t i = 0; i <= n; ++i) val[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  auto diameter = [&]() {
    double d = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j) d = std::max(d, std::abs(pts[i][j] - pts[0][j]));
    return d;
  };
  auto combine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = a[j] + t * (b[j] - a[j]);
    return out;
  };

  for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    {
      std::vector<std::vector<double>> p2(n + 1);
      std::vector<double> v2(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        p2[i] = pts[order[i]];
        v2[i] = val[order[i]];
      }
      pts.swap(p2);
      val.swap(v2);
    }
    if (diameter() < opt.tol) {
      res.converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / static_cast<double>(n);

    const auto xr = combine(centroid, pts[n], -1.0);
    const double fr = eval(xr);
    if (fr < val[0]) {
      const auto xe = combine(centroid, pts[n], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[n] = xe;
        val[n] = fe;
      } else {
        pts[n] = xr;
        val[n] = fr;
      }
    } else if (fr < val[n - 1]) {
      pts[n] = xr;
      val[n] = fr;
    } else {
      const bool outside = fr < val[n];
      const auto xc = outside ? combine(centroid, xr, 0.5) : combine(centroid, pts[n], 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : val[n])) {
        pts[n] = xc;
        val[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          pts[i] = combine(pts[0], pts[i], 0.5);
          val[i] = eval(pts[i]);
        }
      }
    }
  }
  const auto best = std::min_element(val.begin(), val.end()) - val.begin();
  res.x = pts[best];
  res.value = val[best];
  return res;
}

}  // namespace latdef
