#include "tail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace latdef::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
}  // namespace

double sphere_area(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

double ball_volume(int d) { return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

double gauss_shell(int d, double sh, double a, double beta) {
  double sum = 0.0;
  const double x = beta * a * a;
  for (int i = 0; i < d; ++i) {
    const double c = boost::math::binomial_coefficient<double>(d - 1, i) * std::pow(sh, d - 1 - i);
    if (c == 0.0) continue;
    const double h = 0.5 * (i + 1);
    const double m = x > 0.0 ? boost::math::tgamma(h, x) : std::tgamma(h);
    sum += c * 0.5 * std::pow(beta, -h) * m;
  }
  return sum;
}

double power_shell(int d, double sh, double a, double two_s) {
  double sum = 0.0;
  for (int i = 0; i < d; ++i) {
    const double c = boost::math::binomial_coefficient<double>(d - 1, i) * std::pow(sh, d - 1 - i);
    if (c == 0.0) continue;
    const double e = two_s - i - 1.0;
    sum += c * std::pow(a, -e) / e;
  }
  return sum;
}

double gauss_tail_upper(const Geometry& g, double R, double beta) {
  const double a = R - 2.0 * g.rho;
  if (a < 0.0) return kInf;
  return sphere_area(g.d) / g.volume * gauss_shell(g.d, g.rho, a, beta);
}

double power_tail_upper(const Geometry& g, double R, double two_s) {
  const double a = R - 2.0 * g.rho;
  if (!(a > 0.0)) return kInf;
  return sphere_area(g.d) / g.volume * power_shell(g.d, g.rho, a, two_s);
}

double power_tail_lower(const Geometry& g, double R, double two_s) {
  return sphere_area(g.d) / g.volume * power_shell(g.d, -g.rho, R + 2.0 * g.rho, two_s);
}

double radius_cap(const Geometry& g, std::int64_t max_points) {
  return std::pow(static_cast<double>(max_points) * g.volume / ball_volume(g.d), 1.0 / g.d) - g.rho;
}

RadiusChoice choose_radius(const Geometry& g, double tol, std::int64_t max_points,
                           const std::function<double(double)>& bound) {
  const double cap = radius_cap(g, max_points);
  double lo = 2.0 * g.rho;
  if (cap <= lo) return {cap, kInf, true};
  double blo = bound(lo);
  if (blo <= tol) return {lo, blo, false};
  double step = std::max(g.rho, 1e-3);
  double hi = lo + step;
  double bhi = bound(hi);
  while (bhi > tol) {
    if (hi >= cap) {
      return {cap, bound(cap), true};
    }
    lo = hi;
    step *= 2.0;
    hi = std::min(lo + step, cap);
    bhi = bound(hi);
  }
  for (int it = 0; it < 60 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double bm = bound(mid);
    if (bm <= tol) {
      hi = mid;
      bhi = bm;
    } else {
      lo = mid;
    }
  }
  return {hi, bhi, false};
}

}  // namespace latdef::detail
