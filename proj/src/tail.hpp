#pragma once

// Integral-comparison bounds for radial lattice sums.
//
// For g decreasing and a (possibly shifted) lattice with covolume V whose cell
// fits in a ball of radius rho around each point:
//   sum_{|p|>R} g(|p|) <= (c_d/V) int_{R-2rho}^inf (u+rho)^{d-1} g(u) du
//   sum_{|p|>R} g(|p|) >= (c_d/V) int_{R+2rho}^inf (u-rho)^{d-1} g(u) du

#include <cstdint>
#include <functional>

namespace latdef::detail {

struct Geometry {
  int d = 2;
  double volume = 1.0;
  double rho = 0.5;
};

double sphere_area(int d);
double ball_volume(int d);

/// int_a^inf (u+sh)^{d-1} exp(-beta u^2) du, a >= 0, a + sh >= 0.
double gauss_shell(int d, double sh, double a, double beta);

/// int_a^inf (u+sh)^{d-1} u^{-two_s} du, a > 0, two_s > d.
double power_shell(int d, double sh, double a, double two_s);

double gauss_tail_upper(const Geometry& g, double R, double beta);
double power_tail_upper(const Geometry& g, double R, double two_s);
double power_tail_lower(const Geometry& g, double R, double two_s);

/// Largest radius whose ball provably holds at most max_points points.
double radius_cap(const Geometry& g, std::int64_t max_points);

struct RadiusChoice {
  double R = 0.0;
  double bound = 0.0;
  bool capped = false;
};

/// Smallest R >= 2 rho (to bisection accuracy) with bound(R) <= tol, where
/// bound is nonincreasing; stops at the point-cap radius.
RadiusChoice choose_radius(const Geometry& g, double tol, std::int64_t max_points,
                           const std::function<double(double)>& bound);

}  // namespace latdef::detail
