#include "special.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "latdef/error.hpp"

namespace latdef::detail {

namespace {

// Modified Lentz evaluation of the Legendre continued fraction; good for x >= 1.
double upper_gamma_cf(double a, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return std::exp(-x + a * std::log(x)) * h;
}

}  // namespace

double upper_gamma(double a, double x) {
  if (!(x > 0.0) || !std::isfinite(a))
    throw Error(ErrorKind::InvalidArgument, "upper_gamma needs x > 0");
  if (a > 0.0) return boost::math::tgamma(a, x);
  if (x >= 1.0) return upper_gamma_cf(a, x);
  // Downward recurrence Gamma(b-1, x) = (Gamma(b, x) - x^{b-1} e^{-x}) / (b-1)
  // from a start value with b in (0, 1], or b = 0 when a is an integer.
  const double n = std::floor(-a);
  double b, g;
  if (a == -n) {
    b = 0.0;
    g = boost::math::expint(1, x);
  } else {
    b = a + n + 1.0;
    g = boost::math::tgamma(b, x);
  }
  const double ex = std::exp(-x);
  while (b > a + 0.5) {
    g = (g - std::pow(x, b - 1.0) * ex) / (b - 1.0);
    b -= 1.0;
  }
  return g;
}

double gamma_q(double a, double x) { return boost::math::gamma_q(a, x); }

}  // namespace latdef::detail
