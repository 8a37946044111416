#pragma once

namespace latdef::detail {

/// Upper incomplete gamma Gamma(a, x) for any real a and x > 0.
double upper_gamma(double a, double x);

/// Regularized Q(a, x) = Gamma(a, x) / Gamma(a), a > 0.
double gamma_q(double a, double x);

}  // namespace latdef::detail
