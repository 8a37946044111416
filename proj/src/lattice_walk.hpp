#pragma once

// Allocation-free enumeration of lattice points in a ball.

#include <array>
#include <cmath>
#include <cstdint>

#include "latdef/lattice.hpp"

namespace latdef::detail {

inline constexpr int kMaxDim = 8;

struct WalkState {
  int d = 0;
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};
};

// Calls visit(m, pos, r2) for every m with |B m + c| <= R, lexicographic in m.
// The last coordinate range is solved exactly; outer ones come from the
// operator-norm box. Returns false if visit asked to stop.
template <class Visit>
bool walk_ball(const Lattice& L, const Vector& c, double R, Visit&& visit) {
  const int d = L.dim();
  if (d < 1 || d > kMaxDim)
    throw Error(ErrorKind::InvalidArgument, "dimension outside supported range 1..8");
  if (!(R >= 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be nonnegative");
  const Matrix& B = L.basis();
  const Matrix& Binv = L.inverse();
  const double R2 = R * R;

  std::array<std::int64_t, kMaxDim> lo{}, hi{}, m{};
  for (int i = 0; i < d; ++i) {
    double w = -Binv.row(i).dot(c);
    double ext = R * Binv.row(i).norm();
    lo[i] = static_cast<std::int64_t>(std::floor(w - ext));
    hi[i] = static_cast<std::int64_t>(std::ceil(w + ext));
  }
  std::array<double, kMaxDim> v{}, pos{};
  const int last = d - 1;
  const double a = B.col(last).squaredNorm();

  for (int i = 0; i < last; ++i) m[i] = lo[i];
  while (true) {
    for (int j = 0; j < d; ++j) {
      double s = c[j];
      for (int i = 0; i < last; ++i) s += B(j, i) * static_cast<double>(m[i]);
      v[j] = s;
    }
    double vv = 0.0, vb = 0.0;
    for (int j = 0; j < d; ++j) {
      vv += v[j] * v[j];
      vb += v[j] * B(j, last);
    }
    double disc = vb * vb - a * (vv - R2);
    if (disc >= 0.0) {
      double sq = std::sqrt(disc);
      auto t0 = static_cast<std::int64_t>(std::floor((-vb - sq) / a));
      auto t1 = static_cast<std::int64_t>(std::ceil((-vb + sq) / a));
      for (std::int64_t t = t0; t <= t1; ++t) {
        double r2 = 0.0;
        const double td = static_cast<double>(t);
        for (int j = 0; j < d; ++j) {
          pos[j] = v[j] + B(j, last) * td;
          r2 += pos[j] * pos[j];
        }
        if (r2 <= R2) {
          m[last] = t;
          if (!visit(m.data(), pos.data(), r2)) return false;
        }
      }
    }
    int i = last - 1;
    while (i >= 0) {
      if (m[i] < hi[i]) {
        ++m[i];
        break;
      }
      m[i] = lo[i];
      --i;
    }
    if (i < 0) break;
  }
  return true;
}

}  // namespace latdef::detail
