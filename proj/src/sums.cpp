#include "latdef/sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "lattice_walk.hpp"
#include "special.hpp"
#include "tail.hpp"

namespace latdef {

namespace {

using detail::Geometry;
constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Term {
  double r2;
  double v;
};

struct Partial {
  double value = 0.0;
  double abs_sum = 0.0;
  std::int64_t n = 0;
};

// Largest |p| first, ties in enumeration order, Neumaier accumulation.
Partial compensated(std::vector<Term>& terms) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.r2 > b.r2; });
  double s = 0.0, comp = 0.0, abs = 0.0;
  for (const Term& t : terms) {
    const double x = t.v;
    const double u = s + x;
    if (std::abs(s) >= std::abs(x)) comp += (s - u) + x;
    else comp += (x - u) + s;
    s = u;
    abs += std::abs(x);
  }
  return {s + comp, abs, static_cast<std::int64_t>(terms.size())};
}

double neumaier(std::initializer_list<double> xs) {
  double s = 0.0, comp = 0.0;
  for (double x : xs) {
    const double u = s + x;
    if (std::abs(s) >= std::abs(x)) comp += (s - u) + x;
    else comp += (x - u) + s;
    s = u;
  }
  return s + comp;
}

double min_basis_norm(const Lattice& L) {
  double m = kInf;
  for (int i = 0; i < L.dim(); ++i) m = std::min(m, L.basis().col(i).norm());
  return m;
}

Geometry geometry(const Lattice& L) { return {L.dim(), L.volume(), L.cell_radius()}; }

Lattice work_lattice(const Lattice& L) { return L.dim() == 2 ? reduce2d(L) : L; }

struct ShiftInfo {
  Vector c;
  bool in_lattice = false;
};

// Representative of c modulo L near the origin.
ShiftInfo reduce_shift(const Lattice& L, const Vector& c) {
  if (c.size() != L.dim()) throw Error(ErrorKind::InvalidArgument, "shift has wrong dimension");
  if (!c.allFinite()) throw Error(ErrorKind::InvalidArgument, "shift has non-finite entries");
  Vector w = L.inverse() * c;
  for (int i = 0; i < w.size(); ++i) w[i] -= std::round(w[i]);
  Vector r = L.basis() * w;
  if (r.norm() <= 1e-12 * min_basis_norm(L)) return {Vector::Zero(L.dim()), true};
  return {r, false};
}

template <class F>
Partial sum_ball(const Lattice& L, const Vector& c, double R, bool skip_origin, F&& term) {
  std::vector<Term> terms;
  const double eps = 1e-12 * min_basis_norm(L);
  const double eps2 = eps * eps;
  detail::walk_ball(L, c, R, [&](const std::int64_t* m, const double* pos, double r2) {
    if (skip_origin && r2 <= eps2) return true;
    terms.push_back({r2, term(m, pos, r2)});
    return true;
  });
  return compensated(terms);
}

double rounding(double abs_sum, double value) { return 4.0 * kEps * abs_sum + 2.0 * kEps * std::abs(value); }

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw Error(ErrorKind::InvalidArgument, "alpha must be positive and finite");
}

bool use_dual(ThetaMode mode, double alpha, const Lattice& L) {
  if (mode == ThetaMode::Direct) return false;
  if (mode == ThetaMode::Dual) return true;
  return alpha < std::pow(L.volume(), -2.0 / L.dim());
}

EnergyValue theta_core(const Lattice& L0, const Vector& c0, double alpha, const SumConfig& cfg,
                       bool excess) {
  cfg.validate();
  check_alpha(alpha);
  const Lattice L = work_lattice(L0);
  const ShiftInfo sh = reduce_shift(L, c0);
  const int d = L.dim();
  const double bg = 1.0 / (L.volume() * std::pow(alpha, 0.5 * d));
  EnergyValue out;
  if (!use_dual(cfg.theta_mode, alpha, L)) {
    const Geometry g = geometry(L);
    const double beta = kPi * alpha;
    const auto rc = detail::choose_radius(
        g, cfg.tol, cfg.max_points, [&](double R) { return detail::gauss_tail_upper(g, R, beta); });
    const Partial p = sum_ball(L, sh.c, rc.R, false,
                               [&](const std::int64_t*, const double*, double r2) {
                                 return std::exp(-beta * r2);
                               });
    out.value = excess ? p.value - bg : p.value;
    out.tail_bound = rc.bound;
    out.rounding_bound = rounding(p.abs_sum + (excess ? bg : 0.0), out.value);
    out.cutoff_radius = rc.R;
    out.points_used = p.n;
    out.capped = rc.capped;
    return out;
  }
  const Lattice Ld = work_lattice(dual(L));
  const Geometry g = geometry(Ld);
  const double beta = kPi / alpha;
  const auto rc = detail::choose_radius(
      g, cfg.tol / bg, cfg.max_points, [&](double R) { return detail::gauss_tail_upper(g, R, beta); });
  const bool shifted = !sh.in_lattice;
  const Partial p = sum_ball(Ld, Vector::Zero(d), rc.R, excess,
                             [&](const std::int64_t*, const double* q, double r2) {
                               double w = std::exp(-beta * r2);
                               if (shifted) {
                                 double qc = 0.0;
                                 for (int i = 0; i < d; ++i) qc += q[i] * sh.c[i];
                                 w *= std::cos(2.0 * kPi * qc);
                               }
                               return w;
                             });
  out.value = bg * p.value;
  out.tail_bound = bg * rc.bound;
  out.rounding_bound = rounding(bg * p.abs_sum, out.value);
  out.cutoff_radius = rc.R;
  out.points_used = p.n;
  out.capped = rc.capped;
  return out;
}

EnergyValue zeta_core(const Lattice& L0, const Vector& c0, double two_s, const SumConfig& cfg) {
  cfg.validate();
  const int d = L0.dim();
  if (!(two_s > d) || !std::isfinite(two_s))
    throw Error(ErrorKind::InvalidArgument, fmt::format("zeta needs two_s > d = {}", d));
  if (cfg.zeta_mode == ZetaMode::MellinAccelerated && std::abs(L0.volume() - 1.0) > 1e-9) {
    // Work at unit volume so both halves of the split stay balanced.
    const double t = std::pow(L0.volume(), -1.0 / d);
    const double back = std::pow(t, two_s);
    SumConfig c1 = cfg;
    c1.tol = cfg.tol / back;
    EnergyValue v = zeta_core(scaled(L0, t), t * c0, two_s, c1);
    v.value *= back;
    v.tail_bound *= back;
    v.rounding_bound *= back;
    v.cutoff_radius /= t;
    return v;
  }
  const Lattice L = work_lattice(L0);
  const ShiftInfo sh = reduce_shift(L, c0);
  const double s = 0.5 * two_s;
  const Geometry g = geometry(L);
  EnergyValue out;

  if (cfg.zeta_mode == ZetaMode::Direct) {
    auto half = [&](double R) {
      return 0.5 * (detail::power_tail_upper(g, R, two_s) - detail::power_tail_lower(g, R, two_s));
    };
    const auto rc = detail::choose_radius(g, cfg.tol, cfg.max_points, half);
    const Partial p = sum_ball(L, sh.c, rc.R, true,
                               [&](const std::int64_t*, const double*, double r2) {
                                 return std::pow(r2, -s);
                               });
    const double up = detail::power_tail_upper(g, rc.R, two_s);
    const double lo = detail::power_tail_lower(g, rc.R, two_s);
    out.value = p.value + 0.5 * (up + lo);
    out.tail_bound = rc.bound;
    out.rounding_bound = rounding(p.abs_sum + up, out.value);
    out.cutoff_radius = rc.R;
    out.points_used = p.n;
    out.capped = rc.capped;
    return out;
  }

  // Mellin split of the theta integral at t = 1 (unit volume here).
  const double gs = std::tgamma(s);
  const double pre = std::pow(kPi, s) / gs;
  const double V = L.volume();
  const double maj = std::pow(kPi, s - 1.0) / gs;

  auto direct_bound = [&](double R) {
    const double a = R - 2.0 * g.rho;
    if (!(a > 0.0)) return kInf;
    const double x = kPi * a * a;
    double c = 1.0;
    if (s > 1.0) {
      if (x <= s - 1.0) return kInf;
      c = std::max(1.0, x / (x - (s - 1.0)));
    }
    return detail::sphere_area(d) / V * maj * c / (a * a) * detail::gauss_shell(d, g.rho, a, kPi);
  };
  const auto rc1 = detail::choose_radius(g, 0.5 * cfg.tol, cfg.max_points, direct_bound);
  const Partial p1 = sum_ball(L, sh.c, rc1.R, true,
                              [&](const std::int64_t*, const double*, double r2) {
                                return std::pow(r2, -s) * detail::gamma_q(s, kPi * r2);
                              });

  const Lattice Ld = work_lattice(dual(L));
  const Geometry gd = geometry(Ld);
  auto dual_bound = [&](double R) {
    const double a = R - 2.0 * gd.rho;
    if (!(a > 0.0)) return kInf;
    return detail::sphere_area(d) * maj / (a * a) * detail::gauss_shell(d, gd.rho, a, kPi);
  };
  const auto rc2 = detail::choose_radius(gd, 0.5 * cfg.tol, cfg.max_points, dual_bound);
  const bool shifted = !sh.in_lattice;
  const double ad = 0.5 * d - s;
  const Partial p2 = sum_ball(Ld, Vector::Zero(d), rc2.R, true,
                              [&](const std::int64_t*, const double* q, double r2) {
                                const double x = kPi * r2;
                                double w = std::pow(x, -ad) * detail::upper_gamma(ad, x);
                                if (shifted) {
                                  double qc = 0.0;
                                  for (int i = 0; i < d; ++i) qc += q[i] * sh.c[i];
                                  w *= std::cos(2.0 * kPi * qc);
                                }
                                return w;
                              });
  const double constant = pre * (1.0 / (V * (s - 0.5 * d)) - (sh.in_lattice ? 1.0 / s : 0.0));
  out.value = neumaier({p1.value, pre / V * p2.value, constant});
  out.tail_bound = rc1.bound + rc2.bound;
  out.rounding_bound =
      rounding(p1.abs_sum + pre / V * p2.abs_sum + pre * (1.0 / (V * (s - 0.5 * d)) + 1.0 / s),
               out.value);
  out.cutoff_radius = rc1.R;
  out.points_used = p1.n + p2.n;
  out.capped = rc1.capped || rc2.capped;
  return out;
}

// f as sum of coef * g(lambda r) with g a Gaussian, power or Yukawa kernel.
struct Component {
  enum class Kind { Gauss, Power, Yukawa } kind;
  double coef = 1.0;
  double lambda = 1.0;
  double alpha = 0.0;  // Gauss
  double sigma = 0.0;  // Yukawa
  double s = 0.0;      // Power, Yukawa
};

void decompose(const Potential& f, double coef, double lambda, std::vector<Component>& out) {
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        using K = Component::Kind;
        if constexpr (std::is_same_v<T, Gaussian>) {
          out.push_back({K::Gauss, coef, lambda, p.alpha, 0.0, 0.0});
        } else if constexpr (std::is_same_v<T, InversePower>) {
          out.push_back({K::Power, coef, lambda, 0.0, 0.0, p.s});
        } else if constexpr (std::is_same_v<T, YukawaPower>) {
          if (p.sigma == 0.0) out.push_back({K::Power, coef, lambda, 0.0, 0.0, p.s});
          else out.push_back({K::Yukawa, coef, lambda, 0.0, p.sigma, p.s});
        } else if constexpr (std::is_same_v<T, LennardJones>) {
          out.push_back({K::Power, coef * p.c2, lambda, 0.0, 0.0, p.x2});
          out.push_back({K::Power, -coef * p.c1, lambda, 0.0, 0.0, p.x1});
        } else {
          decompose(*p.base, coef, lambda, out);
          for (const auto& e : p.kappa.entries())
            decompose(*p.base, -coef * e.a, lambda * e.k * e.k, out);
        }
      },
      f.variant());
}

std::vector<Component> decompose(const Potential& f) {
  std::vector<Component> out;
  decompose(f, 1.0, 1.0, out);
  return out;
}

double yukawa_tail(const Geometry& g, double R, double sigma, double s, double lambda) {
  const double a = R - 2.0 * g.rho;
  if (!(a > 0.0)) return kInf;
  double b = kInf;
  if (sigma > 0.0)
    b = std::pow(lambda * a * a, -s) * detail::sphere_area(g.d) / g.volume *
        detail::gauss_shell(g.d, g.rho, a, sigma * lambda);
  if (2.0 * s > g.d)
    b = std::min(b, std::exp(-sigma * lambda * a * a) * std::pow(lambda, -s) *
                        detail::power_tail_upper(g, R, 2.0 * s));
  return b;
}

// Bound on |coef| * sum over |p| > R of g(lambda |p|^2).
double component_tail(const Geometry& g, double R, const Component& c) {
  switch (c.kind) {
    case Component::Kind::Gauss:
      return std::abs(c.coef) * detail::gauss_tail_upper(g, R, kPi * c.alpha * c.lambda);
    case Component::Kind::Power:
      return std::abs(c.coef) * std::pow(c.lambda, -c.s) * detail::power_tail_upper(g, R, 2.0 * c.s);
    case Component::Kind::Yukawa:
      return std::abs(c.coef) * yukawa_tail(g, R, c.sigma, c.s, c.lambda);
  }
  return kInf;
}

EnergyValue yukawa_sum(const Lattice& L0, const Vector& c0, const Component& c, const SumConfig& cfg) {
  const Lattice L = work_lattice(L0);
  const ShiftInfo sh = reduce_shift(L, c0);
  const Geometry g = geometry(L);
  const auto rc = detail::choose_radius(g, cfg.tol, cfg.max_points, [&](double R) {
    return yukawa_tail(g, R, c.sigma, c.s, c.lambda);
  });
  const Partial p = sum_ball(L, sh.c, rc.R, true, [&](const std::int64_t*, const double*, double r2) {
    const double r = c.lambda * r2;
    return std::exp(-c.sigma * r) * std::pow(r, -c.s);
  });
  EnergyValue out;
  out.value = p.value;
  out.tail_bound = rc.bound;
  out.rounding_bound = rounding(p.abs_sum, p.value);
  out.cutoff_radius = rc.R;
  out.points_used = p.n;
  out.capped = rc.capped;
  return out;
}

}  // namespace

void SumConfig::validate() const {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  if (max_points < 1000) throw Error(ErrorKind::InvalidArgument, "max_points must be at least 1000");
}

EnergyValue theta(const Lattice& L, double alpha, const SumConfig& cfg) {
  return theta_core(L, Vector::Zero(L.dim()), alpha, cfg, false);
}

EnergyValue theta_excess(const Lattice& L, double alpha, const SumConfig& cfg) {
  return theta_core(L, Vector::Zero(L.dim()), alpha, cfg, true);
}

EnergyValue theta_shifted(const Lattice& L, const Vector& c, double alpha, const SumConfig& cfg) {
  return theta_core(L, c, alpha, cfg, false);
}

EnergyValue theta_shifted_excess(const Lattice& L, const Vector& c, double alpha,
                                 const SumConfig& cfg) {
  return theta_core(L, c, alpha, cfg, true);
}

EnergyValue theta_alternating(const Lattice& L, double alpha, const SumConfig& cfg) {
  cfg.validate();
  check_alpha(alpha);
  const int d = L.dim();
  if (!use_dual(cfg.theta_mode, alpha, L)) {
    const Geometry g = geometry(L);
    const double beta = kPi * alpha;
    const auto rc = detail::choose_radius(
        g, cfg.tol, cfg.max_points, [&](double R) { return detail::gauss_tail_upper(g, R, beta); });
    const Partial p = sum_ball(L, Vector::Zero(d), rc.R, false,
                               [&](const std::int64_t* m, const double*, double r2) {
                                 std::int64_t par = 0;
                                 for (int i = 0; i < d; ++i) par += m[i];
                                 const double w = std::exp(-beta * r2);
                                 return (par & 1) ? -w : w;
                               });
    EnergyValue out;
    out.value = p.value;
    out.tail_bound = rc.bound;
    out.rounding_bound = rounding(p.abs_sum, p.value);
    out.cutoff_radius = rc.R;
    out.points_used = p.n;
    out.capped = rc.capped;
    return out;
  }
  // Poisson: the sign character becomes a shift by half the dual basis sum.
  const Matrix Bd = L.inverse().transpose();
  const Lattice Ld = Lattice::from_basis(Bd);
  const Vector cstar = 0.5 * Bd.rowwise().sum();
  const double bg = 1.0 / (L.volume() * std::pow(alpha, 0.5 * d));
  SumConfig sub = cfg;
  sub.tol = cfg.tol / bg;
  sub.theta_mode = ThetaMode::Direct;
  EnergyValue v = theta_core(Ld, cstar, 1.0 / alpha, sub, false);
  v.value *= bg;
  v.tail_bound *= bg;
  v.rounding_bound *= bg;
  return v;
}

EnergyValue epstein_zeta(const Lattice& L, double two_s, const SumConfig& cfg) {
  return zeta_core(L, Vector::Zero(L.dim()), two_s, cfg);
}

EnergyValue epstein_zeta_shifted(const Lattice& L, const Vector& c, double two_s,
                                 const SumConfig& cfg) {
  return zeta_core(L, c, two_s, cfg);
}

EnergyValue energy_shifted(const Lattice& L, const Vector& c, const Potential& f,
                           const SumConfig& cfg) {
  cfg.validate();
  f.validate(L.dim());
  const std::vector<Component> comps = decompose(f);
  const bool origin_hit = reduce_shift(work_lattice(L), c).in_lattice;
  const double n = static_cast<double>(comps.size());
  EnergyValue out;
  std::vector<Term> parts;
  double abs_sum = 0.0;
  for (const Component& comp : comps) {
    SumConfig sub = cfg;
    EnergyValue v;
    double scale = comp.coef;
    switch (comp.kind) {
      case Component::Kind::Gauss:
        sub.tol = cfg.tol / (n * std::abs(scale));
        v = theta_shifted(L, c, comp.alpha * comp.lambda, sub);
        if (origin_hit) v.value -= 1.0;
        break;
      case Component::Kind::Power:
        scale *= std::pow(comp.lambda, -comp.s);
        sub.tol = cfg.tol / (n * std::abs(scale));
        v = epstein_zeta_shifted(L, c, 2.0 * comp.s, sub);
        break;
      case Component::Kind::Yukawa:
        sub.tol = cfg.tol / (n * std::abs(scale));
        v = yukawa_sum(L, c, comp, sub);
        break;
    }
    parts.push_back({0.0, scale * v.value});
    abs_sum += std::abs(scale * v.value);
    out.tail_bound += std::abs(scale) * v.tail_bound;
    out.rounding_bound += std::abs(scale) * v.rounding_bound;
    out.cutoff_radius = std::max(out.cutoff_radius, v.cutoff_radius);
    out.points_used += v.points_used;
    out.capped = out.capped || v.capped;
  }
  out.value = compensated(parts).value;
  out.rounding_bound += rounding(abs_sum, out.value);
  return out;
}

EnergyValue energy(const Lattice& L, const Potential& f, const SumConfig& cfg) {
  return energy_shifted(L, Vector::Zero(L.dim()), f, cfg);
}

EnergyValue energy_defect(const Lattice& L0, const Potential& f, const DefectSpec& spec,
                          const SumConfig& cfg) {
  cfg.validate();
  const int d = L0.dim();
  spec.check_dimension(d);
  f.validate(d);
  const Lattice L = work_lattice(L0);
  double pieces = 1.0;
  for (const auto& e : spec.entries()) pieces += e.shifts.empty() ? 1.0 : e.shifts.size();
  SumConfig sub = cfg;
  sub.tol = cfg.tol / pieces;

  EnergyValue out = energy(L, f, sub);
  std::vector<Term> parts{{0.0, out.value}};
  double abs_sum = std::abs(out.value);
  for (const auto& e : spec.entries()) {
    const Lattice kL = Lattice::from_basis(static_cast<double>(e.k) * L.basis());
    SumConfig se = sub;
    se.tol = sub.tol / std::abs(e.a);
    auto add = [&](const EnergyValue& v) {
      parts.push_back({0.0, -e.a * v.value});
      abs_sum += std::abs(e.a * v.value);
      out.tail_bound += std::abs(e.a) * v.tail_bound;
      out.rounding_bound += std::abs(e.a) * v.rounding_bound;
      out.cutoff_radius = std::max(out.cutoff_radius, v.cutoff_radius);
      out.points_used += v.points_used;
      out.capped = out.capped || v.capped;
    };
    if (e.shifts.empty()) {
      add(energy(kL, f, se));
    } else {
      for (const Shift& m : e.shifts) add(energy_shifted(kL, L.point(m), f, se));
    }
  }
  out.value = compensated(parts).value;
  out.rounding_bound += rounding(abs_sum, out.value);
  return out;
}

double defect_charge(const DefectSpec& spec, const std::int64_t* m, int d) {
  auto congruent = [&](const Shift* s, int k) {
    for (int i = 0; i < d; ++i) {
      std::int64_t r = (m[i] - (s ? (*s)[i] : 0)) % k;
      if (r != 0) return false;
    }
    return true;
  };
  double q = 1.0;
  for (const auto& e : spec.entries()) {
    if (e.shifts.empty()) {
      if (congruent(nullptr, e.k)) q -= e.a;
    } else {
      for (const Shift& s : e.shifts)
        if (congruent(&s, e.k)) q -= e.a;
    }
  }
  return q;
}

ChargedPointSet materialize(const Lattice& L0, const DefectSpec& spec, double radius,
                            std::int64_t max_points) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  spec.check_dimension(L0.dim());
  const Lattice L = work_lattice(L0);
  const int d = L.dim();
  ChargedPointSet ps{{}, L, spec, radius};
  std::int64_t seen = 0;
  detail::walk_ball(L, Vector::Zero(d), radius, [&](const std::int64_t* m, const double* pos, double) {
    if (++seen > max_points) throw Error(ErrorKind::CapExceeded, "materialize exceeds the point cap");
    const double q = defect_charge(spec, m, d);
    if (std::abs(q) > 1e-12) ps.points.push_back({Eigen::Map<const Vector>(pos, d), q});
    return true;
  });
  return ps;
}

double energy_pointset(const ChargedPointSet& ps, const Potential& f) {
  const double eps = 1e-12 * min_basis_norm(ps.lattice);
  std::vector<Term> terms;
  terms.reserve(ps.points.size());
  for (const auto& p : ps.points) {
    const double r2 = p.position.squaredNorm();
    if (r2 <= eps * eps) continue;
    terms.push_back({r2, p.charge * f(r2)});
  }
  return compensated(terms).value;
}

double pointset_tail_bound(const ChargedPointSet& ps, const Potential& f) {
  double cmax = 1.0;
  for (const auto& e : ps.spec.entries())
    cmax += std::abs(e.a) * std::max<std::size_t>(1, e.shifts.size());
  const Geometry g = geometry(ps.lattice);
  double b = 0.0;
  for (const Component& c : decompose(f)) b += component_tail(g, ps.radius, c);
  return cmax * b;
}

void write_csv(std::ostream& os, const ChargedPointSet& ps) {
  const int d = ps.lattice.dim();
  const char* names[] = {"x", "y", "z"};
  for (int i = 0; i < d; ++i) os << (i < 3 ? names[i] : "w") << (i < 3 ? "" : std::to_string(i)) << ',';
  os << "charge\n";
  for (const auto& p : ps.points) {
    for (int i = 0; i < d; ++i) os << fmt::format("{:.17g},", p.position[i]);
    os << fmt::format("{:.17g}\n", p.charge);
  }
}

void write_svg(std::ostream& os, const ChargedPointSet& ps) {
  if (ps.lattice.dim() != 2) throw Error(ErrorKind::InvalidArgument, "SVG output needs d = 2");
  const double size = 600.0, margin = 20.0;
  const double scale = (size - 2.0 * margin) / (2.0 * ps.radius);
  const double base = 0.3 * min_basis_norm(ps.lattice) * scale;
  auto X = [&](double x) { return size / 2.0 + scale * x; };
  auto Y = [&](double y) { return size / 2.0 - scale * y; };
  os << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n",
      size);
  os << fmt::format("<rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n", size);
  for (const auto& p : ps.points) {
    const double r = base * std::clamp(std::abs(p.charge), 0.25, 2.0);
    if (p.charge > 0.0)
      os << fmt::format("<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"{:.3f}\" fill=\"black\"/>\n",
                        X(p.position[0]), Y(p.position[1]), r);
    else
      os << fmt::format(
          "<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"{:.3f}\" fill=\"none\" stroke=\"#c0392b\" "
          "stroke-width=\"1.5\"/>\n",
          X(p.position[0]), Y(p.position[1]), r);
  }
  const double c = 0.6 * base;
  os << fmt::format(
      "<path d=\"M {0:.3f} {1:.3f} L {2:.3f} {3:.3f} M {0:.3f} {3:.3f} L {2:.3f} {1:.3f}\" "
      "stroke=\"blue\" stroke-width=\"2\"/>\n",
      X(0) - c, Y(0) - c, X(0) + c, Y(0) + c);
  os << "</svg>\n";
}

}  // namespace latdef
