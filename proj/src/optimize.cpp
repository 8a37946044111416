#include "latdef/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "latdef/nelder_mead.hpp"

namespace latdef {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double call_objective(const Objective& obj, const Lattice& L, double x, double y) {
  double v;
  try {
    v = obj(L);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ObjectiveFailure) throw;
    throw Error(e.kind() == ErrorKind::CapExceeded ? ErrorKind::CapExceeded : ErrorKind::ObjectiveFailure,
                fmt::format("objective failed at (x, y) = ({:.17g}, {:.17g}): {}", x, y, e.what()));
  } catch (const std::exception& e) {
    throw Error(ErrorKind::ObjectiveFailure,
                fmt::format("objective failed at (x, y) = ({:.17g}, {:.17g}): {}", x, y, e.what()));
  }
  if (!std::isfinite(v))
    throw Error(ErrorKind::ObjectiveFailure,
                fmt::format("objective is not finite at (x, y) = ({:.17g}, {:.17g})", x, y));
  return v;
}

// Canonical point of (x, y) with y capped.
Param2D capped_param(double x, double y, double V, double y_max) {
  Param2D c = canonical_param({x, y, V});
  if (c.y > y_max) c.y = y_max;
  return c;
}

// Evaluates f(i) for i in [0, n) on `workers` threads; results by index.
template <class F>
std::vector<double> parallel_eval(std::size_t n, int workers, F&& f) {
  std::vector<double> out(n, 0.0);
  std::vector<std::exception_ptr> errs(n);
  const int w = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  auto job = [&](int id) {
    for (std::size_t i = static_cast<std::size_t>(id); i < n; i += static_cast<std::size_t>(w)) {
      try {
        out[i] = f(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  if (w == 1) {
    job(0);
  } else {
    std::vector<std::thread> pool;
    for (int id = 0; id < w; ++id) pool.emplace_back(job, id);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

struct GridPoint {
  double x, y;
};

std::vector<GridPoint> domain_grid(const GridSpec& g) {
  std::vector<GridPoint> pts;
  const double ly = std::log(g.y_max / g.y_min);
  for (int i = 0; i < g.n_x; ++i) {
    const double x = 0.5 * i / (g.n_x - 1);
    const double arc = std::sqrt(1.0 - x * x);
    pts.push_back({x, arc});
    for (int j = 0; j < g.n_y; ++j) {
      const double y = g.y_min * std::exp(ly * j / (g.n_y - 1));
      if (y > arc * (1.0 + 1e-12)) pts.push_back({x, y});
    }
  }
  return pts;
}

}  // namespace

void GridSpec::validate() const {
  if (n_x < 8 || n_y < 8) throw Error(ErrorKind::InvalidArgument, "grid needs n_x, n_y >= 8");
  if (!(y_min > 0.0) || !(y_max > y_min) || !(y_max > 1.0))
    throw Error(ErrorKind::InvalidArgument, "grid needs 0 < y_min < y_max and y_max > 1");
  if (!(nm_tol > 0.0) || nm_max_iter < 1) throw Error(ErrorKind::InvalidArgument, "bad refinement settings");
}

MinimizeResult minimize2d(const Objective& objective, double V, const GridSpec& grid, Sense sense,
                          std::optional<Param2D> warm_start) {
  grid.validate();
  if (!(V > 0.0)) throw Error(ErrorKind::InvalidArgument, "volume must be positive");
  const double sgn = sense == Sense::Min ? 1.0 : -1.0;
  auto f = [&](double x, double y) {
    if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) return kInf;
    const Param2D c = capped_param(x, y, V, grid.y_max);
    return sgn * call_objective(objective, param_to_lattice(c), x, y);
  };

  const std::vector<GridPoint> pts = domain_grid(grid);
  const std::vector<double> vals =
      parallel_eval(pts.size(), grid.workers, [&](std::size_t i) { return f(pts[i].x, pts[i].y); });

  MinimizeResult res;
  res.evaluations = static_cast<int>(pts.size());
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] < vals[best]) best = i;
  double second = kInf;
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (i != best) second = std::min(second, vals[i]);

  res.grid_param = capped_param(pts[best].x, pts[best].y, V, grid.y_max);
  res.grid_value = sgn * vals[best];
  double bx = pts[best].x, by = pts[best].y, bv = vals[best];

  if (warm_start) {
    const double wv = f(warm_start->x, warm_start->y);
    ++res.evaluations;
    if (wv < bv) {
      bx = warm_start->x;
      by = warm_start->y;
      bv = wv;
    }
  }

  res.certified = false;
  if (grid.refine) {
    const double dx = 0.5 / (grid.n_x - 1);
    const double dy = by * (std::pow(grid.y_max / grid.y_min, 1.0 / (grid.n_y - 1)) - 1.0);
    NelderMeadOptions opt;
    opt.tol = grid.nm_tol;
    opt.max_iter = grid.nm_max_iter;
    const auto nm = nelder_mead([&](const std::vector<double>& z) { return f(z[0], z[1]); }, {bx, by},
                                {0.5 * dx, 0.5 * dy}, opt);
    res.evaluations += nm.evaluations;
    res.certified = nm.converged;
    if (nm.value <= bv) {
      bx = nm.x[0];
      by = nm.x[1];
      bv = nm.value;
    }
  }

  // Ties go to the most symmetric point: flat landscapes leave the polish
  // anywhere along a level set.
  {
    const Param2D c = capped_param(bx, by, V, grid.y_max);
    const GridPoint cands[] = {{0.5, std::sqrt(0.75)}, {0.0, 1.0}, {0.0, c.y}, {0.5, c.y},
                               {c.x, std::sqrt(1.0 - c.x * c.x)}};
    for (const auto& q : cands) {
      if (q.x == c.x && q.y == c.y) break;
      const double v = f(q.x, q.y);
      ++res.evaluations;
      if (v <= bv + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(bv)) {
        bx = q.x;
        by = q.y;
        bv = std::min(bv, v);
        break;
      }
    }
  }

  res.best_param = capped_param(bx, by, V, grid.y_max);
  res.best_value = sgn * bv;
  res.shape = classify_shape(res.best_param);
  res.runner_up_gap = std::max(0.0, second - bv);
  if (res.best_param.y >= grid.y_max * (1.0 - 1e-9)) {
    const double x = res.best_param.x;
    const double a = f(x, grid.y_max / 2.0), b = f(x, grid.y_max / std::sqrt(2.0));
    res.evaluations += 2;
    res.unbounded = a > b && b > bv;
  }
  return res;
}

OrthoResult minimize_orthorhombic(const Objective& objective, int d, double V, const OrthoGrid& grid,
                                  Sense sense) {
  if (d != 2 && d != 3) throw Error(ErrorKind::InvalidArgument, "orthorhombic scan needs d in {2, 3}");
  if (!(V > 0.0) || grid.n < 8) throw Error(ErrorKind::InvalidArgument, "need V > 0 and n >= 8");
  const double sgn = sense == Sense::Min ? 1.0 : -1.0;
  const double base = std::pow(V, 1.0 / d);
  auto sides_of = [&](const std::vector<double>& a) {
    std::vector<double> la(a);
    if (d == 3) la.push_back(-a[0] - a[1]);
    else la.push_back(-a[0]);
    return la;
  };
  auto f = [&](const std::vector<double>& a) {
    const auto la = sides_of(a);
    Matrix B = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) B(i, i) = base * std::exp(la[i]);
    return sgn * call_objective(objective, Lattice::from_basis(B), a[0], d == 3 ? a[1] : 0.0);
  };

  std::vector<std::vector<double>> pts;
  const double A = grid.max_log_aspect;
  if (d == 2) {
    for (int i = 0; i < grid.n; ++i) pts.push_back({A * i / (grid.n - 1)});
  } else {
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j)
        pts.push_back({-A + 2 * A * i / (grid.n - 1), -A + 2 * A * j / (grid.n - 1)});
  }
  const auto vals = parallel_eval(pts.size(), grid.workers, [&](std::size_t i) { return f(pts[i]); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (vals[i] < vals[best]) best = i;
  double second = kInf;
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (i != best) second = std::min(second, vals[i]);

  std::vector<double> a = pts[best];
  double v = vals[best];
  OrthoResult res;
  if (grid.refine) {
    const double step = (d == 2 ? A : 2 * A) / (grid.n - 1);
    NelderMeadOptions opt;
    opt.tol = grid.nm_tol;
    const auto nm = nelder_mead(f, a, std::vector<double>(a.size(), 0.5 * step), opt);
    res.certified = nm.converged;
    if (nm.value <= v) {
      a = nm.x;
      v = nm.value;
    }
  }
  res.log_aspects = sides_of(a);
  for (double& x : res.log_aspects) x = std::abs(x) < 1e-300 ? 0.0 : x;
  std::sort(res.log_aspects.begin(), res.log_aspects.end());
  for (double la : res.log_aspects) res.sides.push_back(base * std::exp(la));
  res.best_value = sgn * v;
  res.runner_up_gap = std::max(0.0, second - v);
  res.is_cubic = std::all_of(res.log_aspects.begin(), res.log_aspects.end(),
                             [](double x) { return std::abs(x) <= kShapeTol; });
  return res;
}

std::vector<PhaseScanRow> phase_scan(const ObjectiveFamily& family, const std::vector<double>& controls,
                                     double V, const GridSpec& grid, Sense sense,
                                     const PhaseScanOptions& opt) {
  if (!std::is_sorted(controls.begin(), controls.end()))
    throw Error(ErrorKind::InvalidArgument, "phase scan controls must be sorted");
  auto run = [&](double c, std::optional<Param2D> warm) {
    PhaseScanRow row;
    row.control = c;
    try {
      const MinimizeResult r = minimize2d(family(c), V, grid, sense, opt.warm_start ? warm : std::nullopt);
      row.best_param = r.best_param;
      row.shape = r.shape;
      row.value = r.best_value;
      row.unbounded = r.unbounded;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    return row;
  };

  std::vector<PhaseScanRow> rows;
  std::optional<Param2D> prev;
  for (double c : controls) {
    rows.push_back(run(c, prev));
    if (rows.back().ok) prev = rows.back().best_param;
  }

  const bool positive = !controls.empty() && controls.front() > 0.0;
  for (int pass = 0; pass < opt.boundary_bisections; ++pass) {
    std::vector<PhaseScanRow> extra;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      const auto& a = rows[i];
      const auto& b = rows[i + 1];
      if (!a.ok || !b.ok || a.shape == b.shape) continue;
      if (b.control - a.control <= 1e-12 * std::abs(b.control)) continue;
      const double mid = positive ? std::sqrt(a.control * b.control) : 0.5 * (a.control + b.control);
      extra.push_back(run(mid, a.best_param));
    }
    if (extra.empty()) break;
    rows.insert(rows.end(), extra.begin(), extra.end());
    std::stable_sort(rows.begin(), rows.end(),
                     [](const PhaseScanRow& a, const PhaseScanRow& b) { return a.control < b.control; });
  }
  return rows;
}

std::vector<ShapeClass> shape_sequence(const std::vector<PhaseScanRow>& rows) {
  std::vector<ShapeClass> seq;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    if (seq.empty() || seq.back() != r.shape) seq.push_back(r.shape);
  }
  return seq;
}

HessianResult hessian_check(const Objective& objective, const Param2D& p, double h) {
  if (!(h > 0.0) || !(p.V > 0.0) || !(p.y > 2.0 * h))
    throw Error(ErrorKind::InvalidArgument, "hessian_check needs h > 0 and y > 2h");
  auto f = [&](double x, double y) {
    return call_objective(objective, param_to_lattice(canonical_param({x, y, p.V})), x, y);
  };
  const double f0 = f(p.x, p.y);
  struct Stencil {
    Eigen::Vector2d g;
    Eigen::Matrix2d H;
  };
  auto stencil = [&](double s) {
    const double fxp = f(p.x + s, p.y), fxm = f(p.x - s, p.y);
    const double fyp = f(p.x, p.y + s), fym = f(p.x, p.y - s);
    const double fpp = f(p.x + s, p.y + s), fpm = f(p.x + s, p.y - s);
    const double fmp = f(p.x - s, p.y + s), fmm = f(p.x - s, p.y - s);
    Stencil st;
    st.g << (fxp - fxm) / (2 * s), (fyp - fym) / (2 * s);
    st.H(0, 0) = (fxp - 2 * f0 + fxm) / (s * s);
    st.H(1, 1) = (fyp - 2 * f0 + fym) / (s * s);
    st.H(0, 1) = st.H(1, 0) = (fpp - fpm - fmp + fmm) / (4 * s * s);
    return st;
  };
  const Stencil a = stencil(h), b = stencil(0.5 * h);
  HessianResult res;
  res.grad = (4.0 * b.g - a.g) / 3.0;
  res.hess = (4.0 * b.H - a.H) / 3.0;
  const double diff = (b.H - a.H).cwiseAbs().maxCoeff();
  const double scale = res.hess.cwiseAbs().maxCoeff();
  if (diff > 0.1 * scale && diff > 0.0)
    throw Error(ErrorKind::StepTooLarge,
                fmt::format("Richardson disagreement {:.3g} exceeds 10% of max |H| = {:.3g}", diff, scale));
  res.fd_error = diff + 16.0 * std::numeric_limits<double>::epsilon() * std::abs(f0) / (0.25 * h * h);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(res.hess);
  res.eigenvalues = es.eigenvalues();
  res.positive_definite = res.eigenvalues[0] > 1e-6 * scale;
  return res;
}

}  // namespace latdef
