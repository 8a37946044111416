#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "latdef/error.hpp"

namespace latdef {

using Shift = std::vector<std::int64_t>;

struct DefectEntry {
  int k = 2;
  double a = 1.0;
  std::vector<Shift> shifts;  // integer coordinates in the reduced basis
};

/// kappa = {K, A_K, P_K}: the set of dilation factors, weights and shifts.
class DefectSpec {
 public:
  DefectSpec() = default;
  explicit DefectSpec(std::vector<DefectEntry> entries);

  const std::vector<DefectEntry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  bool non_shifted() const noexcept;
  int max_k() const noexcept;

  /// Shift vectors must have length d.
  void check_dimension(int d) const;

  static DefectSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  std::vector<DefectEntry> entries_;
};

/// sum_k a_k k^{-s}; shifts are ignored.
double dirichlet_L(const DefectSpec& spec, double s);

struct Gaussian {
  double alpha = 1.0;  // f(r) = exp(-pi alpha r)
};
struct InversePower {
  double s = 2.0;  // f(r) = r^{-s}
};
struct YukawaPower {
  double sigma = 1.0;  // f(r) = exp(-sigma r) r^{-s}
  double s = 2.0;
};
struct LennardJones {
  double c1 = 1.0, c2 = 1.0;  // f(r) = c2 r^{-x2} - c1 r^{-x1}
  double x1 = 3.0, x2 = 6.0;
};

class Potential;

struct DefectModified {
  std::shared_ptr<const Potential> base;
  DefectSpec kappa;  // non-shifted
};

/// Radial potential f, evaluated at the squared distance.
class Potential {
 public:
  using Variant = std::variant<Gaussian, InversePower, YukawaPower, LennardJones, DefectModified>;

  Potential(Gaussian g) : v_(g) {}
  Potential(InversePower p) : v_(p) {}
  Potential(YukawaPower p) : v_(p) {}
  Potential(LennardJones p) : v_(p) {}

  /// f_kappa(r) = f(r) - sum_k a_k f(k^2 r). Requires a non-shifted spec.
  static Potential defect_modified(Potential base, DefectSpec kappa);

  const Variant& variant() const noexcept { return v_; }
  template <class T>
  const T* get() const noexcept { return std::get_if<T>(&v_); }

  double operator()(double r) const;

  /// Decay exponent p_f, with +inf for Gaussian-dominated tails.
  double decay_exponent() const;

  /// Parameter checks plus p_f > d/2.
  void validate(int d) const;

  /// Same grammar as the CLI: ip:s=2, gauss:alpha=1, ...
  std::string describe() const;

 private:
  explicit Potential(DefectModified m) : v_(std::move(m)) {}
  Variant v_;
};

inline double eval(const Potential& f, double r) { return f(r); }

/// "family:key=value,..." with numeric values; the ":..." part is optional.
struct Tagged {
  std::string family;
  std::map<std::string, double> values;

  /// Values for exactly these keys, in order; anything else is an error.
  std::vector<double> take(std::initializer_list<const char*> keys);
};

Tagged parse_tagged(const std::string& text);

/// Parses ip:s=..., gauss:alpha=..., yuk:sigma=...,s=..., lj:c1=...,c2=...,x1=...,x2=...
Potential parse_potential(const std::string& text);

/// Inverse-Laplace density of f. Point masses (Gaussian parts) are kept in
/// `atoms`; evaluating the density of such a measure throws NoDensity.
struct DensityFn {
  std::function<double(double)> continuous;
  std::vector<std::pair<double, double>> atoms;  // (t, weight)
  double support_start = 0.0;
  std::vector<double> breakpoints;

  bool has_evaluator() const noexcept { return atoms.empty() && bool(continuous); }
  double operator()(double t) const;
};

DensityFn density(const Potential& f);

struct CondThmResult {
  bool holds_on_grid = true;
  std::optional<double> first_violation;
  int samples = 0;
};

struct LogGrid {
  double t_min = 0.0;
  double t_max = 0.0;
  int n = 4096;
};

/// t_max = 1e3 * (largest k)^2, 4096 log-spaced samples down to 1e-12 t_max.
LogGrid default_condthm_grid(const DefectSpec& spec);

CondThmResult check_condthm(const Potential& f, const DefectSpec& spec);
CondThmResult check_condthm(const Potential& f, const DefectSpec& spec, const LogGrid& grid);

double g_V(const Potential& f, const DefectSpec& spec, int d, double V, double y);

struct GVResult {
  bool holds_on_grid = true;
  double min_value = 0.0;
  double argmin = 1.0;
};

GVResult check_gV(const Potential& f, const DefectSpec& spec, int d, double V,
                  double y_max = 1e3, int n_samples = 4096);

enum class LJRegime { Case1, Case2, Case3, Degenerate };
std::string to_string(LJRegime r);

LJRegime lj_regime(const LennardJones& f, const DefectSpec& spec);

/// Threshold volume; throws WrongRegime outside Case1.
double V_kappa(const LennardJones& f, const DefectSpec& spec, int d);

/// Same closed form without the regime precondition (needs both 1 - L > 0
/// or both < 0 so the ratio is positive).
double lj_threshold_volume(const LennardJones& f, const DefectSpec& spec, int d);

}  // namespace latdef
