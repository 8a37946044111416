#include "latdef/potential.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include <fmt/format.h>

namespace latdef {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void bad_spec(const std::string& msg) { throw Error(ErrorKind::InvalidSpec, msg); }
[[noreturn]] void bad_arg(const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); }

std::int64_t floor_mod(std::int64_t a, std::int64_t k) {
  std::int64_t r = a % k;
  return r < 0 ? r + k : r;
}

}  // namespace

DefectSpec::DefectSpec(std::vector<DefectEntry> entries) : entries_(std::move(entries)) {
  std::set<int> seen;
  std::size_t shift_len = 0;
  for (const auto& e : entries_) {
    if (e.k < 2) bad_spec(fmt::format("entries: k = {} must be at least 2", e.k));
    if (!std::isfinite(e.a) || e.a == 0.0)
      bad_spec(fmt::format("entries: a for k = {} must be finite and nonzero", e.k));
    if (!seen.insert(e.k).second) bad_spec(fmt::format("entries: duplicate k = {}", e.k));
    for (const auto& s : e.shifts) {
      if (s.empty()) bad_spec("entries: empty shift vector");
      if (shift_len == 0) shift_len = s.size();
      if (s.size() != shift_len) bad_spec("entries: shift vectors of different lengths");
      bool trivial = std::all_of(s.begin(), s.end(),
                                 [&](std::int64_t m) { return floor_mod(m, e.k) == 0; });
      if (trivial)
        bad_spec(fmt::format("entries: shift for k = {} lies in kL (trivial shift)", e.k));
    }
  }
}

bool DefectSpec::non_shifted() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const DefectEntry& e) { return e.shifts.empty(); });
}

int DefectSpec::max_k() const noexcept {
  int m = 1;
  for (const auto& e : entries_) m = std::max(m, e.k);
  return m;
}

void DefectSpec::check_dimension(int d) const {
  for (const auto& e : entries_)
    for (const auto& s : e.shifts)
      if (static_cast<int>(s.size()) != d)
        bad_spec(fmt::format("shift of length {} does not match dimension {}", s.size(), d));
}

DefectSpec DefectSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object()) bad_spec("defect spec must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "entries" && it.key() != "version")
      bad_spec("unknown field '" + it.key() + "'");
  if (j.contains("version") && j["version"] != 1) bad_spec("version: only 1 is supported");
  if (!j.contains("entries") || !j["entries"].is_array()) bad_spec("entries: missing or not an array");
  std::vector<DefectEntry> out;
  for (const auto& je : j["entries"]) {
    if (!je.is_object()) bad_spec("entries: each entry must be an object");
    for (auto it = je.begin(); it != je.end(); ++it)
      if (it.key() != "k" && it.key() != "a" && it.key() != "shifts")
        bad_spec("entries: unknown field '" + it.key() + "'");
    if (!je.contains("k") || !je["k"].is_number_integer()) bad_spec("k: missing or not an integer");
    if (!je.contains("a") || !je["a"].is_number()) bad_spec("a: missing or not a number");
    DefectEntry e;
    e.k = je["k"].get<int>();
    e.a = je["a"].get<double>();
    if (je.contains("shifts")) {
      if (!je["shifts"].is_array()) bad_spec("shifts: not an array");
      for (const auto& js : je["shifts"]) {
        if (!js.is_array()) bad_spec("shifts: each shift must be an array of integers");
        Shift s;
        for (const auto& v : js) {
          if (!v.is_number_integer()) bad_spec("shifts: non-integer coordinate");
          s.push_back(v.get<std::int64_t>());
        }
        e.shifts.push_back(std::move(s));
      }
    }
    out.push_back(std::move(e));
  }
  return DefectSpec(std::move(out));
}

nlohmann::json DefectSpec::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries_) {
    nlohmann::json je;
    je["k"] = e.k;
    je["a"] = e.a;
    je["shifts"] = nlohmann::json::array();
    for (const auto& s : e.shifts) je["shifts"].push_back(s);
    arr.push_back(je);
  }
  return {{"entries", arr}};
}

double dirichlet_L(const DefectSpec& spec, double s) {
  if (!(s > 0.0)) bad_arg("dirichlet_L needs s > 0");
  double sum = 0.0;
  for (const auto& e : spec.entries()) sum += e.a * std::pow(static_cast<double>(e.k), -s);
  return sum;
}

Potential Potential::defect_modified(Potential base, DefectSpec kappa) {
  if (!kappa.non_shifted())
    bad_spec("the defect-modified potential needs a non-shifted spec");
  return Potential(DefectModified{std::make_shared<const Potential>(std::move(base)),
                                  std::move(kappa)});
}

double Potential::operator()(double r) const {
  return std::visit(
      [r](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return std::exp(-kPi * p.alpha * r);
        } else if constexpr (std::is_same_v<T, InversePower>) {
          return std::pow(r, -p.s);
        } else if constexpr (std::is_same_v<T, YukawaPower>) {
          return std::exp(-p.sigma * r) * std::pow(r, -p.s);
        } else if constexpr (std::is_same_v<T, LennardJones>) {
          return p.c2 * std::pow(r, -p.x2) - p.c1 * std::pow(r, -p.x1);
        } else {
          double v = (*p.base)(r);
          for (const auto& e : p.kappa.entries())
            v -= e.a * (*p.base)(static_cast<double>(e.k) * static_cast<double>(e.k) * r);
          return v;
        }
      },
      v_);
}

double Potential::decay_exponent() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Gaussian>) return inf;
        else if constexpr (std::is_same_v<T, InversePower>) return p.s;
        else if constexpr (std::is_same_v<T, YukawaPower>) return p.sigma > 0.0 ? inf : p.s;
        else if constexpr (std::is_same_v<T, LennardJones>) return std::min(p.x1, p.x2);
        else return p.base->decay_exponent();
      },
      v_);
}

void Potential::validate(int d) const {
  if (d < 1) bad_arg("dimension must be positive");
  const double half = 0.5 * d;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) bad_arg("gauss: alpha must be positive");
        } else if constexpr (std::is_same_v<T, InversePower>) {
          if (!(p.s > half))
            bad_arg(fmt::format("ip: s = {} must exceed d/2 = {}", p.s, half));
        } else if constexpr (std::is_same_v<T, YukawaPower>) {
          if (!(p.sigma >= 0.0) || !std::isfinite(p.sigma)) bad_arg("yuk: sigma must be nonnegative");
          if (!(p.s > 0.0) || !std::isfinite(p.s)) bad_arg("yuk: s must be positive");
          if (p.sigma == 0.0 && !(p.s > half))
            bad_arg(fmt::format("yuk: with sigma = 0, s = {} must exceed d/2 = {}", p.s, half));
        } else if constexpr (std::is_same_v<T, LennardJones>) {
          if (!(p.c1 > 0.0) || !(p.c2 > 0.0)) bad_arg("lj: c1 and c2 must be positive");
          if (!(p.x2 > p.x1) || !(p.x1 > half))
            bad_arg(fmt::format("lj: need x2 > x1 > d/2 = {}", half));
        } else {
          if (!p.base) bad_arg("defect-modified potential without base");
          p.base->validate(d);
          if (!p.kappa.non_shifted()) bad_spec("defect-modified potential needs a non-shifted spec");
        }
      },
      v_);
}

std::string Potential::describe() const {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Gaussian>) return fmt::format("gauss:alpha={}", p.alpha);
        else if constexpr (std::is_same_v<T, InversePower>) return fmt::format("ip:s={}", p.s);
        else if constexpr (std::is_same_v<T, YukawaPower>)
          return fmt::format("yuk:sigma={},s={}", p.sigma, p.s);
        else if constexpr (std::is_same_v<T, LennardJones>)
          return fmt::format("lj:c1={},c2={},x1={},x2={}", p.c1, p.c2, p.x1, p.x2);
        else return p.base->describe() + " kappa=" + p.kappa.to_json().dump();
      },
      v_);
}

namespace {

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty())
    bad_arg("value for '" + key + "' is not a number: '" + text + "'");
  return v;
}

}  // namespace

Tagged parse_tagged(const std::string& text) {
  Tagged out;
  const auto colon = text.find(':');
  out.family = text.substr(0, colon);
  if (out.family.empty()) bad_arg("expected family:key=value,... in '" + text + "'");
  if (colon == std::string::npos) return out;
  std::size_t pos = colon + 1;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos) bad_arg("expected key=value, got '" + item + "' in '" + text + "'");
    const std::string key = item.substr(0, eq);
    if (!out.values.emplace(key, parse_double(key, item.substr(eq + 1))).second)
      bad_arg("repeated key '" + key + "' in '" + text + "'");
    pos = comma + 1;
  }
  return out;
}

std::vector<double> Tagged::take(std::initializer_list<const char*> keys) {
  std::vector<double> out;
  for (const char* k : keys) {
    auto it = values.find(k);
    if (it == values.end()) bad_arg(fmt::format("{} needs key '{}'", family, k));
    out.push_back(it->second);
    values.erase(it);
  }
  if (!values.empty()) bad_arg(fmt::format("unknown key '{}' for {}", values.begin()->first, family));
  return out;
}

Potential parse_potential(const std::string& text) {
  Tagged t = parse_tagged(text);
  const std::string& fam = t.family;
  auto take = [&](std::initializer_list<const char*> keys) { return t.take(keys); };
  if (fam == "gauss") return Gaussian{take({"alpha"})[0]};
  if (fam == "ip") return InversePower{take({"s"})[0]};
  if (fam == "yuk") {
    auto v = take({"sigma", "s"});
    return YukawaPower{v[0], v[1]};
  }
  if (fam == "lj") {
    auto v = take({"c1", "c2", "x1", "x2"});
    return LennardJones{v[0], v[1], v[2], v[3]};
  }
  bad_arg("potential: unknown family '" + fam + "'");
}

double DensityFn::operator()(double t) const {
  if (!has_evaluator())
    throw Error(ErrorKind::NoDensity, "measure has point masses; no density evaluator");
  return continuous(t);
}

DensityFn density(const Potential& f) {
  return std::visit(
      [](const auto& p) -> DensityFn {
        using T = std::decay_t<decltype(p)>;
        DensityFn out;
        if constexpr (std::is_same_v<T, Gaussian>) {
          out.atoms.push_back({kPi * p.alpha, 1.0});
          out.support_start = kPi * p.alpha;
        } else if constexpr (std::is_same_v<T, InversePower>) {
          const double s = p.s, g = std::tgamma(s);
          out.continuous = [s, g](double t) { return t > 0.0 ? std::pow(t, s - 1.0) / g : 0.0; };
        } else if constexpr (std::is_same_v<T, YukawaPower>) {
          const double s = p.s, sig = p.sigma, g = std::tgamma(s);
          out.continuous = [s, sig, g](double t) {
            return t > sig ? std::pow(t - sig, s - 1.0) / g : 0.0;
          };
          out.support_start = sig;
          if (sig > 0.0) out.breakpoints.push_back(sig);
        } else if constexpr (std::is_same_v<T, LennardJones>) {
          const LennardJones q = p;
          const double g1 = std::tgamma(q.x1), g2 = std::tgamma(q.x2);
          out.continuous = [q, g1, g2](double t) {
            if (!(t > 0.0)) return 0.0;
            return q.c2 * std::pow(t, q.x2 - 1.0) / g2 - q.c1 * std::pow(t, q.x1 - 1.0) / g1;
          };
        } else {
          DensityFn base = density(*p.base);
          std::vector<std::pair<double, double>> ka;
          for (const auto& e : p.kappa.entries())
            ka.push_back({static_cast<double>(e.k) * e.k, e.a});
          out.support_start = base.support_start;
          out.breakpoints = base.breakpoints;
          out.atoms = base.atoms;
          for (auto [k2, a] : ka) {
            for (auto [t0, w] : base.atoms) out.atoms.push_back({k2 * t0, -a * w});
            for (double b : base.breakpoints) out.breakpoints.push_back(k2 * b);
          }
          std::sort(out.breakpoints.begin(), out.breakpoints.end());
          std::sort(out.atoms.begin(), out.atoms.end());
          if (base.continuous) {
            auto rho = base.continuous;
            out.continuous = [rho, ka](double t) {
              double v = rho(t);
              for (auto [k2, a] : ka) v -= a / k2 * rho(t / k2);
              return v;
            };
          }
        }
        return out;
      },
      f.variant());
}

LogGrid default_condthm_grid(const DefectSpec& spec) {
  const double k = spec.max_k();
  LogGrid g;
  g.t_max = 1e3 * k * k;
  g.t_min = 1e-12 * g.t_max;
  g.n = 4096;
  return g;
}

CondThmResult check_condthm(const Potential& f, const DefectSpec& spec) {
  return check_condthm(f, spec, default_condthm_grid(spec));
}

CondThmResult check_condthm(const Potential& f, const DefectSpec& spec, const LogGrid& grid) {
  if (!spec.non_shifted()) bad_spec("condition check needs a non-shifted spec");
  if (!(grid.t_min > 0.0) || !(grid.t_max > grid.t_min) || grid.n < 2)
    bad_arg("condition grid needs 0 < t_min < t_max and n >= 2");
  const DensityFn rho = density(f);
  if (!rho.has_evaluator())
    throw Error(ErrorKind::NoDensity, "potential has no closed-form density");
  CondThmResult res;
  const double lr = std::log(grid.t_max / grid.t_min);
  for (int i = 0; i < grid.n; ++i) {
    const double t = grid.t_min * std::exp(lr * i / (grid.n - 1));
    const double lhs = rho(t);
    double rhs = 0.0, mag = std::abs(lhs);
    for (const auto& e : spec.entries()) {
      const double k2 = static_cast<double>(e.k) * e.k;
      const double term = e.a / k2 * rho(t / k2);
      rhs += term;
      mag += std::abs(term);
    }
    ++res.samples;
    if (lhs < rhs - 1e-12 * mag) {
      res.holds_on_grid = false;
      if (!res.first_violation) res.first_violation = t;
    }
  }
  return res;
}

namespace {

struct GVTerms {
  double a = 0.0, b = 0.0;
};

GVTerms gv_terms(const DensityFn& rho, int d, double V, double y) {
  const double scale = kPi / std::pow(V, 2.0 / d);
  return {rho(scale * y), std::pow(y, 0.5 * d - 2.0) * rho(scale / y)};
}

DensityFn kappa_density(const Potential& f, const DefectSpec& spec) {
  if (!spec.non_shifted()) bad_spec("g_V needs a non-shifted spec");
  DensityFn rho = spec.empty() ? density(f) : density(Potential::defect_modified(f, spec));
  if (!rho.has_evaluator())
    throw Error(ErrorKind::NoDensity, "potential has no closed-form density");
  return rho;
}

}  // namespace

double g_V(const Potential& f, const DefectSpec& spec, int d, double V, double y) {
  if (!(V > 0.0) || !(y > 0.0) || d < 1) bad_arg("g_V needs d >= 1, V > 0, y > 0");
  const GVTerms t = gv_terms(kappa_density(f, spec), d, V, y);
  return t.a + t.b;
}

GVResult check_gV(const Potential& f, const DefectSpec& spec, int d, double V, double y_max,
                  int n_samples) {
  if (!(V > 0.0) || !(y_max > 1.0) || n_samples < 2 || d < 1)
    bad_arg("check_gV needs V > 0, y_max > 1, n_samples >= 2");
  const DensityFn rho = kappa_density(f, spec);
  GVResult res;
  res.min_value = std::numeric_limits<double>::infinity();
  const double ly = std::log(y_max);
  for (int i = 0; i < n_samples; ++i) {
    const double y = i == 0 ? 1.0 : std::exp(ly * i / (n_samples - 1));
    const GVTerms t = gv_terms(rho, d, V, y);
    const double g = t.a + t.b;
    if (g < res.min_value) {
      res.min_value = g;
      res.argmin = y;
    }
    if (g < -1e-12 * (std::abs(t.a) + std::abs(t.b))) res.holds_on_grid = false;
  }
  return res;
}

std::string to_string(LJRegime r) {
  switch (r) {
    case LJRegime::Case1: return "Case1";
    case LJRegime::Case2: return "Case2";
    case LJRegime::Case3: return "Case3";
    case LJRegime::Degenerate: return "Degenerate";
  }
  return "?";
}

LJRegime lj_regime(const LennardJones& f, const DefectSpec& spec) {
  if (!spec.non_shifted()) bad_spec("regime classification needs a non-shifted spec");
  if (spec.empty()) return LJRegime::Case1;
  const double L1 = dirichlet_L(spec, 2.0 * f.x1);
  const double L2 = dirichlet_L(spec, 2.0 * f.x2);
  if (L2 < L1 && L1 < 1.0) return LJRegime::Case1;
  if (L1 > L2 && L2 > 1.0) return LJRegime::Case2;
  if (L1 > 1.0 && 1.0 > L2) return LJRegime::Case3;
  return LJRegime::Degenerate;
}

double lj_threshold_volume(const LennardJones& f, const DefectSpec& spec, int d) {
  Potential(f).validate(d);
  const double L1 = spec.empty() ? 0.0 : dirichlet_L(spec, 2.0 * f.x1);
  const double L2 = spec.empty() ? 0.0 : dirichlet_L(spec, 2.0 * f.x2);
  const double ratio = f.c2 * (1.0 - L2) * std::tgamma(f.x1) / (f.c1 * (1.0 - L1) * std::tgamma(f.x2));
  if (!(ratio > 0.0)) throw Error(ErrorKind::WrongRegime, "threshold volume undefined for this spec");
  return std::pow(kPi, 0.5 * d) * std::pow(ratio, d / (2.0 * (f.x2 - f.x1)));
}

double V_kappa(const LennardJones& f, const DefectSpec& spec, int d) {
  if (!spec.non_shifted()) bad_spec("V_kappa needs a non-shifted spec");
  if (lj_regime(f, spec) != LJRegime::Case1)
    throw Error(ErrorKind::WrongRegime,
                fmt::format("V_kappa needs L(2x2) < L(2x1) < 1; regime is {}",
                            to_string(lj_regime(f, spec))));
  return lj_threshold_volume(f, spec, d);
}

}  // namespace latdef
