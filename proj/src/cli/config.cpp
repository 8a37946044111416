#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "cli/schema.hpp"
#include "latdef/cli.hpp"

namespace latdef::cli {

namespace detail {

const std::vector<CommandDef>& commands() {
  static const std::vector<CommandDef> defs{
      {"energy", "lattice energy of a potential, with optional defects", {{"shift", ArgType::Reals, "shift vector c"}}},
      {"theta", "Gaussian lattice sums",
       {{"alpha", ArgType::Real, "Gaussian parameter"},
        {"shift", ArgType::Reals, "shift vector c"},
        {"kind", ArgType::Text, "plain | alternating | excess"}}},
      {"zeta", "Epstein zeta: sum of |p|^-s", {{"s", ArgType::Real, "exponent"}, {"shift", ArgType::Reals, "shift vector c"}}},
      {"minimize", "optimize over unit-volume lattice shapes",
       {{"objective", ArgType::Text, "theta:alpha=.. | alt:alpha=.. | centered:alpha=.. | zeta:s=.."},
        {"sense", ArgType::Text, "min | max"},
        {"ortho", ArgType::Int, "search diagonal lattices in this dimension (2 or 3) instead"}}},
      {"scan", "shape of the optimum along a control parameter",
       {{"family", ArgType::Text, "theta | gauss-defect:k=..,a=.. | gauss-shifted:a=.."},
        {"alphas", ArgType::Reals, "alpha values for --family"},
        {"volumes", ArgType::Reals, "volumes for --potential"},
        {"sense", ArgType::Text, "min | max"},
        {"bisect", ArgType::Int, "extra bisection passes at shape changes"},
        {"cold", ArgType::Flag, "no warm starts"}}},
      {"verify", "run a named experiment",
       {{"experiment", ArgType::Text, "thm0 | thm02 | thm2ip | thm3lj | kagome | ionic | jacobi | laplace | phase"},
        {"k", ArgType::Int, "dilation factor"},
        {"a", ArgType::Real, "defect weight"},
        {"alphas", ArgType::Reals, "alpha values"},
        {"s", ArgType::Real, "inverse-power exponent"},
        {"n_random", ArgType::Int, "number of random lattices"},
        {"volumes", ArgType::Reals, "volumes"},
        {"radius", ArgType::Real, "patch radius"},
        {"ys", ArgType::Reals, "Jacobi arguments"}}},
      {"render", "charged patch as SVG or CSV",
       {{"radius", ArgType::Real, "patch radius"}, {"format", ArgType::Text, "svg | csv"}}},
  };
  return defs;
}

const CommandDef* find_command(const std::string& name) {
  for (const auto& c : commands())
    if (name == c.name) return &c;
  return nullptr;
}

}  // namespace detail

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); }

void only_fields(const nlohmann::json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) bad(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) bad(fmt::format("{}: unknown field '{}'", where, it.key()));
  }
}

template <class T>
T field(const nlohmann::json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) bad(fmt::format("{}.{}: expected a boolean", where, key));
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) bad(fmt::format("{}.{}: expected an integer", where, key));
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) bad(fmt::format("{}.{}: expected a number", where, key));
  } else {
    if (!v.is_string()) bad(fmt::format("{}.{}: expected a string", where, key));
  }
  return v.get<T>();
}

double to_double(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) bad("not a number: '" + s + "'");
  return v;
}

}  // namespace

std::vector<double> parse_reals(const std::string& text) {
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find(sep, pos);
    parts.push_back(text.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  std::vector<double> out;
  if (sep == ',') {
    for (const auto& p : parts) out.push_back(to_double(p));
    return out;
  }
  if (parts.size() != 3) bad("range must be a:b:n, got '" + text + "'");
  const double a = to_double(parts[0]), b = to_double(parts[1]), nn = to_double(parts[2]);
  if (nn < 2 || nn != std::floor(nn) || nn > 1e6) bad("range: n must be an integer >= 2");
  const int n = static_cast<int>(nn);
  const bool logs = a > 0.0 && b > 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    out.push_back(logs ? a * std::pow(b / a, t) : a + (b - a) * t);
  }
  out.back() = b;
  return out;
}

Lattice LatticeSpec::build(std::optional<double> volume) const {
  if (volume && !(*volume > 0.0)) bad("volume must be positive");
  if (named) return latdef::named(*named, volume.value_or(1.0));
  if (param) {
    Param2D p = *param;
    p.V = volume.value_or(1.0);
    return param_to_lattice(p);
  }
  if (basis) {
    const Lattice L = Lattice::from_basis(*basis);
    return volume ? scaled(L, std::pow(*volume / L.volume(), 1.0 / L.dim())) : L;
  }
  bad("no lattice given (use --lattice, --basis or --param)");
}

nlohmann::json LatticeSpec::to_json() const {
  if (named) return {{"named", to_string(*named)}};
  if (param) return {{"param", {{"x", param->x}, {"y", param->y}}}};
  if (basis) {
    nlohmann::json cols = nlohmann::json::array();
    for (int j = 0; j < basis->cols(); ++j) {
      std::vector<double> c(basis->rows());
      for (int i = 0; i < basis->rows(); ++i) c[i] = (*basis)(i, j);
      cols.push_back(c);
    }
    return {{"basis", cols}};
  }
  return nullptr;
}

LatticeSpec LatticeSpec::from_json(const nlohmann::json& j) {
  LatticeSpec s;
  if (j.is_null()) return s;
  only_fields(j, "lattice", {"named", "param", "basis"});
  if (j.size() != 1) bad("lattice: give exactly one of named, param, basis");
  if (j.contains("named")) s.named = parse_named_lattice(field<std::string>(j, "named", "lattice"));
  if (j.contains("param")) {
    only_fields(j["param"], "lattice.param", {"x", "y"});
    Param2D p;
    p.x = field<double>(j["param"], "x", "lattice.param");
    p.y = field<double>(j["param"], "y", "lattice.param");
    s.param = p;
  }
  if (j.contains("basis")) {
    const auto& cols = j["basis"];
    if (!cols.is_array() || cols.empty()) bad("lattice.basis: expected a list of basis vectors");
    const auto d = static_cast<Eigen::Index>(cols.size());
    Matrix B(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
      const auto& col = cols[static_cast<std::size_t>(c)];
      if (!col.is_array() || static_cast<Eigen::Index>(col.size()) != d)
        bad("lattice.basis: each vector needs d = number of vectors entries");
      for (Eigen::Index r = 0; r < d; ++r) {
        if (!col[static_cast<std::size_t>(r)].is_number()) bad("lattice.basis: entries must be numbers");
        B(r, c) = col[static_cast<std::size_t>(r)].get<double>();
      }
    }
    s.basis = B;
  }
  return s;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  if (potential) j["potential"] = *potential;
  if (!defects.empty()) j["defects"] = defects.to_json();
  if (!lattice.to_json().is_null()) j["lattice"] = lattice.to_json();
  if (volume) j["volume"] = *volume;
  j["sums"] = {{"tol", sums.tol},
               {"max_points", sums.max_points},
               {"zeta_mode", sums.zeta_mode == ZetaMode::Direct ? "direct" : "mellin"},
               {"theta_mode", sums.theta_mode == ThetaMode::Auto     ? "auto"
                              : sums.theta_mode == ThetaMode::Direct ? "direct"
                                                                     : "dual"}};
  j["grid"] = {{"n_x", grid.n_x},         {"n_y", grid.n_y},     {"y_min", grid.y_min},
               {"y_max", grid.y_max},     {"refine", grid.refine}, {"nm_tol", grid.nm_tol},
               {"nm_max_iter", grid.nm_max_iter}};
  if (!out_dir.empty()) j["out"] = out_dir;
  j["seed"] = seed;
  j["workers"] = workers;
  j["args"] = args;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  only_fields(j, "config",
              {"command", "potential", "defects", "lattice", "volume", "sums", "grid", "out", "seed", "workers", "args"});
  RunConfig c;
  if (j.contains("command")) c.command = field<std::string>(j, "command", "config");
  if (j.contains("potential")) c.potential = field<std::string>(j, "potential", "config");
  if (j.contains("defects")) c.defects = DefectSpec::from_json(j["defects"]);
  if (j.contains("lattice")) c.lattice = LatticeSpec::from_json(j["lattice"]);
  if (j.contains("volume")) c.volume = field<double>(j, "volume", "config");
  if (j.contains("sums")) {
    const auto& s = j["sums"];
    only_fields(s, "sums", {"tol", "max_points", "zeta_mode", "theta_mode"});
    if (s.contains("tol")) c.sums.tol = field<double>(s, "tol", "sums");
    if (s.contains("max_points")) c.sums.max_points = field<std::int64_t>(s, "max_points", "sums");
    if (s.contains("zeta_mode")) {
      const auto m = field<std::string>(s, "zeta_mode", "sums");
      if (m == "direct") c.sums.zeta_mode = ZetaMode::Direct;
      else if (m == "mellin") c.sums.zeta_mode = ZetaMode::MellinAccelerated;
      else bad("sums.zeta_mode: expected direct or mellin");
    }
    if (s.contains("theta_mode")) {
      const auto m = field<std::string>(s, "theta_mode", "sums");
      if (m == "auto") c.sums.theta_mode = ThetaMode::Auto;
      else if (m == "direct") c.sums.theta_mode = ThetaMode::Direct;
      else if (m == "dual") c.sums.theta_mode = ThetaMode::Dual;
      else bad("sums.theta_mode: expected auto, direct or dual");
    }
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    only_fields(g, "grid", {"n_x", "n_y", "y_min", "y_max", "refine", "nm_tol", "nm_max_iter"});
    if (g.contains("n_x")) c.grid.n_x = field<int>(g, "n_x", "grid");
    if (g.contains("n_y")) c.grid.n_y = field<int>(g, "n_y", "grid");
    if (g.contains("y_min")) c.grid.y_min = field<double>(g, "y_min", "grid");
    if (g.contains("y_max")) c.grid.y_max = field<double>(g, "y_max", "grid");
    if (g.contains("refine")) c.grid.refine = field<bool>(g, "refine", "grid");
    if (g.contains("nm_tol")) c.grid.nm_tol = field<double>(g, "nm_tol", "grid");
    if (g.contains("nm_max_iter")) c.grid.nm_max_iter = field<int>(g, "nm_max_iter", "grid");
  }
  if (j.contains("out")) c.out_dir = field<std::string>(j, "out", "config");
  if (j.contains("seed")) c.seed = field<std::uint64_t>(j, "seed", "config");
  if (j.contains("workers")) c.workers = field<int>(j, "workers", "config");
  if (j.contains("args")) {
    if (!j["args"].is_object()) bad("args: expected an object");
    c.args = j["args"];
  }
  return c;
}

void RunConfig::validate() const {
  const detail::CommandDef* def = detail::find_command(command);
  if (!def) bad("command: unknown '" + command + "'");
  sums.validate();
  grid.validate();
  if (workers < 1) bad("workers must be >= 1");
  if (volume && !(*volume > 0.0)) bad("volume must be positive");
  if (potential) parse_potential(*potential);
  for (auto it = args.begin(); it != args.end(); ++it) {
    const detail::ArgDef* a = nullptr;
    for (const auto& d : def->args)
      if (it.key() == d.name) a = &d;
    if (!a) bad(fmt::format("args: unknown field '{}' for {}", it.key(), command));
    const auto& v = it.value();
    bool ok = false;
    switch (a->type) {
      case detail::ArgType::Real: ok = v.is_number(); break;
      case detail::ArgType::Int: ok = v.is_number_integer(); break;
      case detail::ArgType::Text: ok = v.is_string(); break;
      case detail::ArgType::Flag: ok = v.is_boolean(); break;
      case detail::ArgType::Reals:
        ok = v.is_array() && std::all_of(v.begin(), v.end(), [](const nlohmann::json& x) { return x.is_number(); });
        break;
    }
    if (!ok) bad(fmt::format("args.{}: wrong type", it.key()));
  }
}

}  // namespace latdef::cli
