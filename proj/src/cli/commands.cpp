#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cli/schema.hpp"
#include "latdef/cli.hpp"
#include "latdef/experiments.hpp"
#include "latdef/io.hpp"
#include "latdef/objectives.hpp"

namespace latdef::cli {

namespace {

using detail::ArgType;

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); }

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json parse_json(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(fmt::format("{}: malformed JSON ({})", what, e.what()));
  }
}

/// Inline JSON if it starts with '{', else a file name.
nlohmann::json json_arg(const std::string& text, const std::string& what) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '{') return parse_json(text, what);
  return parse_json(read_text(text), what + " " + text);
}

std::vector<double> numbers(const std::string& text, std::size_t n, const char* what) {
  std::vector<double> v = parse_reals(text);
  if (n && v.size() != n) bad(fmt::format("{}: expected {} numbers", what, n));
  return v;
}

// typed access to cfg.args with defaults
struct Args {
  const nlohmann::json& j;
  bool has(const char* k) const { return j.contains(k); }
  double real(const char* k, double def) const { return has(k) ? j[k].get<double>() : def; }
  int integer(const char* k, int def) const { return has(k) ? j[k].get<int>() : def; }
  std::string text(const char* k, const std::string& def) const { return has(k) ? j[k].get<std::string>() : def; }
  std::vector<double> reals(const char* k, std::vector<double> def) const {
    return has(k) ? j[k].get<std::vector<double>>() : def;
  }
  bool flag(const char* k) const { return has(k) && j[k].get<bool>(); }
};

Sense sense_of(const Args& a) {
  const std::string s = a.text("sense", "min");
  if (s == "min") return Sense::Min;
  if (s == "max") return Sense::Max;
  bad("sense: expected min or max");
}

Vector shift_of(const Args& a, int d) {
  const auto v = a.reals("shift", {});
  if (static_cast<int>(v.size()) != d) bad(fmt::format("shift: expected {} components", d));
  return Eigen::Map<const Vector>(v.data(), d);
}

Potential potential_of(const RunConfig& cfg) {
  if (!cfg.potential) bad("potential: required for " + cfg.command);
  return parse_potential(*cfg.potential);
}

void emit(std::ostream& out, const RunConfig& cfg, const char* key, const nlohmann::json& result) {
  nlohmann::json j;
  j["config"] = cfg.to_json();
  j[key] = result;
  out << j.dump(2) << '\n';
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

int cmd_energy(const RunConfig& cfg, std::ostream& out) {
  const Args a{cfg.args};
  const Potential f = potential_of(cfg);
  const Lattice L = cfg.lattice.build(cfg.volume);
  f.validate(L.dim());
  EnergyValue v;
  if (!cfg.defects.empty()) {
    if (a.has("shift")) bad("shift: not combinable with defects");
    cfg.defects.check_dimension(L.dim());
    v = energy_defect(L, f, cfg.defects, cfg.sums);
  } else if (a.has("shift")) {
    v = energy_shifted(L, shift_of(a, L.dim()), f, cfg.sums);
  } else {
    v = energy(L, f, cfg.sums);
  }
  emit(out, cfg, "result", v);
  return v.capped ? kCapExceeded : kOk;
}

int cmd_theta(const RunConfig& cfg, std::ostream& out) {
  const Args a{cfg.args};
  const Lattice L = cfg.lattice.build(cfg.volume);
  const double alpha = a.real("alpha", 1.0);
  const std::string kind = a.text("kind", "plain");
  EnergyValue v;
  if (kind == "plain") {
    v = a.has("shift") ? theta_shifted(L, shift_of(a, L.dim()), alpha, cfg.sums) : theta(L, alpha, cfg.sums);
  } else if (kind == "excess") {
    v = a.has("shift") ? theta_shifted_excess(L, shift_of(a, L.dim()), alpha, cfg.sums)
                       : theta_excess(L, alpha, cfg.sums);
  } else if (kind == "alternating") {
    if (a.has("shift")) bad("shift: not available for the alternating sum");
    v = theta_alternating(L, alpha, cfg.sums);
  } else {
    bad("kind: expected plain, excess or alternating");
  }
  emit(out, cfg, "result", v);
  return v.capped ? kCapExceeded : kOk;
}

int cmd_zeta(const RunConfig& cfg, std::ostream& out) {
  const Args a{cfg.args};
  if (!a.has("s")) bad("s: required for zeta");
  const Lattice L = cfg.lattice.build(cfg.volume);
  const double s = a.real("s", 0.0);
  const EnergyValue v = a.has("shift") ? epstein_zeta_shifted(L, shift_of(a, L.dim()), s, cfg.sums)
                                       : epstein_zeta(L, s, cfg.sums);
  emit(out, cfg, "result", v);
  return v.capped ? kCapExceeded : kOk;
}

Objective objective_of(const RunConfig& cfg) {
  const Args a{cfg.args};
  if (a.has("objective") == bool(cfg.potential)) bad("objective: give exactly one of --objective and --potential");
  if (a.has("objective")) {
    if (!cfg.defects.empty()) bad("defects: only used with --potential");
    return parse_objective(a.text("objective", ""), cfg.sums);
  }
  const Potential f = potential_of(cfg);
  return energy_objective(f, cfg.defects, cfg.sums);
}

int cmd_minimize(const RunConfig& cfg, std::ostream& out, const GridSpec& grid) {
  const Args a{cfg.args};
  const Objective obj = objective_of(cfg);
  const double V = cfg.volume.value_or(1.0);
  const Sense sense = sense_of(a);
  if (a.has("ortho")) {
    const int d = a.integer("ortho", 2);
    if (d != 2 && d != 3) bad("ortho: dimension must be 2 or 3");
    OrthoGrid og;
    og.n = grid.n_x;
    og.refine = grid.refine;
    og.nm_tol = grid.nm_tol;
    og.workers = grid.workers;
    const OrthoResult r = minimize_orthorhombic(obj, d, V, og, sense);
    emit(out, cfg, "result", r);
    return kOk;
  }
  const MinimizeResult r = minimize2d(obj, V, grid, sense);
  if (!cfg.out_dir.empty()) {
    std::ostringstream csv;
    write_csv(csv, r);
    write_file(out_path(cfg, "minimize.csv"), csv.str());
  }
  emit(out, cfg, "result", r);
  return kOk;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out, const GridSpec& grid) {
  const Args a{cfg.args};
  ObjectiveFamily family;
  std::vector<double> controls;
  std::string label;
  double V = 1.0;
  if (a.has("family")) {
    if (cfg.potential) bad("family: not combinable with --potential");
    if (!a.has("alphas")) bad("alphas: required with --family");
    family = parse_family(a.text("family", ""), cfg.sums);
    controls = a.reals("alphas", {});
    label = "alpha";
    V = cfg.volume.value_or(1.0);
  } else {
    const Potential f = potential_of(cfg);
    if (!a.has("volumes")) bad("volumes: required with --potential");
    if (cfg.volume) bad("volume: the scan control is the volume");
    family = volume_family(f, cfg.defects, cfg.sums);
    controls = a.reals("volumes", {});
    label = "V";
  }
  if (controls.empty()) bad("scan: no control values");
  PhaseScanOptions opt;
  opt.warm_start = !a.flag("cold");
  opt.boundary_bisections = a.integer("bisect", 0);
  if (opt.boundary_bisections < 0) bad("bisect: must be >= 0");
  const auto rows = phase_scan(family, controls, V, grid, sense_of(a), opt);

  nlohmann::json res;
  res["rows"] = rows;
  res["shapes"] = nlohmann::json::array();
  for (ShapeClass s : shape_sequence(rows)) res["shapes"].push_back(to_string(s));
  if (!cfg.out_dir.empty()) {
    std::ostringstream csv, svg;
    write_csv(csv, rows);
    write_phase_svg(svg, rows, label);
    write_file(out_path(cfg, "scan.csv"), csv.str());
    write_file(out_path(cfg, "scan.svg"), svg.str());
    res["artifacts"] = {out_path(cfg, "scan.csv"), out_path(cfg, "scan.svg")};
  }
  emit(out, cfg, "result", res);
  return kOk;
}

DefectSpec spec_or(const RunConfig& cfg, std::vector<DefectEntry> def) {
  return cfg.defects.empty() ? DefectSpec(std::move(def)) : cfg.defects;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, const GridSpec& grid) {
  const Args a{cfg.args};
  ExperimentContext ctx;
  ctx.seed = cfg.seed;
  ctx.workers = cfg.workers;
  ctx.grid = grid;
  ctx.out_dir = cfg.out_dir;
  ctx.tol = cfg.sums.tol;
  const std::string name = a.text("experiment", "");
  const int n_random = a.integer("n_random", 50);
  if (n_random < 1) bad("n_random: must be >= 1");

  ExperimentReport r;
  if (name == "thm0") {
    r = run_thm0(a.integer("k", 2), a.real("a", 0.1), a.reals("alphas", {0.02, 0.05, 0.1}), ctx);
  } else if (name == "thm02") {
    r = run_thm02(spec_or(cfg, {{2, 1.0, {{1, 1}}}}), n_random, ctx);
  } else if (name == "thm2ip") {
    r = run_thm2ip(spec_or(cfg, {{2, 1.0, {}}, {3, 1.0, {}}}), a.real("s", 2.0), n_random, ctx);
  } else if (name == "thm3lj") {
    const Potential f = parse_potential(cfg.potential.value_or("lj:c1=1,c2=1,x1=3,x2=6"));
    const LennardJones* lj = f.get<LennardJones>();
    if (!lj) bad("potential: thm3lj needs an lj potential");
    const DefectSpec spec = spec_or(cfg, {{2, 1.0, {}}});
    std::vector<double> vols = a.reals("volumes", {});
    if (vols.empty()) {
      if (lj_regime(*lj, spec) == LJRegime::Case1) {
        const double vk = V_kappa(*lj, spec, 2);
        vols = {0.5 * vk, 8 * vk};
      } else {
        vols = {0.5, 5.0, 50.0};
      }
    }
    r = run_thm3lj(*lj, spec, vols, ctx);
  } else if (name == "kagome") {
    r = run_kagome(a.real("radius", 30.0), ctx);
  } else if (name == "ionic") {
    r = run_ionic(a.reals("alphas", {0.5, 1.0, 2.0}), ctx);
  } else if (name == "jacobi") {
    r = run_jacobi_suite(n_random, a.reals("ys", {0.2, 0.5, 1.0, 2.0, 5.0}), ctx);
  } else if (name == "laplace") {
    r = run_laplace_suite(a.integer("n_random", 20), ctx);
  } else if (name == "phase") {
    r = run_phase(a.reals("alphas", parse_reals("0.1:4:64")), a.real("a", 0.1), ctx);
  } else {
    bad("experiment: unknown '" + name + "'");
  }
  finish(r, ctx);
  emit(out, cfg, "report", r.results());
  return r.passed() ? kOk : kCheckFailed;
}

int cmd_render(const RunConfig& cfg, std::ostream& out) {
  const Args a{cfg.args};
  const Lattice L = cfg.lattice.build(cfg.volume);
  cfg.defects.check_dimension(L.dim());
  const double radius = a.real("radius", 5.0);
  if (!(radius > 0.0)) bad("radius: must be positive");
  const std::string format = a.text("format", "svg");
  if (format != "svg" && format != "csv") bad("format: expected svg or csv");
  const ChargedPointSet ps = materialize(L, cfg.defects, radius, cfg.sums.max_points);
  std::ostringstream body;
  if (format == "svg") {
    if (L.dim() != 2) bad("render: svg needs a two-dimensional lattice");
    write_svg(body, ps);
  } else {
    write_csv(body, ps);
  }
  if (cfg.out_dir.empty()) {
    out << body.str();
    return kOk;
  }
  int pos = 0, neg = 0, vac = 0;
  for (const auto& p : ps.points) (p.charge > 0 ? pos : p.charge < 0 ? neg : vac)++;
  const std::string path = out_path(cfg, "patch." + format);
  write_file(path, body.str());
  emit(out, cfg, "result", {{"points", ps.points.size()}, {"positive", pos}, {"negative", neg}, {"vacant", vac},
                            {"artifact", path}});
  return kOk;
}

std::string flag_name(const char* arg) {
  std::string s = arg;
  std::replace(s.begin(), s.end(), '_', '-');
  return "--" + s;
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    GridSpec grid = cfg.grid;
    grid.workers = cfg.workers;
    if (cfg.command == "energy") return cmd_energy(cfg, out);
    if (cfg.command == "theta") return cmd_theta(cfg, out);
    if (cfg.command == "zeta") return cmd_zeta(cfg, out);
    if (cfg.command == "minimize") return cmd_minimize(cfg, out, grid);
    if (cfg.command == "scan") return cmd_scan(cfg, out, grid);
    if (cfg.command == "verify") return cmd_verify(cfg, out, grid);
    return cmd_render(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::CapExceeded ? kCapExceeded : kInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice energies with periodic defects", "latdef"};
  app.require_subcommand(0, 1);

  std::string config_file, potential, defects, lattice, basis, param, out_dir;
  double volume = 0, tol = 0, y_max = 0, nm_tol = 0;
  std::int64_t max_points = 0;
  std::uint64_t seed = 0;
  int workers = 0, nx = 0, ny = 0;
  app.add_option("--config", config_file, "run-config JSON file");
  app.add_option("--potential", potential, "ip:s=.. | gauss:alpha=.. | yuk:sigma=..,s=.. | lj:c1=..,c2=..,x1=..,x2=..");
  app.add_option("--defects,--spec", defects, "defect spec: JSON file or inline JSON");
  auto* o_named = app.add_option("--lattice", lattice, "Z1 | Z2 | Z3 | A2 | D3 | D3star");
  auto* o_basis = app.add_option("--basis", basis, "basis vectors, e.g. \"1,0;0.5,0.8\"");
  auto* o_param = app.add_option("--param", param, "x,y in the upper half plane");
  o_named->excludes(o_basis)->excludes(o_param);
  o_basis->excludes(o_param);
  app.add_option("--volume", volume, "cell volume");
  app.add_option("--tol", tol, "absolute truncation error target");
  app.add_option("--max-points", max_points, "point cap per sum");
  app.add_option("--workers", workers, "threads for grid scans");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--nx", nx, "grid columns");
  app.add_option("--ny", ny, "grid rows");
  app.add_option("--y-max", y_max, "grid cap on y");
  app.add_option("--nm-tol", nm_tol, "Nelder-Mead tolerance");

  std::map<std::string, std::map<std::string, std::string>> texts;
  std::map<std::string, std::map<std::string, bool>> flags;
  for (const auto& def : detail::commands()) {
    CLI::App* sub = app.add_subcommand(def.name, def.help);
    sub->fallthrough();
    for (const auto& arg : def.args) {
      if (arg.type == ArgType::Flag) {
        sub->add_flag(flag_name(arg.name), flags[def.name][arg.name], arg.help);
      } else if (std::string(def.name) == "verify" && std::string(arg.name) == "experiment") {
        sub->add_option(arg.name, texts[def.name][arg.name], arg.help);
      } else {
        sub->add_option(flag_name(arg.name), texts[def.name][arg.name], arg.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInvalid;
  }

  try {
    RunConfig cfg;
    if (!config_file.empty()) cfg = RunConfig::from_json(parse_json(read_text(config_file), config_file));
    const auto given = [&](const char* name) { return app.count(name) > 0; };

    const detail::CommandDef* def = nullptr;
    for (const CLI::App* sub : app.get_subcommands()) def = detail::find_command(sub->get_name());
    if (def) {
      if (!cfg.command.empty() && cfg.command != def->name) cfg.args = nlohmann::json::object();
      cfg.command = def->name;
    }
    if (cfg.command.empty()) bad("no command given; see --help");
    if (!def && !(def = detail::find_command(cfg.command))) bad("command: unknown '" + cfg.command + "'");

    if (given("--potential")) cfg.potential = potential;
    if (given("--defects")) cfg.defects = DefectSpec::from_json(json_arg(defects, "defects"));
    if (given("--lattice")) cfg.lattice = LatticeSpec{parse_named_lattice(lattice), {}, {}};
    if (given("--param")) {
      const auto v = numbers(param, 2, "param");
      Param2D p;
      p.x = v[0];
      p.y = v[1];
      cfg.lattice = LatticeSpec{{}, {}, p};
    }
    if (given("--basis")) {
      std::vector<std::vector<double>> cols;
      std::size_t pos = 0;
      while (true) {
        const auto next = basis.find(';', pos);
        cols.push_back(numbers(basis.substr(pos, next - pos), 0, "basis"));
        if (next == std::string::npos) break;
        pos = next + 1;
      }
      cfg.lattice = LatticeSpec::from_json({{"basis", cols}});
    }
    if (given("--volume")) cfg.volume = volume;
    if (given("--tol")) cfg.sums.tol = tol;
    else if (config_file.empty() && cfg.command == "verify") cfg.sums.tol = ExperimentContext{}.tol;
    if (given("--max-points")) cfg.sums.max_points = max_points;
    if (given("--workers")) cfg.workers = workers;
    if (given("--seed")) cfg.seed = seed;
    if (given("--out")) cfg.out_dir = out_dir;
    if (given("--nx")) cfg.grid.n_x = nx;
    if (given("--ny")) cfg.grid.n_y = ny;
    if (given("--y-max")) cfg.grid.y_max = y_max;
    if (given("--nm-tol")) cfg.grid.nm_tol = nm_tol;

    if (const CLI::App* sub = app.get_subcommand_ptr(def->name).get(); sub && sub->parsed()) {
      for (const auto& arg : def->args) {
        const std::string opt = (cfg.command == "verify" && std::string(arg.name) == "experiment")
                                    ? std::string(arg.name)
                                    : flag_name(arg.name);
        if (sub->count(opt) == 0) continue;
        const std::string& t = texts[def->name][arg.name];
        switch (arg.type) {
          case ArgType::Real: cfg.args[arg.name] = numbers(t, 1, arg.name)[0]; break;
          case ArgType::Int: {
            const double v = numbers(t, 1, arg.name)[0];
            if (v != std::floor(v) || std::abs(v) > 1e9) bad(fmt::format("{}: expected an integer", arg.name));
            cfg.args[arg.name] = static_cast<std::int64_t>(v);
            break;
          }
          case ArgType::Text: cfg.args[arg.name] = t; break;
          case ArgType::Reals: cfg.args[arg.name] = numbers(t, 0, arg.name); break;
          case ArgType::Flag: cfg.args[arg.name] = flags[def->name][arg.name]; break;
        }
      }
    }
    if (cfg.command == "verify" && !cfg.args.contains("experiment")) bad("verify: experiment name required");
    return execute(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::CapExceeded ? kCapExceeded : kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
}

}  // namespace latdef::cli
