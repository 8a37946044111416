#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "latdef/lattice.hpp"
#include "latdef/optimize.hpp"
#include "latdef/potential.hpp"
#include "latdef/sums.hpp"

namespace latdef::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kInvalid = 2, kCapExceeded = 3 };

/// Exactly one of named / basis / param is set.
struct LatticeSpec {
  std::optional<NamedLattice> named;
  std::optional<Matrix> basis;  // columns are basis vectors
  std::optional<Param2D> param;

  /// With a volume the lattice is rescaled to it.
  Lattice build(std::optional<double> volume) const;
  nlohmann::json to_json() const;
  static LatticeSpec from_json(const nlohmann::json& j);
};

/// Everything a command needs. The JSON form is what --config reads and what
/// each command echoes back under "config".
struct RunConfig {
  std::string command;
  std::optional<std::string> potential;
  DefectSpec defects;
  LatticeSpec lattice;
  std::optional<double> volume;
  SumConfig sums;
  GridSpec grid;
  std::string out_dir;
  std::uint64_t seed = 1;
  int workers = 1;
  nlohmann::json args = nlohmann::json::object();  // command-specific values

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  void validate() const;
};

/// "a:b:n" (n log-spaced points for a, b > 0, linear otherwise) or "v1,v2,...".
std::vector<double> parse_reals(const std::string& text);

/// Parses argv and runs the command. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs a validated config.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace latdef::cli
