#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "latdef/optimize.hpp"
#include "latdef/potential.hpp"
#include "latdef/sums.hpp"

namespace latdef {

struct Check {
  std::string description;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
};

struct ExperimentReport {
  std::string name;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<Check> checks;
  nlohmann::json measurements = nlohmann::json::object();  // recorded, not asserted
  std::vector<std::string> artifacts;
  double runtime_seconds = 0.0;

  bool passed() const;
  void add(std::string description, bool pass, double measured, double tolerance);
  /// Everything except the runtime.
  nlohmann::json results() const;
  nlohmann::json to_json() const;
};

struct ExperimentContext {
  std::uint64_t seed = 1;
  int workers = 1;
  GridSpec grid;         // y_max is raised per experiment where noted
  std::string out_dir;   // empty: no files written
  double tol = 1e-13;    // absolute sum tolerance for O(1) energies
};

/// Writes report.json into ctx.out_dir (if set) and records it as an artifact.
void finish(ExperimentReport& r, const ExperimentContext& ctx);

/// Gaussian energy with the sublattice kL removed a times (d = 2). For a > 0
/// checks that some tested alpha admits a lattice below A2 and that the
/// ratio statistic shrinks with alpha; for a < 0 checks A2 grid-minimality.
ExperimentReport run_thm0(int k, double a, const std::vector<double>& alphas, const ExperimentContext& ctx = {});

/// Throws ShiftConditionViolated unless every shift m of every entry has
/// m_i = k/2 mod k, i.e. m/k = c_L modulo the lattice.
void check_shift_condition(const DefectSpec& spec);

/// Shifted spec satisfying the condition above (d = 2).
ExperimentReport run_thm02(const DefectSpec& spec, int n_random, const ExperimentContext& ctx = {});

/// Inverse power r^{-s} with a non-shifted spec.
ExperimentReport run_thm2ip(const DefectSpec& spec, double s, int n_random, const ExperimentContext& ctx = {});

ExperimentReport run_thm3lj(const LennardJones& f, const DefectSpec& spec, const std::vector<double>& volumes,
                            const ExperimentContext& ctx = {});

ExperimentReport run_kagome(double radius, const ExperimentContext& ctx = {});

ExperimentReport run_ionic(const std::vector<double>& alphas, const ExperimentContext& ctx = {});

ExperimentReport run_jacobi_suite(int n_random, const std::vector<double>& ys, const ExperimentContext& ctx = {});

/// Closed-form densities against numerical Laplace transforms.
ExperimentReport run_laplace_suite(int n_random, const ExperimentContext& ctx = {});

/// Shape sequences of the two Gaussian defect families over alpha.
ExperimentReport run_phase(const std::vector<double>& alphas, double a, const ExperimentContext& ctx = {});

}  // namespace latdef
