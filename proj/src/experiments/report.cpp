#include <algorithm>

#include "experiments/common.hpp"

namespace latdef {

bool ExperimentReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void ExperimentReport::add(std::string description, bool pass, double measured, double tolerance) {
  checks.push_back({std::move(description), pass, measured, tolerance});
}

nlohmann::json ExperimentReport::results() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks)
    cs.push_back({{"description", c.description},
                  {"pass", c.pass},
                  {"measured", c.measured},
                  {"tolerance", c.tolerance}});
  return {{"name", name}, {"parameters", parameters}, {"checks", cs},
          {"measurements", measurements}, {"passed", passed()}};
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j = results();
  j["artifacts"] = artifacts;
  j["runtime_seconds"] = runtime_seconds;
  return j;
}

void finish(ExperimentReport& r, const ExperimentContext& ctx) {
  if (ctx.out_dir.empty()) return;
  const std::string path = ctx.out_dir + "/report.json";
  r.artifacts.push_back(path);
  write_file(path, r.to_json().dump(2) + "\n");
}

}  // namespace latdef
