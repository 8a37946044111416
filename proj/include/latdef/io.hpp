#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "latdef/optimize.hpp"
#include "latdef/sums.hpp"

namespace latdef {

void to_json(nlohmann::json& j, const Param2D& p);
void to_json(nlohmann::json& j, const EnergyValue& v);
void to_json(nlohmann::json& j, const MinimizeResult& r);
void to_json(nlohmann::json& j, const OrthoResult& r);
void to_json(nlohmann::json& j, const PhaseScanRow& r);

void write_csv(std::ostream& os, const MinimizeResult& r);
void write_csv(std::ostream& os, const std::vector<PhaseScanRow>& rows);

/// Shape class bands along a log control axis.
void write_phase_svg(std::ostream& os, const std::vector<PhaseScanRow>& rows,
                     const std::string& control_label = "alpha");

/// Writes text to path, creating parent directories.
void write_file(const std::string& path, const std::string& text);

}  // namespace latdef
