#include "latdef/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

namespace latdef {

void to_json(nlohmann::json& j, const Param2D& p) { j = {{"x", p.x}, {"y", p.y}, {"V", p.V}}; }

void to_json(nlohmann::json& j, const EnergyValue& v) {
  j = {{"value", v.value},
       {"tail_bound", v.tail_bound},
       {"rounding_bound", v.rounding_bound},
       {"cutoff_radius", v.cutoff_radius},
       {"points_used", v.points_used},
       {"capped", v.capped}};
}

void to_json(nlohmann::json& j, const MinimizeResult& r) {
  j = {{"best_param", r.best_param},     {"best_value", r.best_value},
       {"shape", to_string(r.shape)},    {"runner_up_gap", r.runner_up_gap},
       {"certified", r.certified},       {"unbounded", r.unbounded},
       {"grid_param", r.grid_param},     {"grid_value", r.grid_value},
       {"evaluations", r.evaluations}};
}

void to_json(nlohmann::json& j, const OrthoResult& r) {
  j = {{"sides", r.sides},
       {"log_aspects", r.log_aspects},
       {"best_value", r.best_value},
       {"runner_up_gap", r.runner_up_gap},
       {"is_cubic", r.is_cubic},
       {"certified", r.certified}};
}

void to_json(nlohmann::json& j, const PhaseScanRow& r) {
  j = {{"control", r.control}, {"ok", r.ok}};
  if (r.ok) {
    j["best_param"] = r.best_param;
    j["shape"] = to_string(r.shape);
    j["value"] = r.value;
    j["unbounded"] = r.unbounded;
  } else {
    j["error"] = r.error;
  }
}

void write_csv(std::ostream& os, const MinimizeResult& r) {
  os << "x,y,V,value,shape,runner_up_gap,certified,unbounded\n";
  os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g},{},{}\n", r.best_param.x, r.best_param.y,
                    r.best_param.V, r.best_value, to_string(r.shape), r.runner_up_gap, r.certified ? 1 : 0,
                    r.unbounded ? 1 : 0);
}

void write_csv(std::ostream& os, const std::vector<PhaseScanRow>& rows) {
  os << "control,x,y,V,value,shape,unbounded,error\n";
  for (const auto& r : rows) {
    if (r.ok)
      os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{},\n", r.control, r.best_param.x,
                        r.best_param.y, r.best_param.V, r.value, to_string(r.shape), r.unbounded ? 1 : 0);
    else
      os << fmt::format("{:.17g},,,,,,,\"{}\"\n", r.control, r.error);
  }
}

namespace {

const char* shape_color(ShapeClass s) {
  switch (s) {
    case ShapeClass::Triangular: return "#2e86c1";
    case ShapeClass::Rhombic: return "#28b463";
    case ShapeClass::Square: return "#f1c40f";
    case ShapeClass::Rectangular: return "#e67e22";
    case ShapeClass::Generic: return "#95a5a6";
  }
  return "#000000";
}

}  // namespace

void write_phase_svg(std::ostream& os, const std::vector<PhaseScanRow>& rows, const std::string& control_label) {
  const double W = 800, H = 140, left = 40, right = 760, top = 30, band = 50;
  std::vector<const PhaseScanRow*> ok;
  for (const auto& r : rows)
    if (r.ok) ok.push_back(&r);
  os << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n", W, H);
  os << fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", W, H);
  if (!ok.empty()) {
    const bool logx = ok.front()->control > 0.0;
    auto tr = [&](double c) { return logx ? std::log(c) : c; };
    const double c0 = tr(ok.front()->control), c1 = tr(ok.back()->control);
    auto X = [&](double c) { return c1 > c0 ? left + (right - left) * (tr(c) - c0) / (c1 - c0) : left; };
    for (std::size_t i = 0; i < ok.size(); ++i) {
      const double a = i == 0 ? X(ok[i]->control) : 0.5 * (X(ok[i - 1]->control) + X(ok[i]->control));
      const double b = i + 1 == ok.size() ? X(ok[i]->control) : 0.5 * (X(ok[i]->control) + X(ok[i + 1]->control));
      os << fmt::format("<rect x=\"{:.2f}\" y=\"{}\" width=\"{:.2f}\" height=\"{}\" fill=\"{}\"/>\n", a, top,
                        std::max(b - a, 0.5), band, shape_color(ok[i]->shape));
    }
    os << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">{:.4g}</text>\n", left, top + band + 18,
                      ok.front()->control);
    os << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{:.4g}</text>\n", right,
                      top + band + 18, ok.back()->control);
  }
  os << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n", W / 2,
                    top + band + 18, control_label);
  double lx = left;
  for (ShapeClass s : {ShapeClass::Triangular, ShapeClass::Rhombic, ShapeClass::Square, ShapeClass::Rectangular,
                       ShapeClass::Generic}) {
    os << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n", lx, H - 22,
                      shape_color(s));
    os << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>\n", lx + 14, H - 13, to_string(s));
    lx += 110;
  }
  os << "</svg>\n";
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  f << text;
}

}  // namespace latdef
