#include "sphmax/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace sphmax {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

void write_scan_csv(const ExperimentReport& rep, std::ostream& os) {
  os << "R,value,std_error\n";
  for (const auto& p : rep.points) os << num(p.R) << ',' << num(p.value) << ',' << num(p.std_error) << '\n';
}

nlohmann::json scan_summary(const ExperimentReport& rep) {
  nlohmann::json j;
  j["experiment"] = rep.name;
  j["config"] = rep.config;
  j["slope"] = rep.fit.points.empty() ? nlohmann::json(nullptr) : nlohmann::json(rep.fit.slope);
  j["intercept"] = rep.fit.points.empty() ? nlohmann::json(nullptr) : nlohmann::json(rep.fit.intercept);
  j["r_squared"] = rep.fit.points.empty() ? nlohmann::json(nullptr) : nlohmann::json(rep.fit.r_squared);
  j["expected_slope"] = rep.expected_slope;
  j["tolerance"] = rep.tolerance;
  j["pass"] = rep.status == Status::Pass;
  j["status"] = std::string(to_string(rep.status));
  j["message"] = rep.message;
  bool unreliable = false;
  for (const auto& p : rep.points) unreliable = unreliable || p.unreliable;
  j["unreliable"] = unreliable;
  if (!rep.extra.empty()) j["extra"] = rep.extra;
  return j;
}

void write_scan_svg(const ExperimentReport& rep, std::ostream& os) {
  const double w = 640, h = 440, left = 70, right = 20, top = 30, bottom = 50;
  std::vector<double> xs, ys;
  for (const auto& p : rep.points) {
    if (!(p.value > 0.0)) continue;
    xs.push_back(std::log10(p.R));
    ys.push_back(std::log10(p.value));
    if (p.std_error > 0.0 && p.value - p.std_error > 0.0) {
      ys.push_back(std::log10(p.value + p.std_error));
      ys.push_back(std::log10(p.value - p.std_error));
    }
  }
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
     << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (xs.empty()) {
    os << "<text x=\"" << w / 2 << "\" y=\"" << h / 2 << "\" text-anchor=\"middle\">no positive values</text>\n</svg>\n";
    return;
  }
  double x0 = *std::min_element(xs.begin(), xs.end()), x1 = *std::max_element(xs.begin(), xs.end());
  double y0 = *std::min_element(ys.begin(), ys.end()), y1 = *std::max_element(ys.begin(), ys.end());
  if (x1 - x0 < 1e-9) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-9) { y0 -= 0.5; y1 += 0.5; }
  const double padx = 0.05 * (x1 - x0), pady = 0.08 * (y1 - y0);
  x0 -= padx; x1 += padx; y0 -= pady; y1 += pady;
  auto px = [&](double lx) { return left + (lx - x0) / (x1 - x0) * (w - left - right); };
  auto py = [&](double ly) { return h - bottom - (ly - y0) / (y1 - y0) * (h - top - bottom); };

  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w - left - right << "\" height=\""
     << h - top - bottom << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int d = static_cast<int>(std::ceil(x0)); d <= static_cast<int>(std::floor(x1)); ++d)
    os << "<text x=\"" << px(d) << "\" y=\"" << h - bottom + 18 << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  for (int d = static_cast<int>(std::ceil(y0)); d <= static_cast<int>(std::floor(y1)); ++d)
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(d) + 4 << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  os << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\">R</text>\n";
  os << "<text x=\"16\" y=\"" << (top + h - bottom) / 2 << "\" transform=\"rotate(-90 16 " << (top + h - bottom) / 2
     << ")\" text-anchor=\"middle\">value</text>\n";

  if (!rep.fit.points.empty()) {
    const double a = rep.fit.points.front().first / std::log(10.0), b = rep.fit.points.back().first / std::log(10.0);
    auto line = [&](double slope, double intercept_log10, const char* colour, const char* dash) {
      os << "<line x1=\"" << px(a) << "\" y1=\"" << py(intercept_log10 + slope * a) << "\" x2=\"" << px(b)
         << "\" y2=\"" << py(intercept_log10 + slope * b) << "\" stroke=\"" << colour << "\"" << dash << "/>\n";
    };
    const double icpt = rep.fit.intercept / std::log(10.0);
    line(rep.fit.slope, icpt, "#c33", "");
    // reference slope through the first point
    const double ya = rep.fit.points.front().second / std::log(10.0);
    line(rep.expected_slope, ya - rep.expected_slope * a, "#888", " stroke-dasharray=\"5,4\"");
  }
  for (const auto& p : rep.points) {
    if (!(p.value > 0.0)) continue;
    const double cx = px(std::log10(p.R)), cy = py(std::log10(p.value));
    if (p.std_error > 0.0 && p.value - p.std_error > 0.0)
      os << "<line x1=\"" << cx << "\" y1=\"" << py(std::log10(p.value + p.std_error)) << "\" x2=\"" << cx
         << "\" y2=\"" << py(std::log10(p.value - p.std_error)) << "\" stroke=\"#236\"/>\n";
    os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"3.5\" fill=\"" << (p.unreliable ? "#e90" : "#236")
       << "\"/>\n";
  }
  os << "<text x=\"" << left + 8 << "\" y=\"" << top - 10 << "\">" << rep.name << ": slope "
     << (rep.fit.points.empty() ? std::string("n/a") : short_num(rep.fit.slope)) << " (expected "
     << short_num(rep.expected_slope) << "), " << to_string(rep.status) << "</text>\n";
  os << "</svg>\n";
}

nlohmann::json to_json(const Lemma2Report& rep) {
  return {{"r1", rep.r1},       {"r2", rep.r2},       {"C", rep.C},      {"samples", rep.samples},
          {"max_ratio", rep.max_ratio}, {"bound", rep.bound}, {"pass", rep.pass}};
}

nlohmann::json to_json(const SliceSurvey& rep) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"m", c.c.m},
                      {"n", c.c.n},
                      {"k", c.c.k},
                      {"integrand", c.integrand},
                      {"direct", c.direct},
                      {"direct_se", c.direct_se},
                      {"sliced", c.sliced},
                      {"sliced_se", c.sliced_se},
                      {"sigmas", std::isfinite(c.sigmas) ? nlohmann::json(c.sigmas) : nlohmann::json("inf")},
                      {"pass", c.pass}});
  return {{"checks", checks},
          {"constant_value", rep.constant_value},
          {"constant_se", rep.constant_se},
          {"constant_pass", rep.constant_pass},
          {"pass", rep.pass}};
}

nlohmann::json to_json(const DominationSurvey& rep) {
  return {{"max_ratio_per_k", rep.max_ratio_per_k},
          {"max_ratio", rep.max_ratio},
          {"constant_ratio", rep.constant_ratio},
          {"bound", rep.bound},
          {"evaluations", rep.evaluations},
          {"unreliable", rep.unreliable},
          {"pass", rep.pass}};
}

nlohmann::json to_json(const DivergenceCheck& rep) {
  return {{"R", rep.R},
          {"cuts", rep.cuts},
          {"values", rep.values},
          {"std_errors", rep.std_errors},
          {"increasing", rep.increasing},
          {"min_growth", rep.min_growth}};
}

}  // namespace sphmax
