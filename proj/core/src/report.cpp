#include "fvklab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fvklab/digest.hpp"
#include "fvklab/errors.hpp"
#include "json.hpp"

namespace fvklab {

namespace {

using nlohmann::json;

constexpr const char* kSchemaPrefix = "fvklab.";

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json manifest_stub(const RunManifest& m) {
  return {{"manifest", m.hash()}, {"version", m.version}, {"command", m.command}};
}

}  // namespace

std::string version_string() { return "fvklab 0.1.0"; }

std::string RunManifest::hash() const {
  Fnv1a f;
  f.add(command).add(std::string_view("\0", 1)).add(config).add(std::string_view("\0", 1));
  for (auto s : seeds) f.add(s);
  f.add(version);
  return f.hex();
}

std::string RunManifest::to_json() const {
  json j = {{"schema", std::string(kSchemaPrefix) + "manifest/1"},
            {"hash", hash()},
            {"command", command},
            {"config", config},
            {"seeds", seeds},
            {"outputs", outputs},
            {"wall_seconds", wall_seconds},
            {"version", version}};
  return j.dump(2) + "\n";
}

void write_csv(std::ostream& out, const RunManifest& m, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  out << "# " << m.version << "\n# manifest " << m.hash() << "\n# command " << m.command << "\n";
  std::istringstream cfg(m.config);
  for (std::string line; std::getline(cfg, line);)
    if (!line.empty()) out << "# config " << line << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw RangeError("write_csv: row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << num(row[i]);
    out << "\n";
  }
}

std::string energy_json(const EnergyBreakdown& e, const RunManifest& m) {
  json j = manifest_stub(m);
  j["schema"] = std::string(kSchemaPrefix) + "energy/1";
  j["total"] = e.total;
  j["membrane"] = e.membrane;
  j["bending"] = e.bending;
  j["substrate"] = e.substrate;
  j["mean_part"] = e.mean_part;
  j["wr_integral"] = e.wr_integral;
  j["remainder"] = std::vector<double>(e.remainder.begin(), e.remainder.end());
  j["identity_defect"] = e.identity_defect();
  return j.dump(2) + "\n";
}

std::string lemma_json(const std::vector<LemmaCheckResult>& results, const RunManifest& m) {
  json j = manifest_stub(m);
  j["schema"] = std::string(kSchemaPrefix) + "lemma/1";
  json arr = json::array();
  std::size_t failures = 0;
  double worst = INFINITY;
  for (const auto& r : results) {
    arr.push_back({{"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}, {"pass", r.pass},
                   {"inputs_digest", r.inputs_digest}});
    if (!r.pass) ++failures;
    if (r.rhs > 0.0) worst = std::min(worst, r.lhs / r.rhs);
  }
  j["cases"] = arr;
  j["failures"] = failures;
  j["min_ratio"] = std::isfinite(worst) ? json(worst) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string scaling_json(const ScalingReport& r, const RunManifest& m) {
  json j = manifest_stub(m);
  j["schema"] = std::string(kSchemaPrefix) + "scaling/1";
  j["mode"] = to_string(r.mode);
  j["beta"] = r.params.beta;
  j["alpha_s"] = r.params.alpha_s;
  j["model"] = to_string(r.model);
  j["slope"] = r.slope;
  j["slope_ci95"] = r.slope_ci;
  j["intercept"] = r.intercept;
  j["residual"] = r.residual;
  j["theory_slope"] = r.theory;
  j["log_model"] = {{"slope", r.log_fit.slope},
                    {"intercept", r.log_fit.intercept},
                    {"log_coeff", r.log_fit.log_coeff},
                    {"residual", r.log_fit.residual}};
  json pts = json::array();
  for (auto [h, v] : r.points) pts.push_back({h, v});
  j["points"] = pts;
  return j.dump(2) + "\n";
}

std::string scaling_svg(const ScalingReport& r, const RunManifest& m) {
  if (r.points.empty()) throw RangeError("scaling_svg: no points");
  const double W = 640, H = 480, L = 80, Rm = 20, T = 40, B = 60;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (auto [h, v] : r.points) {
    x0 = std::min(x0, std::log10(h));
    x1 = std::max(x1, std::log10(h));
    y0 = std::min(y0, std::log10(v));
    y1 = std::max(y1, std::log10(v));
  }
  // Reference line with the theoretical slope through the mean point.
  double mx = 0.0, my = 0.0;
  for (auto [h, v] : r.points) {
    mx += std::log10(h);
    my += std::log10(v);
  }
  mx /= static_cast<double>(r.points.size());
  my /= static_cast<double>(r.points.size());
  auto theory = [&](double x) { return my + r.theory * (x - mx); };
  auto fitted = [&](double x) { return (r.intercept + r.slope * x * std::log(10.0)) / std::log(10.0); };
  for (double x : {x0, x1}) {
    y0 = std::min({y0, theory(x), fitted(x)});
    y1 = std::max({y1, theory(x), fitted(x)});
  }
  if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - Rm); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<!-- manifest " << m.hash() << " -->\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - Rm << "\" height=\""
    << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(x0)); d <= static_cast<int>(std::floor(x1)); ++d)
    s << "<text x=\"" << px(d) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">1e"
      << d << "</text>\n";
  for (int d = static_cast<int>(std::ceil(y0)); d <= static_cast<int>(std::floor(y1)); ++d)
    s << "<text x=\"" << L - 6 << "\" y=\"" << py(d) + 4 << "\" text-anchor=\"end\">1e" << d
      << "</text>\n";
  s << "<text x=\"" << (L + W - Rm) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">h</text>\n";
  s << "<text x=\"" << L << "\" y=\"" << T - 12 << "\">" << to_string(r.mode) << ", beta = "
    << r.params.beta << ": slope " << num(std::round(r.slope * 1e4) / 1e4) << " (theory "
    << num(std::round(r.theory * 1e4) / 1e4) << ")</text>\n";
  s << "<line x1=\"" << px(x0) << "\" y1=\"" << py(theory(x0)) << "\" x2=\"" << px(x1)
    << "\" y2=\"" << py(theory(x1)) << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
  s << "<line x1=\"" << px(x0) << "\" y1=\"" << py(fitted(x0)) << "\" x2=\"" << px(x1)
    << "\" y2=\"" << py(fitted(x1)) << "\" stroke=\"steelblue\"/>\n";
  for (auto [h, v] : r.points)
    s << "<circle cx=\"" << px(std::log10(h)) << "\" cy=\"" << py(std::log10(v))
      << "\" r=\"4\" fill=\"firebrick\"/>\n";
  s << "</svg>\n";
  return s.str();
}

std::vector<std::vector<double>> xi_samples(const SheetState& state, double R, int n_theta) {
  if (n_theta < 1) throw RangeError("xi_samples: need at least one angle");
  state.validate();
  const auto nodes = state.grid().nodes();
  std::vector<std::vector<double>> rows;
  rows.reserve(nodes.size() * static_cast<std::size_t>(n_theta));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TrigSeries w = state.w.slice(i);
    const double cap = nodes[i] * nodes[i] / (2.0 * R);
    for (int j = 0; j < n_theta; ++j) {
      const double th = 2.0 * M_PI * j / n_theta;
      rows.push_back({nodes[i], th, w.eval(th) - cap});
    }
  }
  return rows;
}

std::vector<std::pair<double, double>> read_points_csv(std::istream& in) {
  std::vector<std::pair<double, double>> pts;
  bool header = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string a, b;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ','))
      throw RangeError("read_points_csv: malformed row '" + line + "'");
    try {
      pts.emplace_back(std::stod(a), std::stod(b));
    } catch (const std::exception&) {
      throw RangeError("read_points_csv: malformed row '" + line + "'");
    }
  }
  return pts;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw RangeError("cannot write " + path.string());
  f << text;
}

}  // namespace fvklab
