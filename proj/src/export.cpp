#include "cqstat/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cqstat {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::optional<double> parse_opt(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size()) throw std::runtime_error("bad CSV number '" + cell + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string_view regime_name(QnbdRegime r) {
  switch (r) {
    case QnbdRegime::classical: return "classical";
    case QnbdRegime::nonclassical: return "nonclassical";
    case QnbdRegime::boundary: return "boundary";
  }
  return "?";
}

json params_json(const SystemParams& p) {
  return {{"g", p.g},         {"kappa", p.kappa}, {"gamma", p.gamma},
          {"eta", p.eta},     {"delta", p.delta}, {"delta_a", p.delta_a},
          {"phi_z", p.phi_z}, {"n_max", p.n_max}, {"n_atoms", p.n_atoms}};
}

json qnbd_json(const QnbdParams& q) {
  return {{"s", q.s},
          {"p", q.p},
          {"normalization", q.normalization},
          {"n_cut", q.n_cut ? json(*q.n_cut) : json(nullptr)},
          {"regime", regime_name(q.regime)}};
}

json stats_json(const PhotonStatistics& s) {
  json j;
  j["mean_n"] = s.mean_n;
  j["second_factorial_moment"] = s.second_factorial_moment;
  j["g2"] = opt_json(s.g2);
  j["q"] = opt_json(s.q);
  j["classification"] = s.classification ? json(to_string(*s.classification)) : json(nullptr);
  j["pmf"] = s.pmf;
  json k = json::array();
  for (const auto& v : s.klyshko) k.push_back(opt_json(v));
  j["klyshko"] = k;
  if (s.dicke_populations) {
    json d;
    for (auto state : kDickeStates) d[std::string(to_string(state))] = (*s.dicke_populations)[static_cast<std::size_t>(state)];
    j["dicke_populations"] = d;
  } else {
    j["dicke_populations"] = nullptr;
  }
  return j;
}

json polyline_json(const Polyline& line) {
  json pts = json::array();
  for (const auto& p : line.points) pts.push_back({p[0], p[1]});
  return pts;
}

json config_json(const SweepConfig& c) {
  json axes = json::array();
  for (const auto& ax : c.axes) {
    axes.push_back({{"name", ax.name}, {"min", ax.min}, {"max", ax.max}, {"steps", ax.steps},
                    {"log", ax.log_spacing}});
  }
  json formats = json::array();
  for (auto f : c.outputs) formats.push_back(to_string(f));
  return {{"base", params_json(c.base)},
          {"axes", axes},
          {"contour_levels", c.contour_levels},
          {"outputs", formats},
          {"workers", c.workers},
          {"qnbd_fit", c.qnbd_fit},
          {"rel_tol", c.rel_tol},
          {"class_tol", c.class_tol}};
}

// Maps a value on a monotone axis to a fractional sample index.
double fractional_index(const std::vector<double>& axis, double v) {
  if (axis.size() < 2) return 0.0;
  const bool increasing = axis.back() >= axis.front();
  for (std::size_t k = 0; k + 1 < axis.size(); ++k) {
    const double a = axis[k], b = axis[k + 1];
    const bool inside = increasing ? (v >= a && v <= b) : (v <= a && v >= b);
    if (inside) return b == a ? static_cast<double>(k) : static_cast<double>(k) + (v - a) / (b - a);
  }
  return (increasing ? v < axis.front() : v > axis.front()) ? 0.0 : static_cast<double>(axis.size() - 1);
}

std::string rgb(double r, double g, double b) {
  auto c = [](double x) { return static_cast<int>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0)); };
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c(r), c(g), c(b));
  return buf;
}

// Blue for Q < 0, red for Q > 0, white at zero.
std::string diverging(double v, double scale) {
  if (!(scale > 0.0)) return "#ffffff";
  const double t = std::clamp(std::abs(v) / scale, 0.0, 1.0);
  return v < 0.0 ? rgb(1.0 - 0.85 * t, 1.0 - 0.6 * t, 1.0) : rgb(1.0, 1.0 - 0.75 * t, 1.0 - 0.8 * t);
}

struct Panel {
  double x0, y0, width, height;
  std::size_t nx, ny;
  [[nodiscard]] double cell_w() const { return width / static_cast<double>(nx); }
  [[nodiscard]] double cell_h() const { return height / static_cast<double>(ny); }
  // Centre of sample (i, j); j grows upwards.
  [[nodiscard]] double px(double fi) const { return x0 + (fi + 0.5) * cell_w(); }
  [[nodiscard]] double py(double fj) const { return y0 + height - (fj + 0.5) * cell_h(); }
};

void svg_cell(std::ostringstream& out, const Panel& p, std::size_t i, std::size_t j,
              const std::string& css_class, const std::string& fill) {
  out << "<rect class=\"" << css_class << "\" x=\"" << p.x0 + static_cast<double>(i) * p.cell_w()
      << "\" y=\"" << p.y0 + p.height - static_cast<double>(j + 1) * p.cell_h() << "\" width=\""
      << p.cell_w() << "\" height=\"" << p.cell_h() << "\" fill=\"" << fill << "\"/>\n";
}

void svg_polyline(std::ostringstream& out, const Panel& p, const std::vector<double>& xs,
                  const std::vector<double>& ys, const Polyline& line, const std::string& style) {
  out << "<polyline class=\"contour\" fill=\"none\" " << style << " points=\"";
  for (const auto& pt : line.points) {
    out << p.px(fractional_index(xs, pt[0])) << ',' << p.py(fractional_index(ys, pt[1])) << ' ';
  }
  out << "\"/>\n";
}

void svg_axes_labels(std::ostringstream& out, const Panel& p, const std::string& xlabel,
                     const std::string& ylabel, const std::string& title) {
  out << "<rect x=\"" << p.x0 << "\" y=\"" << p.y0 << "\" width=\"" << p.width << "\" height=\""
      << p.height << "\" fill=\"none\" stroke=\"#000\"/>\n";
  out << "<text x=\"" << p.x0 + p.width / 2 << "\" y=\"" << p.y0 - 8
      << "\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  out << "<text x=\"" << p.x0 + p.width / 2 << "\" y=\"" << p.y0 + p.height + 24
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
  if (!ylabel.empty()) {
    out << "<text x=\"" << p.x0 - 24 << "\" y=\"" << p.y0 + p.height / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " << p.x0 - 24 << ' '
        << p.y0 + p.height / 2 << ")\">" << ylabel << "</text>\n";
  }
}

std::string axis_label(const std::vector<double>& axis, const std::string& name) {
  if (axis.empty()) return name;
  std::ostringstream s;
  s << name << " [" << axis.front() << " .. " << axis.back() << "]";
  return s.str();
}

std::vector<std::filesystem::path> write_formats(
    const std::filesystem::path& dir, const std::string& stem, const std::vector<OutputFormat>& formats,
    const std::map<OutputFormat, std::function<std::string()>>& writers) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (auto f : formats) {
    const auto it = writers.find(f);
    if (it == writers.end()) continue;
    const auto path = dir / (stem + "." + std::string(to_string(f)));
    write_text_file(path, it->second());
    written.push_back(path);
  }
  return written;
}

}  // namespace

const std::vector<std::string>& grid_csv_columns() {
  static const std::vector<std::string> cols = {
      "axis1", "axis2", "mean_n",        "g2",         "q",        "classification", "s",
      "p",     "n_cut", "fidelity_qnbd", "n_max_used", "residual", "converged"};
  return cols;
}

std::string_view class_color(StatisticsClass c) {
  switch (c) {
    case StatisticsClass::antibunched: return "#2166ac";
    case StatisticsClass::coherent: return "#92c5de";
    case StatisticsClass::bunched: return "#fddbc7";
    case StatisticsClass::thermal: return "#f4a582";
    case StatisticsClass::superbunched: return "#b2182b";
  }
  return "#cccccc";
}

std::string grid_to_csv(const GridResult& result) {
  std::ostringstream out;
  const auto& cols = grid_csv_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
  out << '\n';
  for (const auto& rec : result.points) {
    const double a1 = rec.axis_values.size() > 0 ? rec.axis_values[0] : std::nan("");
    const double a2 = rec.axis_values.size() > 1 ? rec.axis_values[1] : std::nan("");
    out << fmt(a1) << ',' << fmt(a2) << ',';
    if (rec.stats) {
      out << fmt(rec.stats->mean_n) << ',' << fmt(rec.stats->g2) << ',' << fmt(rec.stats->q) << ','
          << (rec.stats->classification ? to_string(*rec.stats->classification) : "") << ',';
    } else {
      out << ",,,,";
    }
    if (rec.qnbd) {
      out << fmt(rec.qnbd->s) << ',' << fmt(rec.qnbd->p) << ','
          << (rec.qnbd->n_cut ? std::to_string(*rec.qnbd->n_cut) : "") << ',';
    } else {
      out << ",,,";
    }
    out << fmt(rec.fidelity_qnbd) << ',' << rec.n_max_used << ','
        << (rec.failed() && !rec.stats ? "" : fmt(rec.residual)) << ','
        << (rec.converged ? "true" : "false") << '\n';
  }
  return out.str();
}

std::vector<GridCsvRow> grid_rows_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  if (split_csv_line(line) != grid_csv_columns()) throw std::runtime_error("unexpected CSV header");
  std::vector<GridCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split_csv_line(line);
    if (c.size() != grid_csv_columns().size()) throw std::runtime_error("bad CSV row: " + line);
    GridCsvRow r;
    r.axis1 = parse_opt(c[0]);
    r.axis2 = parse_opt(c[1]);
    r.mean_n = parse_opt(c[2]);
    r.g2 = parse_opt(c[3]);
    r.q = parse_opt(c[4]);
    r.classification = c[5];
    r.s = parse_opt(c[6]);
    r.p = parse_opt(c[7]);
    if (!c[8].empty()) r.n_cut = std::stoi(c[8]);
    r.fidelity_qnbd = parse_opt(c[9]);
    r.n_max_used = std::stoi(c[10]);
    r.residual = parse_opt(c[11]);
    r.converged = c[12] == "true";
    rows.push_back(r);
  }
  return rows;
}

std::string grid_to_json(const GridResult& result) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = result.kind;
  j["config"] = config_json(result.config);
  json axes = json::array();
  for (std::size_t k = 0; k < result.axis_names.size(); ++k) {
    axes.push_back({{"name", result.axis_names[k]}, {"values", result.axis_values[k]}});
  }
  j["axes"] = axes;
  json points = json::array();
  for (std::size_t k = 0; k < result.points.size(); ++k) {
    const auto& rec = result.points[k];
    json p;
    p["index"] = k;
    p["axis_values"] = rec.axis_values;
    p["params"] = params_json(rec.params);
    p["status"] = rec.failed() ? "error" : "ok";
    p["error_class"] = rec.failed() ? json(rec.error_class) : json(nullptr);
    p["error_message"] = rec.failed() ? json(rec.error_message) : json(nullptr);
    p["stats"] = rec.stats ? stats_json(*rec.stats) : json(nullptr);
    p["qnbd"] = rec.qnbd ? qnbd_json(*rec.qnbd) : json(nullptr);
    p["fidelity_qnbd"] = opt_json(rec.fidelity_qnbd);
    p["n_max_used"] = rec.n_max_used;
    p["residual"] = rec.stats ? json(rec.residual) : json(nullptr);
    p["converged"] = rec.converged;
    p["solve_time"] = rec.solve_time;
    p["warnings"] = rec.warnings;
    points.push_back(std::move(p));
  }
  j["points"] = points;
  json contours = json::array();
  for (const auto& c : result.contours) {
    json lines = json::array();
    for (const auto& l : c.lines) lines.push_back(polyline_json(l));
    contours.push_back({{"field", "mean_n"}, {"level", c.level}, {"polylines", lines}});
  }
  j["contours"] = contours;
  j["failures"] = result.failures();
  return j.dump(1);
}

std::string grid_to_svg(const GridResult& result) {
  const std::size_t nx = result.axis_values.empty() ? 1 : result.axis_values[0].size();
  const std::size_t ny = result.axis_values.size() == 2 ? result.axis_values[1].size() : 1;
  const double panel_h = ny == 1 ? 60.0 : 360.0;
  const Panel left{70, 40, 360, panel_h, nx, ny};
  const Panel right{520, 40, 360, panel_h, nx, ny};
  const double height = panel_h + 150;

  double q_scale = 0.0;
  for (const auto& rec : result.points) {
    if (rec.stats && rec.stats->q) q_scale = std::max(q_scale, std::abs(*rec.stats->q));
  }

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"940\" height=\"" << height
      << "\" viewBox=\"0 0 940 " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out << "<g id=\"g2-panel\">\n";
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const auto& rec = result.points[i * ny + j];
      if (rec.stats && rec.stats->classification) {
        const auto c = *rec.stats->classification;
        svg_cell(out, left, i, j, "cell g2-" + std::string(to_string(c)), std::string(class_color(c)));
      } else {
        svg_cell(out, left, i, j, "cell undefined", "#cccccc");
      }
    }
  }
  out << "</g>\n<g id=\"q-panel\">\n";
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const auto& rec = result.points[i * ny + j];
      if (rec.stats && rec.stats->q) {
        svg_cell(out, right, i, j, "cell q", diverging(*rec.stats->q, q_scale));
      } else {
        svg_cell(out, right, i, j, "cell undefined", "#cccccc");
      }
    }
  }
  out << "</g>\n";

  if (result.axis_values.size() == 2) {
    static const std::vector<std::string> dashes = {"stroke-dasharray=\"2,3\"", "stroke-dasharray=\"8,4\"", ""};
    for (std::size_t c = 0; c < result.contours.size(); ++c) {
      const std::string style = "stroke=\"#000\" stroke-width=\"1.5\" " + dashes[std::min(c, dashes.size() - 1)];
      for (const auto& line : result.contours[c].lines) {
        svg_polyline(out, left, result.axis_values[0], result.axis_values[1], line, style);
        svg_polyline(out, right, result.axis_values[0], result.axis_values[1], line, style);
      }
    }
  }

  const std::string xl = result.axis_names.empty() ? "" : axis_label(result.axis_values[0], result.axis_names[0]);
  const std::string yl = result.axis_names.size() == 2 ? axis_label(result.axis_values[1], result.axis_names[1]) : "";
  svg_axes_labels(out, left, xl, yl, "g2 classes");
  svg_axes_labels(out, right, xl, yl, "Mandel Q (range +-" + fmt(q_scale) + ")");

  double lx = 70;
  const double ly = 40 + panel_h + 50;
  for (auto c : {StatisticsClass::antibunched, StatisticsClass::coherent, StatisticsClass::bunched,
                 StatisticsClass::thermal, StatisticsClass::superbunched}) {
    out << "<rect class=\"legend\" x=\"" << lx << "\" y=\"" << ly << "\" width=\"14\" height=\"14\" fill=\""
        << class_color(c) << "\" stroke=\"#000\"/>\n"
        << "<text x=\"" << lx + 18 << "\" y=\"" << ly + 12 << "\" font-size=\"12\">" << to_string(c) << "</text>\n";
    lx += 120;
  }
  out << "</svg>\n";
  return out.str();
}

std::string validity_to_csv(const ValidityMap& map) {
  std::ostringstream out;
  out << "g2,q,s,p,n_cr,p_cr,abs_p_cr,mean_n,p_cr_ok,decreasing_ok,valid\n";
  for (const auto& pt : map.points) {
    const auto& r = pt.report;
    out << fmt(pt.g2) << ',' << fmt(pt.q) << ',' << fmt(r.s) << ',' << fmt(r.p) << ',' << r.n_cr << ','
        << fmt(r.p_cr) << ',' << fmt(r.abs_p_cr) << ',' << fmt(r.mean_n) << ','
        << (r.p_cr_ok ? "true" : "false") << ',' << (r.decreasing_ok ? "true" : "false") << ','
        << (r.valid() ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string validity_to_json(const ValidityMap& map) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "validity";
  j["p_cr_threshold"] = map.p_cr_threshold;
  j["g2_values"] = map.g2_values;
  j["q_values"] = map.q_values;
  json pts = json::array();
  for (const auto& pt : map.points) {
    const auto& r = pt.report;
    pts.push_back({{"g2", pt.g2},         {"q", pt.q},
                   {"s", r.s},            {"p", r.p},
                   {"n_cr", r.n_cr},      {"p_cr", r.p_cr},
                   {"mean_n", r.mean_n},  {"p_cr_ok", r.p_cr_ok},
                   {"decreasing_ok", r.decreasing_ok}, {"valid", r.valid()}});
  }
  j["points"] = pts;
  json lines = json::array();
  for (const auto& l : map.p_cr_contour) lines.push_back(polyline_json(l));
  j["p_cr_contour"] = lines;
  j["q_limit_line"] = polyline_json(map.q_limit_line);
  return j.dump(1);
}

std::string validity_to_svg(const ValidityMap& map) {
  const std::size_t nx = map.g2_values.size();
  const std::size_t ny = map.q_values.size();
  const Panel panel{70, 40, 400, 400, nx, ny};
  constexpr double kMeanCap = 5.0;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"520\" height=\"500\" viewBox=\"0 0 520 500\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const auto& r = map.points[i * ny + j].report;
      const double t = std::clamp(r.mean_n / kMeanCap, 0.0, 1.0);
      svg_cell(out, panel, i, j, r.valid() ? "cell valid" : "cell invalid", rgb(1.0 - 0.8 * t, 1.0 - 0.5 * t, 1.0 - 0.2 * t));
    }
  }
  for (const auto& line : map.p_cr_contour) {
    svg_polyline(out, panel, map.g2_values, map.q_values, line, "stroke=\"#d7191c\" stroke-width=\"3\"");
  }
  if (!map.q_limit_line.points.empty()) {
    svg_polyline(out, panel, map.g2_values, map.q_values, map.q_limit_line,
                 "stroke=\"#fdae61\" stroke-width=\"2\" stroke-dasharray=\"8,4\"");
  }
  svg_axes_labels(out, panel, axis_label(map.g2_values, "g2"), axis_label(map.q_values, "Q"),
                  "mean photon number (cap 5), |P_cr| = " + fmt(map.p_cr_threshold));
  out << "</svg>\n";
  return out.str();
}

std::string distribution_to_csv(const DistributionReport& r) {
  std::ostringstream out;
  out << "n,system,coherent,thermal,qnbd\n";
  for (std::size_t n = 0; n < r.system.size(); ++n) {
    out << n << ',' << fmt(r.system[n]) << ',' << fmt(r.coherent[n]) << ',' << fmt(r.thermal[n]) << ','
        << fmt(r.qnbd_fit[n]) << '\n';
  }
  return out.str();
}

std::string distribution_to_json(const DistributionReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "distribution";
  j["params"] = params_json(r.params);
  j["n_max_used"] = r.n_max_used;
  j["residual"] = r.residual;
  j["converged"] = r.converged;
  j["stats"] = stats_json(r.stats);
  j["qnbd"] = qnbd_json(r.qnbd);
  j["pmf"] = {{"system", r.system.probs()},
              {"coherent", r.coherent.probs()},
              {"thermal", r.thermal.probs()},
              {"qnbd", r.qnbd_fit.probs()}};
  j["deviation"] = {{"coherent", r.deviation_coherent},
                    {"thermal", r.deviation_thermal},
                    {"qnbd", r.deviation_qnbd}};
  j["max_deviation_qnbd"] = r.max_deviation_qnbd();
  j["fidelity"] = {{"coherent", r.fidelity_coherent}, {"thermal", r.fidelity_thermal}, {"qnbd", r.fidelity_qnbd}};
  return j.dump(1);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<std::filesystem::path> export_grid(const GridResult& result, const std::filesystem::path& dir,
                                               const std::string& stem,
                                               const std::vector<OutputFormat>& formats) {
  return write_formats(dir, stem, formats,
                       {{OutputFormat::csv, [&] { return grid_to_csv(result); }},
                        {OutputFormat::json, [&] { return grid_to_json(result); }},
                        {OutputFormat::svg, [&] { return grid_to_svg(result); }}});
}

std::vector<std::filesystem::path> export_validity(const ValidityMap& map, const std::filesystem::path& dir,
                                                   const std::string& stem,
                                                   const std::vector<OutputFormat>& formats) {
  return write_formats(dir, stem, formats,
                       {{OutputFormat::csv, [&] { return validity_to_csv(map); }},
                        {OutputFormat::json, [&] { return validity_to_json(map); }},
                        {OutputFormat::svg, [&] { return validity_to_svg(map); }}});
}

std::vector<std::filesystem::path> export_distribution(const DistributionReport& report,
                                                       const std::filesystem::path& dir,
                                                       const std::string& stem,
                                                       const std::vector<OutputFormat>& formats) {
  return write_formats(dir, stem, formats,
                       {{OutputFormat::csv, [&] { return distribution_to_csv(report); }},
                        {OutputFormat::json, [&] { return distribution_to_json(report); }}});
}

}  // namespace cqstat
