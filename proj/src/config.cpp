#include "cqstat/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "cqstat/errors.hpp"

namespace cqstat {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, std::string_view delims) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (delims.find(c) != std::string_view::npos) {
      if (!trim(cur).empty()) out.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty()) out.emplace_back(trim(cur));
  return out;
}

int parse_int(std::string_view text) {
  const double v = parse_number(text);
  if (v != std::floor(v)) throw ConfigError("expected an integer, got '" + std::string(text) + "'");
  return static_cast<int>(v);
}

bool parse_bool(std::string_view text) {
  std::string t(trim(text));
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("expected a boolean, got '" + t + "'");
}

std::string canonical_param(std::string name) {
  std::replace(name.begin(), name.end(), '-', '_');
  if (name == "delta_A") name = "delta_a";
  return name;
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(steps, 0)));
  for (int k = 0; k < steps; ++k) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(k) / (steps - 1);
    if (log_spacing) {
      v[static_cast<std::size_t>(k)] = std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
    } else {
      v[static_cast<std::size_t>(k)] = min + t * (max - min);
    }
  }
  if (steps >= 2) v.back() = max;
  if (steps >= 1) v.front() = min;
  return v;
}

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::svg: return "svg";
  }
  return "?";
}

void SweepConfig::validate() const {
  try {
    (void)base.validated();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (axes.size() > 2) throw ConfigError("at most two sweep axes are supported");
  const auto& names = SystemParams::field_names();
  for (const auto& ax : axes) {
    if (std::find(names.begin(), names.end(), ax.name) == names.end()) {
      throw ConfigError("axis '" + ax.name + "' is not a SystemParams field");
    }
    if (ax.name == "n_atoms") throw ConfigError("n_atoms cannot be swept");
    if (ax.name == "kappa") throw ConfigError("kappa is the rate unit and cannot be swept");
    if (ax.steps < 2) throw ConfigError("axis '" + ax.name + "' needs at least 2 steps");
    if (!std::isfinite(ax.min) || !std::isfinite(ax.max)) throw ConfigError("axis bounds must be finite");
    if (ax.log_spacing && !(ax.min > 0.0 && ax.max > 0.0)) {
      throw ConfigError("log-spaced axis '" + ax.name + "' needs positive bounds");
    }
  }
  if (axes.size() == 2 && axes[0].name == axes[1].name) throw ConfigError("axes must differ");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (!(rel_tol > 0.0)) throw ConfigError("rel_tol must be > 0");
  if (!(class_tol > 0.0)) throw ConfigError("class_tol must be > 0");
  if (phi_steps < 8) throw ConfigError("phi_steps must be >= 8");
  if (validity_steps < 2) throw ConfigError("steps must be >= 2");
  if (!(0.0 < g2_min && g2_min < g2_max && g2_max < 1.0)) {
    throw ConfigError("g2_range must lie inside (0, 1)");
  }
  if (!(-1.0 < q_min && q_min < q_max && q_max < 0.0)) {
    throw ConfigError("q_range must lie inside (-1, 0)");
  }
  if (!(p_cr_threshold > 0.0)) throw ConfigError("p_cr_threshold must be > 0");
}

double parse_number(std::string_view text) {
  std::string t(trim(text));
  double factor = 1.0;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    t.resize(t.size() - 2);
    if (!t.empty() && t.back() == '*') t.pop_back();
    if (t.empty()) return factor;
    if (t == "-") return -factor;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + std::string(text) + "'");
  }
  if (used != t.size()) throw ConfigError("expected a number, got '" + std::string(text) + "'");
  return v * factor;
}

SweepAxis parse_axis(std::string_view spec) {
  const auto parts = split(spec, ": \t");
  if (parts.size() != 4 && parts.size() != 5) {
    throw ConfigError("axis must be '<param> <min> <max> <steps> [log]', got '" + std::string(spec) + "'");
  }
  SweepAxis ax;
  ax.name = canonical_param(parts[0]);
  ax.min = parse_number(parts[1]);
  ax.max = parse_number(parts[2]);
  ax.steps = parse_int(parts[3]);
  if (parts.size() == 5) {
    if (parts[4] == "log") ax.log_spacing = true;
    else if (parts[4] != "lin" && parts[4] != "linear") throw ConfigError("unknown spacing '" + parts[4] + "'");
  }
  return ax;
}

std::vector<OutputFormat> parse_formats(std::string_view text) {
  std::vector<OutputFormat> out;
  for (const auto& item : split(text, ", ")) {
    if (item == "csv") out.push_back(OutputFormat::csv);
    else if (item == "json") out.push_back(OutputFormat::json);
    else if (item == "svg") out.push_back(OutputFormat::svg);
    else throw ConfigError("unknown output format '" + item + "'");
  }
  if (out.empty()) throw ConfigError("no output format given");
  return out;
}

void apply_config_text(SweepConfig& config, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  bool absolute_units = false;
  bool kappa_given = false;
  SystemParams& b = config.base;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = canonical_param(std::string(trim(line.substr(0, eq))));
    const std::string_view value = trim(line.substr(eq + 1));
    try {
      const auto& names = SystemParams::field_names();
      if (std::find(names.begin(), names.end(), key) != names.end()) {
        b.set(key, parse_number(value));
        if (key == "kappa") kappa_given = true;
      } else if (key == "units") {
        if (value == "absolute") absolute_units = true;
        else if (value == "kappa") absolute_units = false;
        else throw ConfigError("units must be 'kappa' or 'absolute'");
      } else if (key == "axis1" || key == "axis2") {
        const std::size_t slot = key == "axis1" ? 0 : 1;
        if (config.axes.size() <= slot) config.axes.resize(slot + 1);
        config.axes[slot] = parse_axis(value);
      } else if (key == "contour_levels") {
        config.contour_levels.clear();
        for (const auto& item : split(value, ", ")) config.contour_levels.push_back(parse_number(item));
      } else if (key == "format" || key == "outputs") {
        config.outputs = parse_formats(value);
      } else if (key == "workers") {
        config.workers = parse_int(value);
      } else if (key == "qnbd_fit") {
        config.qnbd_fit = parse_bool(value);
      } else if (key == "rel_tol") {
        config.rel_tol = parse_number(value);
      } else if (key == "class_tol") {
        config.class_tol = parse_number(value);
      } else if (key == "phi_steps") {
        config.phi_steps = parse_int(value);
      } else if (key == "steps") {
        config.validity_steps = parse_int(value);
      } else if (key == "p_cr_threshold") {
        config.p_cr_threshold = parse_number(value);
      } else if (key == "g2_range" || key == "q_range") {
        const auto parts = split(value, ", ");
        if (parts.size() != 2) throw ConfigError(key + " needs two numbers");
        if (key == "g2_range") {
          config.g2_min = parse_number(parts[0]);
          config.g2_max = parse_number(parts[1]);
        } else {
          config.q_min = parse_number(parts[0]);
          config.q_max = parse_number(parts[1]);
        }
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (absolute_units) {
    const double k = b.kappa;
    if (!(k > 0.0)) throw ConfigError("absolute units need kappa > 0");
    b.g /= k;
    b.gamma /= k;
    b.eta /= k;
    b.delta /= k;
    b.delta_a /= k;
    b.kappa = 1.0;
    for (auto& ax : config.axes) {
      if (ax.name == "g" || ax.name == "gamma" || ax.name == "eta" || ax.name == "delta" ||
          ax.name == "delta_a") {
        ax.min /= k;
        ax.max /= k;
      } else if (ax.name == "kappa") {
        throw ConfigError("kappa is the unit and cannot be swept");
      }
    }
  } else if (kappa_given && b.kappa != 1.0) {
    throw ConfigError("rates are in units of kappa; set 'units = absolute' to give kappa explicitly");
  }
}

SweepConfig parse_config(std::string_view text) {
  SweepConfig config;
  apply_config_text(config, text);
  return config;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace cqstat
