#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ffsim/geometry.hpp"
#include "ffsim/util.hpp"

namespace ffsim {

/// One agent class: own period tau (seconds between desired steps),
/// aggressiveness gamma in [0, 1], and its share of the inflow.
struct GroupSpec {
  std::string label;
  double tau = 0.25;
  double gamma = 0.0;
  double weight = 1.0;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

struct AnalysisParams {
  double breakpoint = 7.0;   // occupancy where the congested branch starts
  double bin_width = 5.0;    // agents per occupancy bin
  std::vector<double> quantile_levels = {0.1, 0.25, 0.5, 0.75, 0.9};

  friend bool operator==(const AnalysisParams&, const AnalysisParams&) = default;
};

/// Full simulation setup. Default-constructed values reproduce the standard
/// scenario: 18x11 room with 0.4 m cells, k_S=3.5, k_O=1, k_D=0.7, h=0.1 s,
/// mu=0.5, four equally weighted groups crossing tau in {0.25, 0.4} s with
/// gamma in {0, 1}, inflow 3 agents/s for 1000 s.
struct SimConfig {
  double k_s = 3.5;   // sensitivity to the static field, >= 0
  double k_o = 1.0;   // sensitivity to occupied cells, in [0, 1]
  double k_d = 0.7;   // diagonal-step penalty, in [0, 1]
  double h = 0.1;     // algorithm-step width in seconds
  double mu = 0.5;    // friction: blocking scale for tied conflicts

  LatticeGeometry geometry;
  double inflow_alpha = 3.0;  // mean arrivals per second
  std::vector<GroupSpec> groups = default_groups();

  double duration = 1000.0;  // simulated seconds per run
  double warmup = 500.0;     // analysis keeps only records with t_in > warmup
  std::uint64_t seed = 42;

  AnalysisParams analysis;

  static std::vector<GroupSpec> default_groups() {
    return {
        {"fast_aggressive", 0.25, 1.0, 0.25},
        {"fast_calm", 0.25, 0.0, 0.25},
        {"slow_aggressive", 0.4, 1.0, 0.25},
        {"slow_calm", 0.4, 0.0, 0.25},
    };
  }

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

namespace detail {
inline void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}
}  // namespace detail

/// Checks every invariant and normalizes group weights to probabilities.
/// Idempotent: weights already summing to 1 (within 1e-12) are left untouched,
/// so validate(validate(c)) == validate(c) bit for bit.
/// Throws std::invalid_argument naming the offending field.
inline SimConfig validate_config(SimConfig cfg) {
  using detail::require;
  require(std::isfinite(cfg.k_s) && cfg.k_s >= 0.0, "k_s must be finite and >= 0");
  require(cfg.k_o >= 0.0 && cfg.k_o <= 1.0, "k_o must lie in [0, 1]");
  require(cfg.k_d >= 0.0 && cfg.k_d <= 1.0, "k_d must lie in [0, 1]");
  require(std::isfinite(cfg.h) && cfg.h > 0.0, "h must be > 0");
  require(cfg.mu >= 0.0 && cfg.mu <= 1.0, "mu must lie in [0, 1]");
  require(std::isfinite(cfg.inflow_alpha) && cfg.inflow_alpha >= 0.0,
          "inflow.alpha must be >= 0");
  require(std::isfinite(cfg.duration) && cfg.duration >= 0.0, "run.duration must be >= 0");
  require(std::isfinite(cfg.warmup) && cfg.warmup >= 0.0, "run.warmup must be >= 0");
  cfg.geometry.validate();

  require(!cfg.groups.empty(), "groups must not be empty");
  double total = 0.0;
  for (const auto& g : cfg.groups) {
    require(!g.label.empty(), "group label must not be empty");
    require(g.label.find_first_of(", \t\"") == std::string::npos,
            "group label '" + g.label + "' must not contain commas, quotes or spaces");
    require(std::isfinite(g.tau) && g.tau > 0.0, "group " + g.label + ": tau must be > 0");
    require(g.gamma >= 0.0 && g.gamma <= 1.0,
            "group " + g.label + ": gamma must lie in [0, 1]");
    require(std::isfinite(g.weight) && g.weight > 0.0,
            "group " + g.label + ": weight must be > 0");
    total += g.weight;
  }
  for (std::size_t i = 0; i < cfg.groups.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.groups.size(); ++j)
      require(cfg.groups[i].label != cfg.groups[j].label,
              "duplicate group label '" + cfg.groups[i].label + "'");
  if (std::abs(total - 1.0) > 1e-12) {
    for (auto& g : cfg.groups) g.weight /= total;
  }

  require(std::isfinite(cfg.analysis.breakpoint) && cfg.analysis.breakpoint >= 0.0,
          "analysis.breakpoint must be >= 0");
  require(cfg.analysis.bin_width > 0.0, "analysis.bin_width must be > 0");
  require(!cfg.analysis.quantile_levels.empty(), "analysis.quantiles must not be empty");
  for (double q : cfg.analysis.quantile_levels)
    require(q >= 0.0 && q <= 1.0, "analysis.quantiles entries must lie in [0, 1]");
  return cfg;
}

// ---------------------------------------------------------------------------
// Config file format: INI-style sections of key = value lines. '#' or ';'
// starts a comment. Every key is optional; an empty file is the standard
// scenario. Any [group <label>] section replaces the default group mix.
// ---------------------------------------------------------------------------

namespace detail {

using ConfigError = ParseError;

inline double parse_double_or_throw(std::string_view v, const std::string& key) {
  double out;
  if (!parse_double(trim(v), out))
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                      std::string(trim(v)) + "'");
  return out;
}

inline long long parse_int_or_throw(std::string_view v, const std::string& key) {
  long long out;
  if (!parse_int64(trim(v), out))
    throw ConfigError("config key '" + key + "': expected an integer, got '" +
                      std::string(trim(v)) + "'");
  return out;
}

}  // namespace detail

/// Parses the config text into a SimConfig (not yet validated). Unknown
/// sections or keys are errors naming the key; so are duplicate keys.
inline SimConfig parse_config(std::istream& in) {
  using detail::ConfigError;
  SimConfig cfg;
  bool groups_cleared = false;
  std::optional<int> exit_row;                 // default depends on width
  std::optional<std::vector<int>> entrance_rows;
  std::map<std::string, bool> seen;

  std::string section = "model";
  GroupSpec* group = nullptr;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (auto pos = s.find_first_of("#;"); pos != std::string_view::npos)
      s = trim(s.substr(0, pos));
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section header");
      std::string_view name = trim(s.substr(1, s.size() - 2));
      if (name.starts_with("group")) {
        std::string_view label = trim(name.substr(5));
        if (label.empty())
          throw ConfigError("config line " + std::to_string(lineno) + ": group section needs a label");
        if (!groups_cleared) {
          cfg.groups.clear();
          groups_cleared = true;
        }
        cfg.groups.push_back(GroupSpec{std::string(label), 0.25, 0.0, 1.0});
        group = &cfg.groups.back();
        section = "group";
      } else if (name == "model" || name == "lattice" || name == "inflow" ||
                 name == "run" || name == "analysis") {
        section = std::string(name);
        group = nullptr;
      } else {
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown section [" +
                          std::string(name) + "]");
      }
      continue;
    }

    auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = std::string(trim(s.substr(0, eq)));
    std::string_view value = trim(s.substr(eq + 1));
    std::string qualified = section == "group" ? "group " + group->label + "." + key
                                               : section + "." + key;
    if (seen[qualified])
      throw ConfigError("config key '" + qualified + "' given twice");
    seen[qualified] = true;

    if (section == "model") {
      if (key == "k_s") cfg.k_s = detail::parse_double_or_throw(value, qualified);
      else if (key == "k_o") cfg.k_o = detail::parse_double_or_throw(value, qualified);
      else if (key == "k_d") cfg.k_d = detail::parse_double_or_throw(value, qualified);
      else if (key == "h") cfg.h = detail::parse_double_or_throw(value, qualified);
      else if (key == "mu") cfg.mu = detail::parse_double_or_throw(value, qualified);
      else throw ConfigError("unknown config key '" + qualified + "'");
    } else if (section == "lattice") {
      if (key == "length") cfg.geometry.length = static_cast<int>(detail::parse_int_or_throw(value, qualified));
      else if (key == "width") cfg.geometry.width = static_cast<int>(detail::parse_int_or_throw(value, qualified));
      else if (key == "cell_size") cfg.geometry.cell_size = detail::parse_double_or_throw(value, qualified);
      else if (key == "exit_row") exit_row = static_cast<int>(detail::parse_int_or_throw(value, qualified));
      else if (key == "entrance_rows") {
        if (trim(value) == "all") {
          entrance_rows.reset();
          seen[qualified] = true;
        } else {
          std::vector<int> rows;
          for (auto part : split(value, ','))
            rows.push_back(static_cast<int>(detail::parse_int_or_throw(part, qualified)));
          entrance_rows = std::move(rows);
        }
      } else throw ConfigError("unknown config key '" + qualified + "'");
    } else if (section == "inflow") {
      if (key == "alpha") cfg.inflow_alpha = detail::parse_double_or_throw(value, qualified);
      else throw ConfigError("unknown config key '" + qualified + "'");
    } else if (section == "run") {
      if (key == "duration") cfg.duration = detail::parse_double_or_throw(value, qualified);
      else if (key == "warmup") cfg.warmup = detail::parse_double_or_throw(value, qualified);
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(detail::parse_int_or_throw(value, qualified));
      else throw ConfigError("unknown config key '" + qualified + "'");
    } else if (section == "analysis") {
      if (key == "breakpoint") cfg.analysis.breakpoint = detail::parse_double_or_throw(value, qualified);
      else if (key == "bin_width") cfg.analysis.bin_width = detail::parse_double_or_throw(value, qualified);
      else if (key == "quantiles") {
        std::vector<double> levels;
        for (auto part : split(value, ','))
          levels.push_back(detail::parse_double_or_throw(part, qualified));
        cfg.analysis.quantile_levels = std::move(levels);
      } else throw ConfigError("unknown config key '" + qualified + "'");
    } else {  // group
      if (key == "tau") group->tau = detail::parse_double_or_throw(value, qualified);
      else if (key == "gamma") group->gamma = detail::parse_double_or_throw(value, qualified);
      else if (key == "weight") group->weight = detail::parse_double_or_throw(value, qualified);
      else throw ConfigError("unknown config key '" + qualified + "'");
    }
  }

  cfg.geometry.exit_row = exit_row.value_or(cfg.geometry.width / 2);
  cfg.geometry.entrance_rows =
      entrance_rows.value_or(LatticeGeometry::default_entrance_rows(cfg.geometry.width));
  return cfg;
}

inline SimConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

/// Full snapshot in config-file form. parse_config(write_config(c)) == c,
/// which is what makes manifests replayable.
inline void write_config(std::ostream& out, const SimConfig& cfg) {
  out << "[model]\n";
  out << "k_s = " << format_double(cfg.k_s) << "\n";
  out << "k_o = " << format_double(cfg.k_o) << "\n";
  out << "k_d = " << format_double(cfg.k_d) << "\n";
  out << "h = " << format_double(cfg.h) << "\n";
  out << "mu = " << format_double(cfg.mu) << "\n";
  out << "\n[lattice]\n";
  out << "length = " << cfg.geometry.length << "\n";
  out << "width = " << cfg.geometry.width << "\n";
  out << "cell_size = " << format_double(cfg.geometry.cell_size) << "\n";
  out << "exit_row = " << cfg.geometry.exit_row << "\n";
  out << "entrance_rows = ";
  for (std::size_t i = 0; i < cfg.geometry.entrance_rows.size(); ++i)
    out << (i ? "," : "") << cfg.geometry.entrance_rows[i];
  out << "\n";
  out << "\n[inflow]\n";
  out << "alpha = " << format_double(cfg.inflow_alpha) << "\n";
  out << "\n[run]\n";
  out << "duration = " << format_double(cfg.duration) << "\n";
  out << "warmup = " << format_double(cfg.warmup) << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "\n[analysis]\n";
  out << "breakpoint = " << format_double(cfg.analysis.breakpoint) << "\n";
  out << "bin_width = " << format_double(cfg.analysis.bin_width) << "\n";
  out << "quantiles = ";
  for (std::size_t i = 0; i < cfg.analysis.quantile_levels.size(); ++i)
    out << (i ? "," : "") << format_double(cfg.analysis.quantile_levels[i]);
  out << "\n";
  for (const auto& g : cfg.groups) {
    out << "\n[group " << g.label << "]\n";
    out << "tau = " << format_double(g.tau) << "\n";
    out << "gamma = " << format_double(g.gamma) << "\n";
    out << "weight = " << format_double(g.weight) << "\n";
  }
}

inline std::string config_to_string(const SimConfig& cfg) {
  std::ostringstream out;
  write_config(out, cfg);
  return out.str();
}

}  // namespace ffsim
