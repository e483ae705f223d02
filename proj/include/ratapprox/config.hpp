#ifndef RATAPPROX_CONFIG_HPP
#define RATAPPROX_CONFIG_HPP

// Run configuration files: flat `key = value` lines with dotted keys.
// Blank lines and lines starting with '#' are ignored.
//
//   problem.function     named target (abs, sin, ...)        one of these two
//   problem.csv          two-column t,f(t) file on the grid  is required
//   grid.lo, grid.hi     interval                            default -1, 1
//   grid.points          uniform grid size, >= 2             default 2001
//   basis.num.family     monomial | power | tabulated        default monomial
//   basis.num.kernel     exp | sin | cos | abs | identity    (power only)
//   basis.num.table      two-column t,h(t) file              (tabulated only)
//   basis.num.degree     numerator degree n                  required
//   basis.den.*          same keys for the denominator; degree m required
//   solver.variant       1 | 2                               default 2
//   solver.beta, solver.delta, solver.theta                  1, 0.5, 0.5
//   solver.max_iter                                          default 1000
//   solver.psi_target    stop once Psi <= target             default none
//   solver.step_tol, solver.residual_tol                     1e-10, 1e-8
//   solver.active_rel    relative active-point tolerance     default 0.3
//   output.dir           where results go                    default "."
//
// problem.csv and basis.*.table paths are relative to the config file;
// output.dir is relative to the working directory.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ratapprox/approx_solver.hpp"
#include "ratapprox/basis.hpp"
#include "ratapprox/problem.hpp"
#include "ratapprox/vip.hpp"

namespace ratapprox {

/// Schema violation. line() is 1-based, 0 when no single line is to blame.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what)
      : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

struct BasisConfig {
  BasisSpec spec;
  int degree = 0;
};

struct RunConfig {
  std::optional<std::string> function;
  std::optional<std::string> csv;
  double lo = -1.0;
  double hi = 1.0;
  int points = 2001;
  BasisConfig num;
  BasisConfig den;
  SolveConfig solver;
  ActiveTolerance tolerance;
  std::string output_dir = ".";

  /// Samples the target on the grid.
  ProblemInstance instance() const {
    Grid grid = make_uniform_grid(lo, hi, points);
    if (function) {
      return ProblemInstance::sample(std::move(grid), *find_target(*function), num.spec, num.degree, den.spec,
                                     den.degree);
    }
    return ProblemInstance(std::move(grid), f_values, num.spec, num.degree, den.spec, den.degree);
  }

  /// f at an arbitrary abscissa: the named target, or linear interpolation
  /// of the CSV samples.
  double f_at(double t) const {
    if (function) return (*find_target(*function))(t);
    const Grid grid = make_uniform_grid(lo, hi, points);
    if (t <= grid.lo()) return f_values.front();
    if (t >= grid.hi()) return f_values.back();
    const auto it = std::upper_bound(grid.points.begin(), grid.points.end(), t);
    const auto j = static_cast<std::size_t>(it - grid.points.begin());
    const double w = (t - grid[j - 1]) / (grid[j] - grid[j - 1]);
    return (1.0 - w) * f_values[j - 1] + w * f_values[j];
  }

  std::vector<double> f_values;  // from problem.csv
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

}  // namespace detail

/// Parses and validates a configuration. Relative CSV paths resolve against
/// base_dir. Throws ConfigError naming the offending line.
inline RunConfig parse_config(std::istream& in, const std::string& source = "<config>",
                              const std::filesystem::path& base_dir = {}) {
  static const std::vector<std::string_view> known = {
      "problem.function", "problem.csv",      "grid.lo",          "grid.hi",          "grid.points",
      "basis.num.family", "basis.num.kernel", "basis.num.table",  "basis.num.degree", "basis.den.family",
      "basis.den.kernel", "basis.den.table",  "basis.den.degree", "solver.variant",   "solver.beta",
      "solver.delta",     "solver.theta",     "solver.max_iter",  "solver.psi_target", "solver.step_tol",
      "solver.residual_tol", "solver.active_rel", "output.dir"};

  std::map<std::string, detail::Entry, std::less<>> entries;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(source, lineno, "expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(source, lineno, "empty key");
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(source, lineno, "unknown key '" + key + "'");
    }
    if (value.empty()) throw ConfigError(source, lineno, "empty value for '" + key + "'");
    if (auto it = entries.find(key); it != entries.end()) {
      throw ConfigError(source, lineno, "duplicate key '" + key + "' (first set on line " +
                                            std::to_string(it->second.line) + ")");
    }
    entries.emplace(key, detail::Entry{value, lineno});
  }

  auto get = [&](std::string_view key) -> const detail::Entry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto real = [&](std::string_view key, double fallback) {
    const detail::Entry* e = get(key);
    if (!e) return fallback;
    double v = 0.0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw ConfigError(source, e->line, "'" + std::string(key) + "' must be a finite number, got '" + e->value + "'");
    }
    return v;
  };
  auto integer = [&](std::string_view key, std::optional<int> fallback) {
    const detail::Entry* e = get(key);
    if (!e) {
      if (!fallback) throw ConfigError(source, 0, "missing required key '" + std::string(key) + "'");
      return *fallback;
    }
    int v = 0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      throw ConfigError(source, e->line, "'" + std::string(key) + "' must be an integer, got '" + e->value + "'");
    }
    return v;
  };
  auto line_of = [&](std::string_view key) {
    const detail::Entry* e = get(key);
    return e ? e->line : 0;
  };
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? (base_dir / path).string() : path.string();
  };

  RunConfig cfg;
  if (const auto* e = get("problem.function")) {
    if (!find_target(e->value)) throw ConfigError(source, e->line, "unknown target function '" + e->value + "'");
    cfg.function = e->value;
  }
  if (const auto* e = get("problem.csv")) {
    if (cfg.function) throw ConfigError(source, e->line, "give problem.function or problem.csv, not both");
    cfg.csv = resolve(e->value);
  }
  if (!cfg.function && !cfg.csv) throw ConfigError(source, 0, "missing required key 'problem.function' or 'problem.csv'");

  cfg.lo = real("grid.lo", -1.0);
  cfg.hi = real("grid.hi", 1.0);
  if (!(cfg.lo < cfg.hi)) throw ConfigError(source, std::max(line_of("grid.hi"), line_of("grid.lo")), "grid.lo must be below grid.hi");
  cfg.points = integer("grid.points", 2001);
  if (cfg.points < 2) throw ConfigError(source, line_of("grid.points"), "grid.points must be at least 2");

  auto basis = [&](const std::string& side) {
    BasisConfig b;
    const std::string fam = get("basis." + side + ".family") ? get("basis." + side + ".family")->value : "monomial";
    const int fam_line = line_of("basis." + side + ".family");
    const auto* kernel = get("basis." + side + ".kernel");
    const auto* table = get("basis." + side + ".table");
    if (fam == "monomial") {
      b.spec = BasisSpec::monomial();
    } else if (fam == "power") {
      if (!kernel) throw ConfigError(source, fam_line, "basis." + side + ".family = power needs basis." + side + ".kernel");
      const auto k = parse_kernel(kernel->value);
      if (!k) throw ConfigError(source, kernel->line, "unknown kernel '" + kernel->value + "'");
      b.spec = BasisSpec::function_power(*k);
    } else if (fam == "tabulated") {
      if (!table) throw ConfigError(source, fam_line, "basis." + side + ".family = tabulated needs basis." + side + ".table");
      try {
        b.spec = BasisSpec::tabulated(read_table_csv_file(resolve(table->value)));
      } catch (const std::exception& e) {
        throw ConfigError(source, table->line, e.what());
      }
    } else {
      throw ConfigError(source, fam_line, "unknown basis family '" + fam + "'");
    }
    if (kernel && fam != "power") throw ConfigError(source, kernel->line, "kernel given for a non-power basis");
    if (table && fam != "tabulated") throw ConfigError(source, table->line, "table given for a non-tabulated basis");
    b.degree = integer("basis." + side + ".degree", std::nullopt);
    if (b.degree < 0) throw ConfigError(source, line_of("basis." + side + ".degree"), "degree must be nonnegative");
    return b;
  };
  cfg.num = basis("num");
  cfg.den = basis("den");

  const int variant = integer("solver.variant", 2);
  if (variant != 1 && variant != 2) throw ConfigError(source, line_of("solver.variant"), "solver.variant must be 1 or 2");
  cfg.solver.variant = variant == 1 ? Variant::V1 : Variant::V2;
  cfg.solver.linesearch.beta = real("solver.beta", cfg.solver.linesearch.beta);
  cfg.solver.linesearch.delta = real("solver.delta", cfg.solver.linesearch.delta);
  cfg.solver.linesearch.theta = real("solver.theta", cfg.solver.linesearch.theta);
  cfg.solver.max_iter = integer("solver.max_iter", cfg.solver.max_iter);
  if (get("solver.psi_target")) cfg.solver.psi_target = real("solver.psi_target", 0.0);
  cfg.solver.step_tol = real("solver.step_tol", cfg.solver.step_tol);
  cfg.solver.residual_tol = real("solver.residual_tol", cfg.solver.residual_tol);
  cfg.tolerance.rel = real("solver.active_rel", cfg.tolerance.rel);
  if (!(cfg.tolerance.rel >= 0.0 && cfg.tolerance.rel < 1.0)) {
    throw ConfigError(source, line_of("solver.active_rel"), "solver.active_rel must lie in [0, 1)");
  }
  try {
    cfg.solver.validate();
  } catch (const std::invalid_argument& e) {
    int line = 0;
    const std::string msg = e.what();
    for (std::string_view key : {"beta", "delta", "theta", "max_iter", "step_tol", "residual_tol"}) {
      if (msg.find(key) != std::string::npos) line = line_of("solver." + std::string(key));
    }
    throw ConfigError(source, line, msg);
  }
  if (cfg.solver.psi_target && !(*cfg.solver.psi_target >= 0.0)) {
    throw ConfigError(source, line_of("solver.psi_target"), "solver.psi_target must be nonnegative");
  }
  if (const auto* e = get("output.dir")) cfg.output_dir = e->value;

  if (cfg.csv) {
    const int csv_line = line_of("problem.csv");
    Table t;
    try {
      t = read_table_csv_file(*cfg.csv);
    } catch (const std::exception& e) {
      throw ConfigError(source, csv_line, e.what());
    }
    const Grid grid = make_uniform_grid(cfg.lo, cfg.hi, cfg.points);
    if (t.t.size() != grid.size()) {
      throw ConfigError(source, csv_line, "problem.csv has " + std::to_string(t.t.size()) + " rows but the grid has " +
                                              std::to_string(grid.size()) + " points");
    }
    const double scale = std::max(std::abs(cfg.lo), std::abs(cfg.hi));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (std::abs(t.t[i] - grid[i]) > 1e-12 * std::max(1.0, scale)) {
        throw ConfigError(source, csv_line, "problem.csv row " + std::to_string(i + 1) + " has t = " +
                                                std::to_string(t.t[i]) + ", grid point is " + std::to_string(grid[i]));
      }
    }
    cfg.f_values = t.value;
  }
  // basis finiteness and tabulated coverage are checked by sampling
  try {
    (void)cfg.instance();
  } catch (const std::exception& e) {
    throw ConfigError(source, 0, e.what());
  }
  return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open file");
  return parse_config(in, path.string(), path.parent_path());
}

}  // namespace ratapprox

#endif  // RATAPPROX_CONFIG_HPP
