#ifndef RATAPPROX_BASIS_HPP
#define RATAPPROX_BASIS_HPP

// Basis-function families for the numerator and denominator linear forms.
//
// Every family has element 0 identically equal to one, so the denominator
// coefficients b = (1, 0, ..., 0) are always feasible.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ratapprox/error.hpp"

namespace ratapprox {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Kernel { Exp, Sin, Cos, Abs, Identity };

inline double apply_kernel(Kernel k, double t) {
  switch (k) {
    case Kernel::Exp: return std::exp(t);
    case Kernel::Sin: return std::sin(t);
    case Kernel::Cos: return std::cos(t);
    case Kernel::Abs: return std::abs(t);
    case Kernel::Identity: return t;
  }
  return t;
}

inline std::string_view kernel_name(Kernel k) {
  switch (k) {
    case Kernel::Exp: return "exp";
    case Kernel::Sin: return "sin";
    case Kernel::Cos: return "cos";
    case Kernel::Abs: return "abs";
    case Kernel::Identity: return "identity";
  }
  return "identity";
}

inline std::optional<Kernel> parse_kernel(std::string_view name) {
  for (Kernel k : {Kernel::Exp, Kernel::Sin, Kernel::Cos, Kernel::Abs, Kernel::Identity}) {
    if (kernel_name(k) == name) return k;
  }
  return std::nullopt;
}

/// Samples of a scalar function, sorted by strictly increasing abscissa.
struct Table {
  std::vector<double> t;
  std::vector<double> value;

  /// Lookup at a stored abscissa. Matches within 1e-12 * max(1, |x|), so
  /// a file written with a different rounding of the grid still works.
  std::optional<double> at(double x) const {
    const double tol = 1e-12 * std::max(1.0, std::abs(x));
    auto it = std::lower_bound(t.begin(), t.end(), x - tol);
    if (it == t.end() || *it > x + tol) return std::nullopt;
    return value[static_cast<std::size_t>(it - t.begin())];
  }
};

/// Reads a two-column CSV (t, value). A non-numeric first line is taken as a
/// header. Throws std::runtime_error with the offending line number.
inline Table read_table_csv(std::istream& in, const std::string& source = "<stream>") {
  Table table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto comma = line.find(',');
    auto fail = [&](const std::string& why) {
      throw std::runtime_error(source + ":" + std::to_string(lineno) + ": " + why);
    };
    if (comma == std::string::npos) fail("expected two comma-separated columns");
    std::string lhs = line.substr(0, comma);
    std::string rhs = line.substr(comma + 1);
    if (rhs.find(',') != std::string::npos) fail("expected exactly two columns");
    double t = 0.0;
    double v = 0.0;
    std::size_t used_t = 0;
    std::size_t used_v = 0;
    try {
      t = std::stod(lhs, &used_t);
      v = std::stod(rhs, &used_v);
    } catch (const std::exception&) {
      if (lineno == 1 && table.t.empty()) continue;  // header
      fail("non-numeric value");
    }
    if (lhs.find_first_not_of(" \t", used_t) != std::string::npos ||
        rhs.find_first_not_of(" \t", used_v) != std::string::npos) {
      if (lineno == 1 && table.t.empty()) continue;
      fail("trailing characters after number");
    }
    if (!std::isfinite(t) || !std::isfinite(v)) fail("non-finite value");
    if (!table.t.empty() && !(t > table.t.back())) fail("abscissae must be strictly increasing");
    table.t.push_back(t);
    table.value.push_back(v);
  }
  if (table.t.empty()) throw std::runtime_error(source + ": no data rows");
  return table;
}

inline Table read_table_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_table_csv(in, path);
}

enum class Family { Monomial, FunctionPower, Tabulated };

/// A family of basis functions. Element k is t^k, kernel(t)^k, or table(t)^k,
/// with element 0 fixed to one.
struct BasisSpec {
  Family family = Family::Monomial;
  Kernel kernel = Kernel::Identity;
  std::shared_ptr<const Table> table;

  static BasisSpec monomial() { return {}; }
  static BasisSpec function_power(Kernel k) { return {Family::FunctionPower, k, nullptr}; }
  static BasisSpec tabulated(Table t) {
    return {Family::Tabulated, Kernel::Identity, std::make_shared<const Table>(std::move(t))};
  }

  /// The scalar whose powers form the basis, evaluated at t.
  double base(double t) const {
    switch (family) {
      case Family::Monomial: return t;
      case Family::FunctionPower: {
        double v = apply_kernel(kernel, t);
        if (!std::isfinite(v)) throw DomainError("basis kernel is not finite at t = " + std::to_string(t));
        return v;
      }
      case Family::Tabulated: {
        if (!table) throw DomainError("tabulated basis without a table");
        auto v = table->at(t);
        if (!v) throw DomainError("tabulated basis queried off-grid at t = " + std::to_string(t));
        return *v;
      }
    }
    return t;
  }

  std::string describe() const {
    switch (family) {
      case Family::Monomial: return "monomial";
      case Family::FunctionPower: return "power(" + std::string(kernel_name(kernel)) + ")";
      case Family::Tabulated: return "tabulated";
    }
    return "?";
  }
};

/// (1, h, h^2, ..., h^degree) with h = spec.base(t). Powers are built by
/// repeated multiplication so that every prefix is bit-identical.
inline Vector eval_basis(const BasisSpec& spec, int degree, double t) {
  if (degree < 0) throw std::invalid_argument("basis degree must be nonnegative");
  Vector out(degree + 1);
  out[0] = 1.0;
  if (degree == 0) {
    // still validate the query point
    (void)spec.base(t);
    return out;
  }
  const double h = spec.base(t);
  for (int k = 1; k <= degree; ++k) out[k] = out[k - 1] * h;
  return out;
}

inline Matrix eval_basis_grid(const BasisSpec& spec, int degree, std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("basis grid must be nonempty");
  Matrix out(static_cast<Eigen::Index>(grid.size()), degree + 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = eval_basis(spec, degree, grid[i]).transpose();
  }
  return out;
}

}  // namespace ratapprox

#endif  // RATAPPROX_BASIS_HPP
