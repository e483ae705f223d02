#ifndef RATAPPROX_REPORT_HPP
#define RATAPPROX_REPORT_HPP

// Result files. Numbers are written in shortest round-trip form, so equal
// runs give byte-identical CSVs.
//
//   iterates CSV  k,psi,alpha,step_norm,residual,dist_to_solution
//   summary JSON  best_psi, best_iter, a, b, total_iters, stop_reason, wall_time_ms
//   plot CSV      t,f,ratio on 1001 uniform points of [lo, hi]

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratapprox/oracle.hpp"
#include "ratapprox/problem.hpp"
#include "ratapprox/vip.hpp"

namespace ratapprox {

inline std::string format_number(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

inline void write_iterates_csv(std::ostream& out, const RunReport& report) {
  out << "k,psi,alpha,step_norm,residual,dist_to_solution\n";
  for (const IterateRecord& r : report.records) {
    out << r.k << ',' << format_number(r.merit) << ',' << format_number(r.alpha) << ','
        << format_number(r.step_norm) << ',' << format_number(r.residual) << ',';
    if (r.dist_to_solution) out << format_number(*r.dist_to_solution);
    out << '\n';
  }
}

inline nlohmann::ordered_json summary_json(const RunReport& report, int n) {
  nlohmann::ordered_json j;
  j["best_psi"] = report.best_merit;
  j["best_iter"] = report.best_iter;
  const CoefficientPair best = CoefficientPair::from_point(report.best_x, n);
  j["a"] = std::vector<double>(best.a.data(), best.a.data() + best.a.size());
  j["b"] = std::vector<double>(best.b.data(), best.b.data() + best.b.size());
  j["total_iters"] = report.iterations();
  j["stop_reason"] = std::string(stop_reason_name(report.stop_reason));
  j["wall_time_ms"] = std::chrono::duration<double, std::milli>(report.wall_time).count();
  return j;
}

/// Best coefficients back from a summary written by summary_json.
inline CoefficientPair coefficients_from_summary(const nlohmann::json& j) {
  const auto a = j.at("a").get<std::vector<double>>();
  const auto b = j.at("b").get<std::vector<double>>();
  return {Eigen::Map<const Vector>(a.data(), static_cast<Eigen::Index>(a.size())),
          Eigen::Map<const Vector>(b.data(), static_cast<Eigen::Index>(b.size()))};
}

/// 1001 uniform samples of f and of the rational function. `ratio` is
/// called with each abscissa.
inline void write_plot_csv(std::ostream& out, double lo, double hi, const std::function<double(double)>& f,
                           const std::function<double(double)>& ratio) {
  constexpr int samples = 1001;
  out << "t,f,ratio\n";
  for (int i = 0; i < samples; ++i) {
    const double t = i == samples - 1 ? hi : lo + i * (hi - lo) / (samples - 1);
    out << format_number(t) << ',' << format_number(f(t)) << ',' << format_number(ratio(t)) << '\n';
  }
}

/// Rational function of x at t; inst must outlive the result. Tabulated
/// bases are only known on the grid, so there the grid values are
/// interpolated linearly.
inline std::function<double(double)> ratio_function(const ProblemInstance& inst, const Vector& x) {
  if (inst.numerator_basis().family != Family::Tabulated && inst.denominator_basis().family != Family::Tabulated) {
    return [&inst, x](double t) { return inst.ratio_at(x, t); };
  }
  std::vector<double> values(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) values[i] = inst.numerator(x, i) / inst.denominator(x, i);
  return [pts = inst.grid().points, values](double t) {
    if (t <= pts.front()) return values.front();
    if (t >= pts.back()) return values.back();
    const auto j = static_cast<std::size_t>(std::upper_bound(pts.begin(), pts.end(), t) - pts.begin());
    const double w = (t - pts[j - 1]) / (pts[j] - pts[j - 1]);
    return (1.0 - w) * values[j - 1] + w * values[j];
  };
}

inline nlohmann::ordered_json oracle_json(const MinimaxResult& r) {
  nlohmann::ordered_json j;
  j["value"] = r.value;
  j["lo"] = r.lo;
  j["hi"] = r.hi;
  j["probes"] = r.probes;
  if (r.witness) {
    const CoefficientPair& w = *r.witness;
    j["a"] = std::vector<double>(w.a.data(), w.a.data() + w.a.size());
    j["b"] = std::vector<double>(w.b.data(), w.b.data() + w.b.size());
  }
  return j;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace ratapprox

#endif  // RATAPPROX_REPORT_HPP
