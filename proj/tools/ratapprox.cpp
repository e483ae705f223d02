// ratapprox command-line front end.
//
//   ratapprox solve <config>
//   ratapprox reproduce <table1|table2|table3> --out <dir>
//   ratapprox check --seed <int> --out <file>
//   ratapprox oracle <config>
//
// Exit codes: 0 ok, 1 bad config, 2 linesearch failure (or a failed row in
// reproduce), 3 indeterminate oracle. RATAPPROX_THREADS caps the number of
// rows reproduce runs at once (default 1).

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ratapprox/ratapprox.hpp"

namespace fs = std::filesystem;
using namespace ratapprox;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kSolverFailure = 2;
constexpr int kIndeterminate = 3;

unsigned thread_cap() {
  const char* env = std::getenv("RATAPPROX_THREADS");
  if (!env || !*env) return 1;
  unsigned v = 0;
  const std::string_view s(env);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
    std::cerr << "warning: ignoring RATAPPROX_THREADS='" << env << "', using 1\n";
    return 1;
  }
  return v;
}

std::string file_stem(const ExperimentRow& row, Variant v) {
  std::string s = row.function + "_" + row.basis.describe() + "_" + std::to_string(row.n) + "_" +
                  std::to_string(row.m) + "_M" + std::to_string(row.points) + "_v" +
                  std::to_string(static_cast<int>(v));
  for (char& c : s) {
    if (c == '(' || c == ')') c = '_';
  }
  s.erase(std::unique(s.begin(), s.end(), [](char a, char b) { return a == '_' && b == '_'; }), s.end());
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

int cmd_solve(const std::string& path) {
  const RunConfig cfg = load_config(path);
  const ProblemInstance inst = cfg.instance();
  const RunReport report = solve_approximation(inst, cfg.solver, std::nullopt, cfg.tolerance);

  const fs::path dir = cfg.output_dir;
  std::ostringstream iterates;
  write_iterates_csv(iterates, report);
  write_text_file(dir / "iterates.csv", iterates.str());
  write_text_file(dir / "summary.json", summary_json(report, inst.n()).dump(2));
  std::ostringstream plot;
  write_plot_csv(plot, cfg.lo, cfg.hi, [&](double t) { return cfg.f_at(t); }, ratio_function(inst, report.best_x));
  write_text_file(dir / "plot.csv", plot.str());

  std::cout << "stop_reason " << stop_reason_name(report.stop_reason) << "\n"
            << "best_psi " << format_number(report.best_merit) << " at iteration " << report.best_iter << " of "
            << report.iterations() << "\n"
            << "wrote " << (dir / "iterates.csv").string() << ", summary.json, plot.csv\n";
  if (!report.message.empty()) std::cout << report.message << "\n";
  return report.stop_reason == StopReason::LinesearchFailure ? kSolverFailure : kOk;
}

int cmd_reproduce(const std::string& name, const std::string& out_dir) {
  const auto table = find_table(name);
  if (!table) {
    std::cerr << "unknown table '" << name << "' (expected table1, table2 or table3)\n";
    return kConfigError;
  }
  struct Job {
    const ExperimentRow* row;
    Variant variant;
  };
  std::vector<Job> jobs;
  for (const ExperimentRow& row : table->rows) {
    for (Variant v : {Variant::V1, Variant::V2}) jobs.push_back({&row, v});
  }
  const fs::path dir = out_dir;
  const fs::path logs = dir / (table->name + "_iterates");
  fs::create_directories(logs);

  std::vector<RowOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      outcomes[j] = run_row(*table, *jobs[j].row, jobs[j].variant);
      std::ostringstream log;
      write_iterates_csv(log, outcomes[j].report);
      write_text_file(logs / (file_stem(*jobs[j].row, jobs[j].variant) + ".csv"), log.str());
    }
  };
  const unsigned threads = std::min<unsigned>(thread_cap(), static_cast<unsigned>(jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const SolveConfig& c = table->config;
  std::ostringstream csv;
  csv << "# " << table->name << ": uniform grid of M points on [-1,1]; max_iter " << c.max_iter;
  if (c.psi_target) csv << "; stop at psi <= " << format_number(*c.psi_target);
  csv << "; beta " << format_number(c.linesearch.beta) << ", delta " << format_number(c.linesearch.delta)
      << ", theta " << format_number(c.linesearch.theta) << "; active tolerance max("
      << format_number(table->tolerance.floor) << ", " << format_number(table->tolerance.rel) << " * psi)\n";
  csv << "function,basis,n,m,M,variant,iterations,best_iter,best_psi,final_distance,wall_time_ms,stop_reason,error\n";
  int failed = 0;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const ExperimentRow& row = *jobs[j].row;
    const RowOutcome& o = outcomes[j];
    if (o.failed()) ++failed;
    csv << row.function << ',' << row.basis.describe() << ',' << row.n << ',' << row.m << ',' << row.points << ','
        << static_cast<int>(jobs[j].variant) << ',';
    if (o.error.empty()) {
      csv << o.report.iterations() << ',' << o.report.best_iter << ',' << format_number(o.report.best_merit) << ','
          << (o.final_distance ? format_number(*o.final_distance) : "") << ','
          << format_number(std::chrono::duration<double, std::milli>(o.report.wall_time).count()) << ','
          << stop_reason_name(o.report.stop_reason) << ',' << csv_field(o.report.message) << '\n';
    } else {
      csv << ",,,,,error," << csv_field(o.error) << '\n';
    }
    std::cout << row.label() << " V" << static_cast<int>(jobs[j].variant) << ": ";
    if (o.error.empty()) {
      std::cout << stop_reason_name(o.report.stop_reason) << " after " << o.report.iterations()
                << " iterations, best psi " << format_number(o.report.best_merit) << "\n";
    } else {
      std::cout << "error: " << o.error << "\n";
    }
  }
  write_text_file(dir / (table->name + ".csv"), csv.str());
  std::cout << "wrote " << (dir / (table->name + ".csv")).string() << "\n";
  if (failed) std::cerr << failed << " row(s) failed\n";
  return failed ? kSolverFailure : kOk;
}

int cmd_check(std::int64_t seed, const std::string& out, bool skip_known) {
  CheckOptions opt;
  opt.known_runs = !skip_known;
  const CheckReport report = run_checks(static_cast<std::uint64_t>(seed), opt);
  write_text_file(out, report.to_json().dump(2));
  for (const SuiteResult& s : report.suites) {
    std::cout << (s.passed() ? "PASS " : "FAIL ") << s.name << "  cases " << s.cases << "  worst "
              << format_number(s.worst) << "  limit " << format_number(s.limit) << "\n";
  }
  std::cout << (report.passed() ? "all suites passed" : "some suites failed") << "; report in " << out << "\n";
  return report.passed() ? kOk : 1;
}

int cmd_oracle(const std::string& path) {
  const RunConfig cfg = load_config(path);
  const ProblemInstance inst = cfg.instance();
  MinimaxResult r;
  try {
    r = bisection_minimax(inst);
  } catch (const IndeterminateError& e) {
    std::cerr << "oracle indeterminate: " << e.what() << "\n";
    return kIndeterminate;
  }
  std::cout << "value " << format_number(r.value) << "  bracket [" << format_number(r.lo) << ", "
            << format_number(r.hi) << "]  probes " << r.probes << "\n";
  if (r.witness) {
    std::cout << "a";
    for (Eigen::Index i = 0; i < r.witness->a.size(); ++i) std::cout << ' ' << format_number(r.witness->a[i]);
    std::cout << "\nb";
    for (Eigen::Index i = 0; i < r.witness->b.size(); ++i) std::cout << ' ' << format_number(r.witness->b[i]);
    std::cout << "\n";
  }
  const fs::path file = fs::path(cfg.output_dir) / "oracle.json";
  write_text_file(file, oracle_json(r).dump(2));
  std::cout << "wrote " << file.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational approximation by a quasiconvex variational-inequality solver"};
  app.require_subcommand(1);

  std::string solve_config;
  auto* solve = app.add_subcommand("solve", "run the solver on a config file");
  solve->add_option("config", solve_config, "config file")->required();

  std::string table;
  std::string out_dir;
  auto* reproduce = app.add_subcommand("reproduce", "run every row of a benchmark table, both variants");
  reproduce->add_option("table", table, "table1, table2 or table3")->required();
  reproduce->add_option("--out", out_dir, "output directory")->required();

  std::int64_t seed = 0;
  std::string check_out;
  bool skip_known = false;
  auto* check = app.add_subcommand("check", "run the property suites");
  check->add_option("--seed", seed, "random seed")->required();
  check->add_option("--out", check_out, "JSON report path")->required();
  check->add_flag("--skip-known-runs", skip_known, "skip the known-solution solves (about a minute)");

  std::string oracle_config;
  auto* oracle = app.add_subcommand("oracle", "grid minimax value by level-set bisection");
  oracle->add_option("config", oracle_config, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(solve_config);
    if (*reproduce) return cmd_reproduce(table, out_dir);
    if (*check) return cmd_check(seed, check_out, skip_known);
    if (*oracle) return cmd_oracle(oracle_config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  }
  return kOk;
}
