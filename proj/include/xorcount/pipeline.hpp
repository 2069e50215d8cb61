#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "xorcount/bounds.hpp"
#include "xorcount/oracle.hpp"
#include "xorcount/report.hpp"
#include "xorcount/tables.hpp"

namespace xorcount {

/// A counting problem read from disk. Held behind a pointer because oracles
/// keep a reference to the problem.
struct LoadedProblem {
  std::string path;
  std::string kind;  // "cnf", "table" or "explicit"
  CountingProblem problem;
  std::optional<ContingencyTableSpec> table;
  std::vector<std::string> warnings;
};

/// Format by extension: .cnf / .dimacs, .table / .tbl, .set / .txt.
std::unique_ptr<LoadedProblem> load_problem(const std::filesystem::path& path);
std::unique_ptr<LoadedProblem> make_table_problem(const ContingencyTableSpec& spec, std::string name);

enum class OracleChoice { automatic, explicit_set, exhaustive, external };

/// automatic: explicit sets scan directly; formulas go to the external solver
/// when a profile is given (or XORCOUNT_SOLVER is set), else to exhaustive
/// enumeration when the projection is small enough.
std::unique_ptr<Oracle> choose_oracle(const CountingProblem& problem, OracleChoice choice,
                                      const std::optional<SolverProfile>& profile);

enum class BoundMode { lower, upper, count };

struct BoundOptions {
  BoundMode mode = BoundMode::lower;
  double f = 0.5;
  std::optional<std::size_t> m;
  std::optional<std::size_t> trials;  // lb default 100; ub derives T from delta
  double delta = 0.05;
  double kappa = 0.5;
  std::optional<double> c;  // data-chosen when empty
  double alpha = 0.04;
  bool drop_log_n = false;
  bool bonferroni = false;
  std::size_t coarse_trials = 20;
  std::uint64_t seed = 0;
  TrialOptions trial;
};

enum class RunStatus { issued, inconclusive };

struct BoundOutcome {
  RunStatus status = RunStatus::issued;
  /// Headline value (log2); -inf when vacuous or inconclusive.
  double bound_log2 = 0.0;
  std::vector<Json> certificates;
  std::string message;
  double wall_time_s = 0.0;
};

// Lower bounds pick a promising m (unless given) and take the best certificate
// over m-2..m+1. Upper bounds without an m start one above the certified lower
// bound and step up until the majority-empty event fires; every attempt is
// kept as a certificate. Counting runs the median-rule estimator.
BoundOutcome run_lower(const Oracle& oracle, const BoundOptions& opts);
BoundOutcome run_upper(const Oracle& oracle, const BoundOptions& opts, std::optional<std::size_t> m_hint = {});
BoundOutcome run_count(const Oracle& oracle, const BoundOptions& opts);
BoundOutcome run_bound(const Oracle& oracle, const BoundOptions& opts);

/// Full report document: command echo, seed, config, certificates, timing
/// and aggregated solver statistics.
Json make_report(const std::string& command, const BoundOptions& opts, const std::vector<BoundOutcome>& runs,
                 Json config = Json::object());

struct SweepRow {
  double f = 0.5;
  double lb_log2 = 0.0;
  double ub_log2 = 0.0;
  double wall_time_s = 0.0;
  std::string certificates_path;
  std::string error;  // per-point failure, sweep continues
};

/// One lower and one upper bound per density; certificates for each point go
/// to <cert_dir>/sweep_<index>.json.
std::vector<SweepRow> run_sweep(const Oracle& oracle, const std::vector<double>& densities, BoundOptions opts,
                                const std::filesystem::path& cert_dir);
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct TableRow {
  std::string dataset;
  std::string size;        // "r x c"
  double f_star = 0.5;     // at m = certified lower bound + 1, c = 2, delta = 9/4
  double lb_log2 = 0.0;
  double lb_f = 0.5;
  std::optional<double> exact_log2;
  double ub_log2 = 0.0;
  std::size_t trivial_ub = 0;  // number of cell bits
};

/// Runs the lower and upper pipelines on an encoded table, adds the exact
/// count when the brute-force counter fits its limits.
TableRow run_table(const LoadedProblem& table, const Oracle& oracle, const BoundOptions& opts,
                   std::vector<BoundOutcome>* runs = nullptr, const CountLimits& limits = {});
std::string table_csv_header();
std::string table_csv_row(const TableRow& row);

}  // namespace xorcount
