#include "xorcount/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "xorcount/error.hpp"
#include "xorcount/rng.hpp"

namespace xorcount {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Stream tags keep the heuristic sweep and each pipeline stage on their own
// seeds.
constexpr std::uint64_t kTagPick = 0x7069636b;
constexpr std::uint64_t kTagUpper = 0x75707065;
constexpr std::uint64_t kTagSweep = 0x73776570;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t pick_m(const Oracle& oracle, const BoundOptions& opts) {
  return pick_promising_m(oracle, opts.f, opts.coarse_trials, stream_seed(opts.seed, kTagPick), opts.trial);
}

}  // namespace

std::unique_ptr<LoadedProblem> load_problem(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  const std::string text = read_file(path);
  if (ext == ".cnf" || ext == ".dimacs") {
    auto parsed = parse_dimacs(text);
    auto problem = CountingProblem::cnf(std::move(parsed.formula), "cnf");
    return std::make_unique<LoadedProblem>(
        LoadedProblem{path.string(), "cnf", std::move(problem), std::nullopt, std::move(parsed.warnings)});
  }
  if (ext == ".table" || ext == ".tbl") {
    auto loaded = make_table_problem(parse_table_spec(text), path.stem().string());
    loaded->path = path.string();
    return loaded;
  }
  if (ext == ".set" || ext == ".txt")
    return std::make_unique<LoadedProblem>(LoadedProblem{path.string(), "explicit", parse_explicit_set(text), {}, {}});
  throw ParseError("unrecognized input extension '" + ext + "' (expected .cnf, .table or .set)");
}

std::unique_ptr<LoadedProblem> make_table_problem(const ContingencyTableSpec& spec, std::string name) {
  auto warnings = spec.validate();
  auto encoded = encode_to_cnf(spec);
  return std::make_unique<LoadedProblem>(
      LoadedProblem{std::move(name), "table", std::move(encoded.problem), spec, std::move(warnings)});
}

std::unique_ptr<Oracle> choose_oracle(const CountingProblem& problem, OracleChoice choice,
                                      const std::optional<SolverProfile>& profile) {
  switch (choice) {
    case OracleChoice::explicit_set:
      return make_oracle(problem, OracleKind::explicit_set);
    case OracleChoice::exhaustive:
      return make_oracle(problem, OracleKind::exhaustive);
    case OracleChoice::external:
      return make_oracle(problem, OracleKind::external, profile);
    case OracleChoice::automatic:
      break;
  }
  if (problem.is_explicit()) return make_oracle(problem, OracleKind::explicit_set);
  auto p = profile ? profile : SolverProfile::from_env();
  if (p) return make_oracle(problem, OracleKind::external, p);
  if (problem.n() <= kMaxExhaustiveVars) {
    try {
      return make_oracle(problem, OracleKind::exhaustive);
    } catch (const CapacityError& e) {
      throw ParameterError(std::string(e.what()) + "; pass --solver or set XORCOUNT_SOLVER");
    }
  }
  throw ParameterError("projection has " + std::to_string(problem.n()) +
                       " variables; pass --solver or set XORCOUNT_SOLVER");
}

BoundOutcome run_lower(const Oracle& oracle, const BoundOptions& opts) {
  BoundOutcome out;
  const std::size_t n = oracle.num_vars();
  try {
    std::size_t lo, hi;
    if (opts.m) {
      lo = hi = *opts.m;
    } else {
      const std::size_t m = pick_m(oracle, opts);
      lo = m > 2 ? m - 2 : 1;
      hi = std::min(n, m + 1);
    }
    const auto cert = best_lower_bound(oracle, opts.f, lo, hi, opts.trials.value_or(100), opts.kappa, opts.c,
                                       opts.seed, opts.bonferroni, opts.trial);
    out.bound_log2 = cert.bound_log2;
    out.wall_time_s = cert.wall_time_s;
    out.certificates.push_back(to_json(cert));
    out.message = cert.issued ? "lower bound issued" : "lower bound vacuous (estimate below threshold)";
  } catch (const InconclusiveError& e) {
    out.status = RunStatus::inconclusive;
    out.bound_log2 = kNegInf;
    out.message = e.what();
  }
  return out;
}

BoundOutcome run_upper(const Oracle& oracle, const BoundOptions& opts, std::optional<std::size_t> m_hint) {
  BoundOutcome out;
  const std::size_t n = oracle.num_vars();
  out.bound_log2 = static_cast<double>(n);
  try {
    std::size_t first = 0, last = 0;
    if (opts.m) {
      first = last = *opts.m;
    } else {
      first = std::min(n, (m_hint ? *m_hint : pick_m(oracle, opts)) + 1);
      last = n;
    }
    for (std::size_t m = first; m <= last; ++m) {
      const auto cert = upper_bound(oracle, m, opts.f, opts.delta, stream_seed(opts.seed, kTagUpper + m), opts.trial);
      out.wall_time_s += cert.wall_time_s;
      out.certificates.push_back(to_json(cert));
      if (cert.event_fired) {
        out.bound_log2 = cert.verdict_log2;
        break;
      }
    }
    out.message = out.bound_log2 < static_cast<double>(n) ? "upper bound issued" : "upper bound is the trivial 2^n";
  } catch (const InconclusiveError& e) {
    out.status = RunStatus::inconclusive;
    out.message = e.what();
  }
  return out;
}

BoundOutcome run_count(const Oracle& oracle, const BoundOptions& opts) {
  BoundOutcome out;
  SparseCountConfig cfg;
  cfg.delta = opts.delta;
  cfg.alpha = opts.alpha;
  cfg.drop_log_n = opts.drop_log_n;
  if (opts.f != 0.5) {
    const double f = opts.f;
    cfg.density = [f](std::size_t) { return f; };
  }
  try {
    const auto res = sparse_count(oracle, cfg, opts.seed, opts.trial);
    out.bound_log2 = res.below_one ? kNegInf : res.log2_estimate;
    out.wall_time_s = res.wall_time_s;
    out.certificates.push_back(to_json(res, cfg, oracle.num_vars(), opts.seed));
    out.message = res.below_one ? "no solution witnessed" : (res.exhausted ? "estimator ran out of levels" : "median-rule estimate, within a factor 16 with the configured confidence");
  } catch (const InconclusiveError& e) {
    out.status = RunStatus::inconclusive;
    out.bound_log2 = kNegInf;
    out.message = e.what();
  }
  return out;
}

BoundOutcome run_bound(const Oracle& oracle, const BoundOptions& opts) {
  switch (opts.mode) {
    case BoundMode::lower:
      return run_lower(oracle, opts);
    case BoundMode::upper:
      return run_upper(oracle, opts);
    case BoundMode::count:
      return run_count(oracle, opts);
  }
  throw ParameterError("unknown mode");
}

Json make_report(const std::string& command, const BoundOptions& opts, const std::vector<BoundOutcome>& runs,
                 Json config) {
  Json cfg = {{"f", opts.f},
              {"delta", opts.delta},
              {"kappa", opts.kappa},
              {"alpha", opts.alpha},
              {"drop_log_n", opts.drop_log_n},
              {"bonferroni", opts.bonferroni},
              {"coarse_trials", opts.coarse_trials},
              {"jobs", opts.trial.jobs},
              {"budget_s", opts.trial.budget.count()}};
  cfg["m"] = opts.m ? Json(*opts.m) : Json(nullptr);
  cfg["T"] = opts.trials ? Json(*opts.trials) : Json(nullptr);
  cfg["c"] = opts.c ? Json(*opts.c) : Json(nullptr);
  cfg.update(config);

  Json report;
  report["command"] = command;
  report["seed"] = opts.seed;
  report["config"] = cfg;
  report["certificates"] = Json::array();
  report["results"] = Json::array();
  report["timing"] = Json::array();
  std::size_t sat = 0, unsat = 0, unknown = 0;
  double solver_time = 0.0;
  bool all_issued = true;
  for (const auto& run : runs) {
    for (const auto& c : run.certificates) {
      report["certificates"].push_back(c);
      for (const auto& t : c["trial_outcomes"]) {
        const auto o = t["outcome"].get<std::string>();
        sat += o == "sat";
        unsat += o == "unsat";
        unknown += o == "unknown";
        solver_time += t["solver_time_s"].get<double>();
      }
    }
    const bool issued = run.status == RunStatus::issued;
    all_issued = all_issued && issued;
    Json r = {{"status", issued ? "issued" : "inconclusive"}, {"message", run.message}};
    r["bound_log2"] = std::isfinite(run.bound_log2) ? Json(run.bound_log2) : Json(nullptr);
    r["bound_ln"] = std::isfinite(run.bound_log2) ? Json(run.bound_log2 * kLn2) : Json(nullptr);
    report["results"].push_back(r);
    report["timing"].push_back(run.wall_time_s);
  }
  report["status"] = all_issued ? "issued" : "inconclusive";
  report["solver"] = {{"trials", sat + unsat + unknown},
                      {"sat", sat},
                      {"unsat", unsat},
                      {"unknown", unknown},
                      {"solver_time_s", solver_time}};
  return report;
}

std::vector<SweepRow> run_sweep(const Oracle& oracle, const std::vector<double>& densities, BoundOptions opts,
                                const std::filesystem::path& cert_dir) {
  std::filesystem::create_directories(cert_dir);
  std::vector<SweepRow> rows;
  const std::uint64_t base_seed = opts.seed;
  for (std::size_t k = 0; k < densities.size(); ++k) {
    SweepRow row;
    row.f = densities[k];
    row.certificates_path = (cert_dir / ("sweep_" + std::to_string(k) + ".json")).string();
    opts.f = row.f;
    opts.seed = stream_seed(base_seed, kTagSweep + k);
    Json doc;
    try {
      const auto lb = run_lower(oracle, opts);
      std::optional<std::size_t> hint;
      if (!lb.certificates.empty() && lb.certificates.front()["params"]["issued"].get<bool>())
        hint = lb.certificates.front()["m"].get<std::size_t>();
      const auto ub = run_upper(oracle, opts, hint);
      row.lb_log2 = lb.bound_log2;
      row.ub_log2 = ub.status == RunStatus::issued ? ub.bound_log2 : std::nan("");
      row.wall_time_s = lb.wall_time_s + ub.wall_time_s;
      doc = make_report("sweep", opts, {lb, ub});
    } catch (const Error& e) {
      row.lb_log2 = row.ub_log2 = std::nan("");
      row.error = e.what();
      doc = make_report("sweep", opts, {});
      doc["status"] = "failed";
      doc["error"] = row.error;
    }
    std::ofstream(row.certificates_path) << doc.dump(2) << '\n';
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "f,lb_log2,ub_log2,wall_time_s,certificates_path\n";
  for (const auto& r : rows)
    out << format_number(r.f) << ',' << format_number(r.lb_log2) << ',' << format_number(r.ub_log2) << ','
        << format_number(r.wall_time_s) << ',' << r.certificates_path << '\n';
  return out.str();
}

TableRow run_table(const LoadedProblem& table, const Oracle& oracle, const BoundOptions& opts,
                   std::vector<BoundOutcome>* runs, const CountLimits& limits) {
  if (!table.table) throw ParameterError("run_table needs a contingency-table input");
  const auto& spec = *table.table;
  TableRow row;
  row.dataset = std::filesystem::path(table.path).stem().string();
  row.size = std::to_string(spec.rows) + " x " + std::to_string(spec.cols);
  row.trivial_ub = table.problem.n();
  row.lb_f = opts.f;

  const auto lb = run_lower(oracle, opts);
  std::optional<std::size_t> m_lb;
  if (!lb.certificates.empty() && lb.certificates.front()["params"]["issued"].get<bool>())
    m_lb = lb.certificates.front()["m"].get<std::size_t>();
  const auto ub = run_upper(oracle, opts, m_lb);
  row.lb_log2 = lb.bound_log2;
  row.ub_log2 = ub.bound_log2;

  const std::size_t n = table.problem.n();
  const std::size_t m_star = std::min(n, (m_lb ? *m_lb : pick_m(oracle, opts)) + 1);
  row.f_star = min_density_fstar_slack(n, m_star, 2, 2.25).f_star;

  try {
    const BigInt exact = brute_force_count(spec, limits);
    row.exact_log2 = exact == 0 ? kNegInf : log2_big(exact);
  } catch (const CapacityError&) {
  }
  if (runs) {
    runs->push_back(lb);
    runs->push_back(ub);
  }
  return row;
}

std::string table_csv_header() { return "Dataset,size,f*,LB(f),log2|S|,UB,trivial UB\n"; }

std::string table_csv_row(const TableRow& r) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << r.dataset << ',' << r.size << ',' << r.f_star << ',';
  if (std::isfinite(r.lb_log2)) {
    out << r.lb_log2;
  } else {
    out << '-';
  }
  out << " (" << r.lb_f << "),";
  if (r.exact_log2 && std::isfinite(*r.exact_log2)) {
    out << *r.exact_log2;
  } else {
    out << '-';
  }
  out << ',' << r.ub_log2 << ',' << r.trivial_ub << '\n';
  return out.str();
}

}  // namespace xorcount
