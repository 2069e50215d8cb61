// Command-line front end: collision bounds, minimum densities, certified
// lower/upper bounds, the median-rule estimator, sweeps and table reports.
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "xorcount/comb.hpp"
#include "xorcount/error.hpp"
#include "xorcount/pipeline.hpp"
#include "xorcount/report.hpp"

using namespace xorcount;

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr int kExitInconclusive = 2;

struct Common {
  std::uint64_t seed = 0;
  double f = 0.5;
  std::size_t m = 0;
  std::size_t T = 0;
  double delta = 0.05;
  double kappa = 0.5;
  double c = 0.0;
  double alpha = 0.04;
  bool drop_log_n = false;
  std::string solver;
  double budget_s = 0.0;
  bool native_xor = false;
  std::size_t chunk = 6;
  bool bonferroni = false;
  std::string json_out;
  std::string csv_out;
  std::size_t jobs = 1;
  std::string oracle = "auto";
  std::size_t coarse_T = 20;
};

void add_common(CLI::App* app, Common& o) {
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--f", o.f, "constraint density in [0, 1/2]");
  app->add_option("--m", o.m, "number of parity constraints (default: heuristic)");
  app->add_option("--T", o.T, "trials per estimate (lower bound default 100)");
  app->add_option("--delta", o.delta, "failure probability for upper bounds and counting");
  app->add_option("--kappa", o.kappa, "lower-bound slack kappa > 0");
  app->add_option("--c-threshold", o.c, "lower-bound threshold c in (0, 1]; default is the observed rate");
  app->add_option("--alpha", o.alpha, "estimator constant alpha");
  app->add_flag("--drop-log-n", o.drop_log_n, "estimator: drop the ln n factor from T");
  app->add_option("--solver", o.solver, "solver command template, e.g. \"cryptominisat5 --verb 0 {in}\"");
  app->add_option("--budget-s", o.budget_s, "per-query solver budget in seconds (0 = none)");
  app->add_flag("--native-xor", o.native_xor, "pass parity constraints as x-lines");
  app->add_option("--chunk", o.chunk, "xor chunk size for CNF expansion")->check(CLI::Range(2, 64));
  app->add_flag("--bonferroni", o.bonferroni, "union-bound the lower-bound confidence over the m range");
  app->add_option("--json", o.json_out, "write the JSON report here");
  app->add_option("--jobs", o.jobs, "concurrent trials")->check(CLI::Range(1, 256));
  app->add_option("--oracle", o.oracle, "auto, explicit, exhaustive or external")
      ->check(CLI::IsMember({"auto", "explicit", "exhaustive", "external"}));
  app->add_option("--coarse-T", o.coarse_T, "trials per point of the m heuristic");
}

BoundOptions bound_options(const Common& o) {
  BoundOptions b;
  b.f = o.f;
  if (o.m > 0) b.m = o.m;
  if (o.T > 0) b.trials = o.T;
  b.delta = o.delta;
  b.kappa = o.kappa;
  if (o.c > 0) b.c = o.c;
  b.alpha = o.alpha;
  b.drop_log_n = o.drop_log_n;
  b.bonferroni = o.bonferroni;
  b.coarse_trials = o.coarse_T;
  b.seed = o.seed;
  b.trial.jobs = o.jobs;
  b.trial.budget = Budget(o.budget_s);
  return b;
}

std::optional<SolverProfile> solver_profile(const Common& o) {
  std::optional<SolverProfile> p = SolverProfile::from_env();
  if (!o.solver.empty()) {
    p = SolverProfile{};
    p->command = o.solver;
  }
  if (p) {
    p->native_xor = p->native_xor || o.native_xor;
    p->chunk = o.chunk;
  }
  return p;
}

OracleChoice oracle_choice(const std::string& s) {
  static const std::map<std::string, OracleChoice> names{{"auto", OracleChoice::automatic},
                                                         {"explicit", OracleChoice::explicit_set},
                                                         {"exhaustive", OracleChoice::exhaustive},
                                                         {"external", OracleChoice::external}};
  return names.at(s);
}

std::string echo(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

void print_bound(const char* label, double log2_value) {
  std::cout << label << ": ";
  if (std::isfinite(log2_value)) {
    std::cout << "log2 = " << format_number(log2_value) << ", ln = " << format_number(log2_value * kLn2) << '\n';
  } else {
    std::cout << "vacuous\n";
  }
}

void print_warnings(const LoadedProblem& p) {
  for (const auto& w : p.warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified bounds on model counts with sparse parity constraints"};
  app.require_subcommand(1);

  // epsilon
  std::size_t e_n = 0, e_m = 0;
  std::string e_q = "2";
  double e_f = 0.5;
  bool e_threshold = false;
  std::string e_json;
  auto* eps = app.add_subcommand("epsilon", "collision bound epsilon(n, m, q, f) and variance bound v(q)");
  eps->add_option("--n", e_n, "variables")->required();
  eps->add_option("--m", e_m, "constraints")->required();
  eps->add_option("--q", e_q, "set size (decimal, may be huge)")->required();
  eps->add_option("--f", e_f, "density");
  eps->add_flag("--threshold", e_threshold, "also print the upper-bound threshold U(n, m, f)");
  eps->add_option("--json", e_json, "write JSON here");

  // fstar
  std::size_t s_n = 0, s_m = 0, s_c = 2;
  double s_delta = 2.25, s_tol = kDensityTolerance;
  std::string s_q, s_json;
  auto* fstar = app.add_subcommand("fstar", "minimum density for a constant-factor guarantee");
  fstar->add_option("--n", s_n, "variables")->required();
  fstar->add_option("--m", s_m, "constraints")->required();
  fstar->add_option("--c", s_c, "slack: q = 2^(m + c)");
  fstar->add_option("--q", s_q, "explicit set size (overrides --c)");
  fstar->add_option("--delta", s_delta, "delta > 1 (9/4 by default)");
  fstar->add_option("--tol", s_tol, "bisection tolerance");
  fstar->add_option("--json", s_json, "write JSON here");

  // asymptotic
  std::string a_regime;
  AsymptoticParams a_params;
  auto* asym = app.add_subcommand("asymptotic", "closed-form densities for large m");
  asym->add_option("--regime", a_regime, "lower, linear or sublinear")
      ->required()
      ->check(CLI::IsMember({"lower", "linear", "sublinear"}));
  asym->add_option("--m", a_params.m, "m")->required();
  asym->add_option("--kappa", a_params.kappa, "kappa > 1 (lower, sublinear)");
  asym->add_option("--alpha", a_params.alpha, "alpha in (0, 1] (linear)");
  asym->add_option("--beta", a_params.beta, "beta in (0, 1) (sublinear)");

  // bound
  Common b_opts;
  std::string b_input, b_mode = "lb";
  auto* bound = app.add_subcommand("bound", "certified lower/upper bound or median-rule estimate");
  bound->add_option("input", b_input, ".cnf, .table or .set file")->required()->check(CLI::ExistingFile);
  bound->add_option("--mode", b_mode, "lb, ub or count")->check(CLI::IsMember({"lb", "ub", "count"}));
  add_common(bound, b_opts);

  // sweep
  Common w_opts;
  std::string w_input, w_cert_dir = "sweep_certificates";
  std::vector<double> w_fs{0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  auto* sweep = app.add_subcommand("sweep", "lower and upper bounds across densities, as CSV");
  sweep->add_option("input", w_input, ".cnf, .table or .set file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--f-list", w_fs, "densities")->delimiter(',');
  sweep->add_option("--cert-dir", w_cert_dir, "directory for per-point certificates");
  sweep->add_option("--csv", w_opts.csv_out, "write CSV here (default stdout)");
  add_common(sweep, w_opts);

  // table
  Common t_opts;
  std::string t_input, t_name;
  bool t_count_only = false;
  std::size_t t_max_cells = 64;
  auto* table = app.add_subcommand("table", "contingency-table bounds, exact count when feasible");
  table->add_option("input", t_input, ".table spec")->required()->check(CLI::ExistingFile);
  table->add_option("--name", t_name, "dataset label in the CSV row");
  table->add_flag("--count-only", t_count_only, "only run the exact counter");
  table->add_option("--max-cells", t_max_cells, "exact counter cell limit");
  table->add_option("--csv", t_opts.csv_out, "append the CSV row here (header written if new)");
  add_common(table, t_opts);

  CLI11_PARSE(app, argc, argv);
  const std::string command = echo(argc, argv);

  try {
    if (*eps) {
      const BigInt q = parse_big(e_q);
      const CollisionModel model(e_n, e_m, e_f);
      EpsilonInputs{e_n, e_m, q, e_f}.validate();
      const LogNum e = model.epsilon(q);
      const LogNum v = model.variance_bound(q);
      std::cout << "epsilon(n=" << e_n << ", m=" << e_m << ", q=" << q << ", f=" << format_number(e_f)
                << "): " << describe_log(e.log()) << '\n';
      std::cout << "v(q): " << describe_log(v.log()) << '\n';
      Json j = {{"n", e_n}, {"m", e_m}, {"q", q.str()}, {"f", e_f}, {"epsilon_ln", e.log()}, {"v_ln", v.log()}};
      if (e_threshold) {
        const BigInt u = upper_bound_threshold(e_n, e_m, e_f);
        std::cout << "U(n, m, f) = " << u << " (log2 = " << format_number(log2_big(u))
                  << ", ln = " << format_number(log_big(u)) << ")\n";
        j["U"] = u.str();
      }
      if (!e_json.empty()) write_text(e_json, j.dump(2) + "\n");
      return 0;
    }

    if (*fstar) {
      const DensityCertificate cert = s_q.empty() ? min_density_fstar_slack(s_n, s_m, s_c, s_delta, s_tol)
                                                  : min_density_fstar(s_n, s_m, parse_big(s_q), s_delta, s_tol);
      std::cout << "f* = " << format_number(cert.f_star) << " (n=" << s_n << ", m=" << s_m << ", q=" << cert.q
                << ", delta=" << format_number(s_delta) << ", mu=" << format_number(cert.mu) << ")\n";
      if (!cert.met_at_half) std::cout << "condition fails even at f = 1/2\n";
      std::cout << "condition at f*: " << describe_log(cert.condition_value.log()) << '\n';
      std::cout << "threshold: " << describe_log(cert.threshold.log()) << '\n';
      if (!s_json.empty()) write_text(s_json, to_json(cert).dump(2) + "\n");
      return cert.met_at_half ? 0 : kExitInconclusive;
    }

    if (*asym) {
      const DensityRegime r = a_regime == "lower"    ? DensityRegime::lower
                              : a_regime == "linear" ? DensityRegime::linear
                                                     : DensityRegime::sublinear;
      std::cout << "f = " << format_number(asymptotic_density(r, a_params)) << " (natural log)\n";
      return 0;
    }

    if (*bound) {
      const auto loaded = load_problem(b_input);
      print_warnings(*loaded);
      const auto oracle = choose_oracle(loaded->problem, oracle_choice(b_opts.oracle), solver_profile(b_opts));
      BoundOptions opts = bound_options(b_opts);
      opts.mode = b_mode == "lb" ? BoundMode::lower : b_mode == "ub" ? BoundMode::upper : BoundMode::count;
      const BoundOutcome out = run_bound(*oracle, opts);
      std::cout << "input: " << loaded->path << " (" << loaded->kind << ", n = " << loaded->problem.n()
                << ", oracle = " << oracle->name() << ")\n";
      print_bound(b_mode == "lb" ? "lower bound" : b_mode == "ub" ? "upper bound" : "estimate", out.bound_log2);
      std::cout << out.message << '\n';
      const Json report = make_report(command, opts, {out}, {{"mode", b_mode}, {"input", loaded->path}});
      if (!b_opts.json_out.empty()) write_text(b_opts.json_out, report.dump(2) + "\n");
      return out.status == RunStatus::issued ? 0 : kExitInconclusive;
    }

    if (*sweep) {
      const auto loaded = load_problem(w_input);
      print_warnings(*loaded);
      const auto oracle = choose_oracle(loaded->problem, oracle_choice(w_opts.oracle), solver_profile(w_opts));
      const auto rows = run_sweep(*oracle, w_fs, bound_options(w_opts), w_cert_dir);
      const std::string csv = sweep_csv(rows);
      if (w_opts.csv_out.empty()) {
        std::cout << csv;
      } else {
        write_text(w_opts.csv_out, csv);
      }
      bool ok = true;
      for (const auto& r : rows) {
        if (!r.error.empty()) std::cerr << "f = " << format_number(r.f) << ": " << r.error << '\n';
        ok = ok && r.error.empty() && !std::isnan(r.ub_log2);
      }
      return ok ? 0 : kExitInconclusive;
    }

    if (*table) {
      const auto loaded = load_problem(t_input);
      if (!loaded->table) throw ParameterError("table expects a .table spec");
      print_warnings(*loaded);
      CountLimits limits;
      limits.max_cells = t_max_cells;
      if (t_count_only) {
        const BigInt count = brute_force_count(*loaded->table, limits);
        std::cout << "count = " << count;
        if (count > 0) std::cout << " (log2 = " << format_number(log2_big(count)) << ", ln = " << format_number(log_big(count)) << ")";
        std::cout << '\n';
        return 0;
      }
      const auto oracle = choose_oracle(loaded->problem, oracle_choice(t_opts.oracle), solver_profile(t_opts));
      const BoundOptions opts = bound_options(t_opts);
      std::vector<BoundOutcome> runs;
      TableRow row = run_table(*loaded, *oracle, opts, &runs, limits);
      if (!t_name.empty()) row.dataset = t_name;
      std::cout << "cell bits (trivial upper bound): " << row.trivial_ub << '\n';
      print_bound("lower bound", row.lb_log2);
      print_bound("upper bound", row.ub_log2);
      if (row.exact_log2) print_bound("exact", *row.exact_log2);
      std::cout << "f* = " << format_number(row.f_star) << '\n';
      const std::string line = table_csv_row(row);
      if (t_opts.csv_out.empty()) {
        std::cout << table_csv_header() << line;
      } else {
        const bool fresh = !std::filesystem::exists(t_opts.csv_out);
        std::ofstream out(t_opts.csv_out, std::ios::app);
        if (fresh) out << table_csv_header();
        out << line;
      }
      const Json report = make_report(command, opts, runs, {{"input", loaded->path}});
      if (!t_opts.json_out.empty()) write_text(t_opts.json_out, report.dump(2) + "\n");
      bool ok = true;
      for (const auto& r : runs) ok = ok && r.status == RunStatus::issued;
      return ok ? 0 : kExitInconclusive;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
