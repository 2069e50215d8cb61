// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Tolerances and sample sizes are pinned here; do not tune them per run.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "set_gen.hpp"
#include "table_gen.hpp"
#include "xorcount/bounds.hpp"
#include "xorcount/comb.hpp"
#include "xorcount/error.hpp"
#include "xorcount/gf2hash.hpp"
#include "xorcount/pipeline.hpp"
#include "xorcount/rng.hpp"
#include "xorcount/small_solver.hpp"
#include "xorcount/tables.hpp"
#include "xorcount/xor_encode.hpp"

using namespace xorcount;

namespace {

constexpr double kLn2 = 0.69314718055994530942;

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > limit_s) {
    v.pass = false;
    v.detail += "; over the " + format_number(limit_s) + " s budget";
  }
  if (!v.pass) ++failures;
  std::printf("%s %2d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

BigInt random_big_below(std::mt19937_64& gen, std::size_t bits) {
  BigInt x = 0;
  for (std::size_t i = 0; i < bits; i += 64) x = (x << 64) + BigInt(gen());
  return x % pow2(bits);
}

// Uniform-ish q in [2, 2^n]: a random bit length, then random bits below it.
BigInt random_q(std::mt19937_64& gen, std::size_t n) {
  const std::size_t len = 1 + gen() % n;
  BigInt q = pow2(len - 1) + random_big_below(gen, len - 1);
  if (gen() % 10 == 0) q = pow2(n);
  return q < 2 ? BigInt(2) : q;
}

Verdict epsilon_closed_forms() {
  std::mt19937_64 gen(1);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + gen() % 400;
    const std::size_t m = 1 + gen() % n;
    const BigInt q = random_q(gen, n);
    const double half = epsilon({n, m, q, 0.5}).log();
    const double zero = epsilon({n, m, q, 0.0}).log();
    const double want = -static_cast<double>(m) * kLn2;
    worst = std::max(worst, std::abs(half - want) / std::max(1.0, std::abs(want)));
    worst = std::max(worst, std::abs(zero));
  }
  return {worst <= 1e-9, "200 draws, worst log-domain relative error " + fmt(worst)};
}

Verdict concentration_monotone() {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> fdist(0.01, 0.5);
  int bad = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 14 + gen() % 187;
    const std::size_t m = 1 + gen() % n;
    const double f = fdist(gen);
    const CollisionModel model(n, m, f);
    double prev = -std::numeric_limits<double>::infinity();
    for (int z = 1; z <= 10000; ++z) {
      const double cur = model.log_concentration(BigInt(z));
      if (!(cur > prev)) {
        ++bad;
        break;
      }
      prev = cur;
    }
  }
  return {bad == 0, "50 models (f in [0.01, 1/2]), " + std::to_string(bad) + " not strictly increasing"};
}

Verdict threshold_at_half() {
  // The threshold is capped at 2^n, so the closed form needs n >= m + 2.
  int mismatches = 0;
  for (std::size_t n : {18, 24, 40}) {
    for (std::size_t m = 1; m <= 16; ++m) {
      const BigInt want = 3 * pow2(m) - 3;  // smallest integer >= 3 * 2^m (1 - 2^-m)
      if (upper_bound_threshold(n, m, 0.5) != want) ++mismatches;
    }
  }
  return {mismatches == 0, "U(n, m, 1/2) = 3*2^m - 3 for m = 1..16, n in {18, 24, 40}; " +
                               std::to_string(mismatches) + " mismatches"};
}

Verdict fstar_column() {
  // m is one above the printed certified lower bound of each row.
  struct Row {
    std::size_t n, m;
    double published;
  };
  const Row rows[] = {{204, 54, 0.18}, {236, 59, 0.19}, {125, 30, 0.26},
                      {76, 16, 0.34},  {64, 6, 0.41},   {400, 9, 0.42}};
  double worst = 0.0;
  std::string got;
  for (const auto& r : rows) {
    const auto cert = min_density_fstar_slack(r.n, r.m, 2, 2.25);
    worst = std::max(worst, std::abs(cert.f_star - r.published));
    got += (got.empty() ? "" : " ") + fmt(cert.f_star, 3);
  }
  return {worst <= 0.02, "f* = {" + got + "}, worst deviation " + fmt(worst, 3) + " (limit 0.02)"};
}

Verdict survival_exact() {
  std::mt19937_64 gen(5);
  const BigRational densities[] = {BigRational(1, 16), BigRational(1, 8), BigRational(1, 4), BigRational(3, 8),
                                   BigRational(1, 2), exact_rational(0.1), exact_rational(0.3)};
  std::size_t checks = 0, violations = 0;
  for (std::size_t n = 1; n <= 9; ++n) {
    for (std::size_t m = 1; m * n + m <= 20; ++m) {
      const std::size_t cube = std::size_t{1} << n;
      std::vector<std::vector<Assignment>> sets{full_cube(n), random_elements(n, 1, gen())};
      if (cube > 2) sets.push_back(random_elements(n, 2, gen()));
      if (cube > 4) sets.push_back(random_elements(n, cube / 2, gen()));
      if (cube > 8) sets.push_back(random_elements(n, 1 + gen() % (cube - 1), gen()));
      for (const auto& s : sets) {
        const SurvivalPolynomial poly = exact_survival_polynomial(s, n, m);
        for (const auto& f : densities) {
          ++checks;
          if (poly.scaled_probability(f) > BigRational{BigInt(s.size())}) ++violations;
        }
      }
    }
  }
  return {violations == 0 && checks > 0, std::to_string(checks) + " exact checks of 2^m Pr[S(h) >= 1] <= |S|, " +
                                             std::to_string(violations) + " violations"};
}

Verdict lower_bound_soundness() {
  constexpr double kKappa = 0.5, kC = 0.2;
  constexpr std::size_t kTrials = 100, kRuns = 1000;
  const double confidence = lower_bound_confidence(kKappa, kC, kTrials);
  std::vector<CountingProblem> sets;
  for (std::uint64_t s = 0; s < 4; ++s) sets.push_back(CountingProblem::explicit_set(16, random_elements(16, 256, 100 + s)));
  std::vector<std::unique_ptr<Oracle>> oracles;
  for (const auto& p : sets) oracles.push_back(make_oracle(p, OracleKind::exhaustive));
  // m = 11 claims 2^11 * 0.2 / 1.5 = 273 > 256, so every issuance there is wrong.
  const std::size_t ms[] = {9, 10, 11};
  const double fs[] = {0.5, 0.2};
  std::size_t issued = 0, violations = 0;
  for (std::size_t k = 0; k < kRuns; ++k) {
    const auto& oracle = *oracles[k % oracles.size()];
    const std::size_t m = ms[k % 3];
    const double f = fs[(k / 3) % 2];
    const auto est = estimate_survival(oracle, m, f, kTrials, trial_seed(0xacce, k));
    const auto cert = lower_bound(est, kKappa, kC);
    if (!cert.issued) continue;
    ++issued;
    if (cert.bound_log2 > 8.0) ++violations;
  }
  const double p = 1.0 - confidence;
  const double limit = p + 3.0 * std::sqrt(p * (1.0 - p) / kRuns);
  const double rate = static_cast<double>(violations) / kRuns;
  return {rate <= limit, std::to_string(kRuns) + " runs (" + std::to_string(issued) + " issued), violation rate " +
                             fmt(rate) + " <= " + fmt(limit) + " (confidence " + fmt(confidence) + ")"};
}

Verdict upper_bound_soundness() {
  constexpr double kDelta = 0.1;
  constexpr std::size_t kRuns = 500;
  std::vector<CountingProblem> sets;
  for (std::uint64_t s = 0; s < 4; ++s) sets.push_back(CountingProblem::explicit_set(16, random_elements(16, 1024, 200 + s)));
  std::vector<std::unique_ptr<Oracle>> oracles;
  for (const auto& p : sets) oracles.push_back(make_oracle(p, OracleKind::exhaustive));
  const std::size_t ms[] = {8, 9, 10, 11};
  const double fs[] = {0.5, 0.25, 0.1};
  std::size_t fired = 0, violations = 0;
  for (std::size_t k = 0; k < kRuns; ++k) {
    const auto& oracle = *oracles[k % oracles.size()];
    const auto cert = upper_bound(oracle, ms[k % 4], fs[(k / 4) % 3], kDelta, trial_seed(0xbeef, k));
    if (cert.event_fired) ++fired;
    if (cert.verdict < 1024) ++violations;
  }
  const double limit = kDelta + 3.0 * std::sqrt(kDelta * (1.0 - kDelta) / kRuns);
  const double rate = static_cast<double>(violations) / kRuns;
  return {rate <= limit, std::to_string(kRuns) + " runs (" + std::to_string(fired) + " fired), violation rate " +
                             fmt(rate) + " <= " + fmt(limit)};
}

Verdict sparse_count_factor16() {
  std::size_t inside = 0;
  int lo = 99, hi = -99;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto problem = CountingProblem::explicit_set(16, random_elements(16, 1024, 300 + k));
    const auto oracle = make_oracle(problem, OracleKind::explicit_set);
    SparseCountConfig cfg;
    cfg.delta = 0.05;
    const auto res = sparse_count(*oracle, cfg, trial_seed(0xc0, k));
    const int e = res.below_one ? -1 : res.log2_estimate;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    if (!res.below_one && e >= 6 && e <= 14) ++inside;
  }
  return {inside >= 95, std::to_string(inside) + "/100 estimates in [6, 14] (range " + std::to_string(lo) + ".." +
                            std::to_string(hi) + ")"};
}

Verdict blocked_ground_truth() {
  CountLimits wide;
  wide.max_cells = 400;
  std::size_t wrong = 0;
  for (std::size_t n = 3; n <= 10; ++n)
    if (brute_force_count(blocked_matrix(n), wide) != 1 + (n - 1) * (n - 1)) ++wrong;
  const double synth8 = log2_big(brute_force_count(blocked_matrix(8)));
  const BigInt synth20 = brute_force_count(blocked_matrix(20), wide);
  const bool ok = wrong == 0 && std::abs(synth8 - 5.64) <= 0.01 && synth20 == 362 &&
                  std::abs(log2_big(synth20) - 8.49) <= 0.01;
  return {ok, "n = 3..10: " + std::to_string(wrong) + " wrong; synth_8 log2 = " + fmt(synth8) +
                  "; synth_20 = " + synth20.str() + " (log2 " + fmt(log2_big(synth20)) + ")"};
}

bool extends(const std::vector<Clause>& clauses, std::uint64_t base, std::size_t base_vars, std::size_t total) {
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << (total - base_vars)); ++a) {
    const std::uint64_t full = base | (a << base_vars);
    bool ok = true;
    for (const auto& c : clauses) {
      bool sat = false;
      for (Literal l : c)
        if ((((full >> (std::abs(l) - 1)) & 1U) != 0) == (l > 0)) {
          sat = true;
          break;
        }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

Verdict encoding_fidelity() {
  std::mt19937_64 gen(10);
  std::size_t specs = 0, mismatches = 0;
  while (specs < 100) {
    const auto spec = random_table_spec(gen, 3, 3);
    std::optional<EncodedTable> enc;
    try {
      enc = encode_to_cnf(spec);
    } catch (const ParameterError&) {
      continue;  // every cell structurally zero
    }
    if (enc->encoding.num_cell_bits > 14) continue;
    ++specs;
    const auto& cnf = enc->problem.as_cnf();
    SmallSolver solver(cnf.formula);
    std::uint64_t count = 0;
    solver.enumerate(cnf.hash_vars, [&](const BitVector&, const BitVector&) { ++count; });
    if (BigInt(count) != brute_force_count(spec)) ++mismatches;
  }

  std::size_t xor_cases = 0, xor_bad = 0;
  for (std::size_t n = 1; n <= 10; ++n) {
    for (std::size_t chunk = 2; chunk <= 6; ++chunk) {
      for (int variant = 0; variant < 4; ++variant) {
        XorConstraint x;
        for (std::size_t v = 1; v <= n; ++v)
          if (variant < 2 || gen() % 2 == 0) x.vars.push_back(static_cast<int>(v));
        x.rhs = variant % 2 == 1;
        VarAllocator alloc(n);
        const auto clauses = xor_to_cnf(x, chunk, alloc);
        ++xor_cases;
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
          bool parity = false;
          for (int v : x.vars) parity ^= ((a >> (v - 1)) & 1U) != 0;
          if (extends(clauses, a, n, alloc.used()) != (parity == x.rhs)) {
            ++xor_bad;
            break;
          }
        }
      }
    }
  }
  return {mismatches == 0 && xor_bad == 0,
          std::to_string(specs) + " table specs, " + std::to_string(mismatches) + " count mismatches; " +
              std::to_string(xor_cases) + " xor expansions (n <= 10, chunk 2..6), " + std::to_string(xor_bad) +
              " not equivalent"};
}

Verdict sweep_smoke() {
  // Random 3-CNF over 20 variables at clause ratio 3, which leaves thousands of models.
  std::mt19937_64 gen(11);
  std::ostringstream text;
  text << "p cnf 20 60\n";
  for (int c = 0; c < 60; ++c) {
    int a = 1 + static_cast<int>(gen() % 20), b, d;
    do b = 1 + static_cast<int>(gen() % 20);
    while (b == a);
    do d = 1 + static_cast<int>(gen() % 20);
    while (d == a || d == b);
    for (int v : {a, b, d}) text << (gen() & 1 ? v : -v) << ' ';
    text << "0\n";
  }
  const auto dir = std::filesystem::temp_directory_path() / ("xorcount_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto path = dir / "random20.cnf";
  std::ofstream(path) << text.str();

  const auto loaded = load_problem(path);
  const auto exhaustive = choose_oracle(loaded->problem, OracleChoice::exhaustive, std::nullopt);
  const auto count = dynamic_cast<const ExhaustiveOracle&>(*exhaustive).model_count();
  if (count == 0) return {false, "generated formula is unsatisfiable"};
  const double exact = std::log2(static_cast<double>(count));

  BoundOptions opts;
  opts.seed = 2024;
  const auto rows = run_sweep(*exhaustive, {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}, opts, dir / "certs");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "sweep.csv") << sweep_csv(rows);
  std::size_t bad = 0;
  std::string pts;
  for (const auto& r : rows) {
    if (!r.error.empty() || !(r.lb_log2 <= exact) || !(exact <= r.ub_log2)) ++bad;
    pts += " " + fmt(r.f, 2) + ":[" + fmt(r.lb_log2, 3) + "," + fmt(r.ub_log2, 3) + "]";
  }
  std::filesystem::remove_all(dir);
  return {bad == 0, "exact log2 = " + fmt(exact) + " (" + std::to_string(count) + " models); f:[lb,ub]" + pts +
                        "; " + std::to_string(bad) + " points out of order"};
}

}  // namespace

int main() {
  criterion(1, "epsilon closed forms at f = 1/2 and f = 0", 10, epsilon_closed_forms);
  criterion(2, "z^2/v(z) strictly increasing on 1..10^4", 30, concentration_monotone);
  criterion(3, "upper-bound threshold at f = 1/2", 10, threshold_at_half);
  criterion(4, "minimum density f* vs the published column", 120, fstar_column);
  criterion(5, "exact survival probability never exceeds |S| / 2^m", 60, survival_exact);
  criterion(6, "lower-bound soundness", 300, lower_bound_soundness);
  criterion(7, "upper-bound soundness", 300, upper_bound_soundness);
  criterion(8, "median-rule estimate within a factor 16", 600, sparse_count_factor16);
  criterion(9, "blocked-matrix ground truth", 300, blocked_ground_truth);
  criterion(10, "encoding fidelity", 180, encoding_fidelity);
  criterion(11, "density sweep brackets the exact count", 300, sweep_smoke);
  return failures == 0 ? 0 : 1;
}
