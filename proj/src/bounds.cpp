#include "xorcount/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "xorcount/comb.hpp"
#include "xorcount/error.hpp"
#include "xorcount/rng.hpp"

namespace xorcount {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs body(k) for k in [0, count) on up to `jobs` threads. Results land in
// per-index slots, so completion order never matters.
template <typename Body>
void parallel_for(std::size_t count, std::size_t jobs, Body body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        body(k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
}

}  // namespace

double SurvivalEstimate::p_est() const {
  if (!finalized())
    throw InconclusiveError(std::to_string(unknown) + " of " + std::to_string(trials) +
                            " trials are unknown; refusing to estimate");
  return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
}

SurvivalEstimate estimate_survival(const Oracle& oracle, std::size_t m, double f, std::size_t trials,
                                   std::uint64_t seed, const TrialOptions& opts) {
  if (trials == 0) throw ParameterError("need at least one trial");
  const HashParams base{oracle.num_vars(), m, f, seed};
  base.validate();
  const auto start = Clock::now();
  SurvivalEstimate est;
  est.n = oracle.num_vars();
  est.m = m;
  est.f = f;
  est.trials = trials;
  est.seed = seed;
  est.records.resize(trials);
  parallel_for(trials, opts.jobs, [&](std::size_t k) {
    HashParams p = base;
    p.seed = trial_seed(seed, k);
    const OracleVerdict v = oracle.has_survivor(sample_hash(p), opts.budget);
    est.records[k] = TrialRecord{p.seed, v.answer, v.solver_time_s};
  });
  for (const auto& r : est.records) {
    if (r.outcome == Answer::sat) ++est.successes;
    if (r.outcome == Answer::unknown) ++est.unknown;
  }
  est.wall_time_s = seconds_since(start);
  return est;
}

double lower_bound_confidence(double kappa, double c, std::size_t trials) {
  return -std::expm1(-kappa * kappa * c * static_cast<double>(trials) / ((1 + kappa) * (2 + kappa)));
}

LowerBoundCertificate lower_bound(const SurvivalEstimate& est, double kappa, std::optional<double> c) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ParameterError("kappa must be positive");
  if (c && !(*c > 0.0 && *c <= 1.0)) throw ParameterError("c must lie in (0, 1]");
  LowerBoundCertificate cert;
  cert.n = est.n;
  cert.m = est.m;
  cert.f = est.f;
  cert.trials = est.trials;
  cert.successes = est.successes;
  cert.kappa = kappa;
  cert.p_est = est.p_est();
  cert.c_from_data = !c.has_value();
  cert.c = c.value_or(cert.p_est);
  cert.seed = est.seed;
  cert.records = est.records;
  cert.wall_time_s = est.wall_time_s;
  cert.confidence = lower_bound_confidence(kappa, cert.c, est.trials);
  cert.issued = cert.c > 0.0 && cert.p_est >= cert.c;
  if (cert.issued) cert.bound_log2 = static_cast<double>(est.m) + std::log2(cert.c) - std::log2(1 + kappa);
  return cert;
}

LowerBoundCertificate best_lower_bound(const Oracle& oracle, double f, std::size_t m_lo, std::size_t m_hi,
                                       std::size_t trials, double kappa, std::optional<double> c,
                                       std::uint64_t seed, bool bonferroni, const TrialOptions& opts) {
  if (m_lo < 1 || m_lo > m_hi || m_hi > oracle.num_vars())
    throw ParameterError("m range must satisfy 1 <= m_lo <= m_hi <= n");
  std::optional<LowerBoundCertificate> best;
  double total_time = 0.0;
  for (std::size_t m = m_lo; m <= m_hi; ++m) {
    auto cert = lower_bound(estimate_survival(oracle, m, f, trials, stream_seed(seed, m), opts), kappa, c);
    total_time += cert.wall_time_s;
    const bool better = !best || (cert.issued && (!best->issued || cert.bound_log2 > best->bound_log2)) ||
                        (!cert.issued && !best->issued && cert.p_est > best->p_est);
    if (better) best = std::move(cert);
  }
  best->m_candidates = m_hi - m_lo + 1;
  best->bonferroni = bonferroni;
  best->seed = seed;
  best->wall_time_s = total_time;
  if (bonferroni) {
    const double fail = (1 - best->confidence) * static_cast<double>(best->m_candidates);
    best->confidence = std::max(0.0, 1 - fail);
  }
  return *best;
}

std::size_t upper_bound_trials(double delta) {
  check_delta(delta);
  return static_cast<std::size_t>(std::ceil(24 * std::log(1 / delta) - 1e-9));
}

UpperBoundCertificate upper_bound(const Oracle& oracle, std::size_t m, double f, double delta, std::uint64_t seed,
                                  const TrialOptions& opts) {
  const std::size_t trials = upper_bound_trials(delta);
  auto est = estimate_survival(oracle, m, f, trials, seed, opts);
  if (!est.finalized())
    throw InconclusiveError(std::to_string(est.unknown) + " of " + std::to_string(trials) +
                            " trials are unknown; no upper bound issued");
  auto cert = upper_bound_from_records(est.n, m, f, delta, seed, std::move(est.records));
  cert.wall_time_s = est.wall_time_s;
  return cert;
}

UpperBoundCertificate upper_bound_from_records(std::size_t n, std::size_t m, double f, double delta,
                                               std::uint64_t seed, std::vector<TrialRecord> records) {
  check_delta(delta);
  UpperBoundCertificate cert;
  cert.n = n;
  cert.m = m;
  cert.f = f;
  cert.delta = delta;
  cert.seed = seed;
  cert.trials = records.size();
  for (const auto& r : records) {
    if (r.outcome == Answer::unknown) throw InconclusiveError("trial log contains unknown outcomes");
    if (r.outcome == Answer::unsat) ++cert.empty_cells;
  }
  cert.records = std::move(records);
  cert.event_fired = 2 * cert.empty_cells > cert.trials;
  cert.verdict = cert.event_fired ? upper_bound_threshold(n, m, f) : pow2(n);
  cert.verdict_log2 = log2_big(cert.verdict);
  return cert;
}

void SparseCountConfig::validate() const {
  check_delta(delta);
  if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
}

std::size_t SparseCountConfig::trials(std::size_t n) const {
  validate();
  double t = std::log(1 / delta) / alpha;
  if (!drop_log_n) t *= std::log(static_cast<double>(n));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t - 1e-9)));
}

SparseCountResult sparse_count(const Oracle& oracle, const SparseCountConfig& config, std::uint64_t seed,
                               const TrialOptions& opts) {
  config.validate();
  const auto start = Clock::now();
  const std::size_t n = oracle.num_vars();
  const std::size_t last = std::min(config.max_i.value_or(n), n);
  SparseCountResult result;
  result.trials = config.trials(n);

  for (std::size_t i = 0; i <= last; ++i) {
    const double f = config.density ? config.density(i) : 0.5;
    SparseCountLevel level{i, f, 0};
    if (i == 0) {
      // With no constraints every trial asks the same question.
      const ParityHash empty(HashParams{n, 0, f, seed}, {}, BitVector(0));
      const OracleVerdict v = oracle.has_survivor(empty, opts.budget);
      if (v.answer == Answer::unknown) throw InconclusiveError("oracle could not decide whether S is empty");
      level.successes = v.answer == Answer::sat ? result.trials : 0;
    } else {
      const auto est = estimate_survival(oracle, i, f, result.trials, stream_seed(seed, i), opts);
      if (!est.finalized())
        throw InconclusiveError(std::to_string(est.unknown) + " unknown trials at i = " + std::to_string(i));
      level.successes = est.successes;
    }
    result.levels.push_back(level);
    if (2 * level.successes <= result.trials) {
      result.below_one = i == 0;
      result.log2_estimate = static_cast<int>(i) - 1;
      result.wall_time_s = seconds_since(start);
      return result;
    }
  }
  result.exhausted = true;
  result.log2_estimate = static_cast<int>(last);
  result.wall_time_s = seconds_since(start);
  return result;
}

std::size_t pick_promising_m(const Oracle& oracle, double f, std::size_t coarse_trials, std::uint64_t seed,
                             const TrialOptions& opts) {
  if (coarse_trials < 3) throw ParameterError("coarse sweep needs at least 3 trials");
  const std::size_t n = oracle.num_vars();
  auto passes = [&](std::size_t m) {
    const auto est = estimate_survival(oracle, m, f, coarse_trials, stream_seed(seed, m), opts);
    // Unknown trials count against m.
    return 2 * est.successes >= coarse_trials;
  };
  std::size_t last_pass = 0;
  std::size_t first_fail = n + 1;
  for (std::size_t m = 1; m <= n; m *= 2) {
    if (!passes(m)) {
      first_fail = m;
      break;
    }
    last_pass = m;
  }
  if (last_pass == 0) return 1;
  for (std::size_t m = last_pass + 1; m < first_fail; ++m) {
    if (!passes(m)) break;
    last_pass = m;
  }
  return last_pass;
}

}  // namespace xorcount
