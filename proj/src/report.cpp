#include "xorcount/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace xorcount {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

Json maybe_number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json envelope(const char* kind, std::size_t n, Json m, double f, std::size_t trials, double bound_log2,
              double confidence, std::uint64_t seed, double wall) {
  Json j;
  j["kind"] = kind;
  j["n"] = n;
  j["m"] = std::move(m);
  j["f"] = f;
  j["T"] = trials;
  j["bound_log2"] = maybe_number(bound_log2);
  j["bound_ln"] = maybe_number(bound_log2 * kLn2);
  j["confidence"] = confidence;
  j["seed"] = seed;
  j["wall_time_s"] = wall;
  return j;
}

}  // namespace

Json to_json(const std::vector<TrialRecord>& records) {
  Json out = Json::array();
  for (const auto& r : records)
    out.push_back({{"seed", r.seed}, {"outcome", to_string(r.outcome)}, {"solver_time_s", r.solver_time_s}});
  return out;
}

Json to_json(const LowerBoundCertificate& c) {
  Json j = envelope("lower_bound", c.n, c.m, c.f, c.trials, c.bound_log2, c.confidence, c.seed, c.wall_time_s);
  j["params"] = {{"kappa", c.kappa},
                 {"c", c.c},
                 {"c_from_data", c.c_from_data},
                 {"successes", c.successes},
                 {"p_est", c.p_est},
                 {"issued", c.issued},
                 {"m_candidates", c.m_candidates},
                 {"bonferroni", c.bonferroni}};
  j["trial_outcomes"] = to_json(c.records);
  return j;
}

Json to_json(const UpperBoundCertificate& c) {
  Json j = envelope("upper_bound", c.n, c.m, c.f, c.trials, c.verdict_log2, 1 - c.delta, c.seed, c.wall_time_s);
  j["params"] = {{"delta", c.delta},
                 {"empty_cells", c.empty_cells},
                 {"event_fired", c.event_fired},
                 {"verdict", c.verdict.str()}};
  j["trial_outcomes"] = to_json(c.records);
  return j;
}

Json to_json(const SparseCountResult& r, const SparseCountConfig& cfg, std::size_t n, std::uint64_t seed) {
  const double estimate = r.below_one ? -std::numeric_limits<double>::infinity() : r.log2_estimate;
  Json j = envelope("sparse_count", n, nullptr, cfg.density ? cfg.density(1) : 0.5, r.trials, estimate,
                    1 - cfg.delta, seed, r.wall_time_s);
  Json levels = Json::array();
  for (const auto& l : r.levels) levels.push_back({{"i", l.i}, {"f", l.f}, {"successes", l.successes}});
  j["params"] = {{"delta", cfg.delta},
                 {"alpha", cfg.alpha},
                 {"drop_log_n", cfg.drop_log_n},
                 {"below_one", r.below_one},
                 {"exhausted", r.exhausted},
                 {"levels", std::move(levels)}};
  j["trial_outcomes"] = Json::array();
  return j;
}

Json to_json(const DensityCertificate& c) {
  Json j;
  j["kind"] = "min_density";
  j["n"] = c.n;
  j["m"] = c.m;
  j["q"] = c.q.str();
  j["f_star"] = c.f_star;
  j["f_below"] = c.f_below;
  j["slack_c"] = c.slack_c;
  j["delta"] = c.delta;
  j["mu"] = c.mu;
  j["condition_ln"] = maybe_number(c.condition_value.log());
  j["threshold_ln"] = maybe_number(c.threshold.log());
  j["tolerance"] = c.tolerance;
  j["met_at_half"] = c.met_at_half;
  j["mu_below_one"] = c.mu_below_one;
  return j;
}

Json strip_timing(Json j) {
  if (j.is_object()) {
    for (const char* key : {"wall_time_s", "solver_time_s", "timing"}) j.erase(key);
    for (auto& [k, v] : j.items()) v = strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_timing(v);
  }
  return j;
}

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string describe_log(double ln_value) {
  std::ostringstream out;
  out.precision(10);
  out << "ln = " << ln_value << ", log2 = " << ln_value / kLn2;
  if (std::isfinite(ln_value) && ln_value < 709.0) out << ", value = " << std::exp(ln_value);
  return out.str();
}

}  // namespace xorcount
