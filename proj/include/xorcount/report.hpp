#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "xorcount/bounds.hpp"
#include "xorcount/comb.hpp"

namespace xorcount {

using Json = nlohmann::json;

// Certificate documents share the keys kind, n, m, f, T, params, bound_log2,
// bound_ln, confidence, seed, trial_outcomes and wall_time_s. A vacuous bound
// serializes as null. Big integers are decimal strings.
Json to_json(const LowerBoundCertificate& c);
Json to_json(const UpperBoundCertificate& c);
Json to_json(const SparseCountResult& r, const SparseCountConfig& cfg, std::size_t n, std::uint64_t seed);
Json to_json(const DensityCertificate& c);
Json to_json(const std::vector<TrialRecord>& records);

/// Copy with every timing field (wall_time_s, solver_time_s, timing) removed,
/// for reproducibility comparisons.
Json strip_timing(Json j);

/// Shortest round-trip decimal; "inf" / "-inf" / "nan" for non-finite x.
std::string format_number(double x);

/// "ln = a, log2 = b" plus the linear value when it fits in a double.
std::string describe_log(double ln_value);

}  // namespace xorcount
