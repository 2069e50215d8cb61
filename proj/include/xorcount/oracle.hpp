#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xorcount/bitvec.hpp"
#include "xorcount/dimacs.hpp"
#include "xorcount/gf2hash.hpp"
#include "xorcount/problem.hpp"

namespace xorcount {

enum class Answer { sat, unsat, unknown };

const char* to_string(Answer a);

using Budget = std::chrono::duration<double>;  // zero or negative: unlimited

struct OracleVerdict {
  Answer answer = Answer::unknown;
  /// Projected witness (hash columns). Present only when answer == sat.
  std::optional<Assignment> witness;
  /// Full model over the formula's variables, when the backend has one.
  std::optional<BitVector> model;
  double solver_time_s = 0.0;
  std::optional<std::uint64_t> conflicts;
  std::string diagnostics;
};

// Membership oracle for "does S contain some x with h(x) = 0?". Every sat
// verdict is rechecked in-process before it is returned; a witness that fails
// the recheck raises IntegrityError. Implementations must be safe to call
// concurrently.
class Oracle {
 public:
  explicit Oracle(const CountingProblem& problem) : problem_(&problem) {}
  virtual ~Oracle() = default;
  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  OracleVerdict has_survivor(const ParityHash& h, Budget budget = Budget::zero()) const;

  const CountingProblem& problem() const { return *problem_; }
  std::size_t num_vars() const { return problem_->n(); }
  virtual const char* name() const = 0;

 protected:
  virtual OracleVerdict query(const ParityHash& h, Budget budget) const = 0;

 private:
  void recheck(const ParityHash& h, const OracleVerdict& v) const;

  const CountingProblem* problem_;
};

/// Linear scan of an explicit set.
class ExplicitSetOracle final : public Oracle {
 public:
  explicit ExplicitSetOracle(const CountingProblem& problem);
  const char* name() const override { return "explicit"; }

 protected:
  OracleVerdict query(const ParityHash& h, Budget budget) const override;

 private:
  std::vector<std::uint64_t> packed_;  // one word per element when n <= 64
};

inline constexpr std::size_t kMaxExhaustiveVars = 64;
inline constexpr std::size_t kMaxExhaustiveSolutions = std::size_t{1} << 20;

/// Enumerates the projected solution set once with a DPLL search over the hash
/// columns (n <= 64, at most 2^20 solutions) and answers queries by scan.
class ExhaustiveOracle final : public Oracle {
 public:
  explicit ExhaustiveOracle(const CountingProblem& problem);
  const char* name() const override { return "exhaustive"; }

  /// Projected solution set, sorted.
  std::span<const Assignment> solutions() const { return solutions_; }
  std::size_t model_count() const { return solutions_.size(); }

 protected:
  OracleVerdict query(const ParityHash& h, Budget budget) const override;

 private:
  std::vector<Assignment> solutions_;
  std::vector<BitVector> models_;
  std::vector<std::uint64_t> packed_;
};

/// Command template ("solver --flag {in}") plus parser conventions.
struct SolverProfile {
  std::string command;
  std::vector<int> sat_exit_codes{10};
  std::vector<int> unsat_exit_codes{20};
  bool native_xor = false;
  std::size_t chunk = 6;

  /// Profile from XORCOUNT_SOLVER, if set.
  static std::optional<SolverProfile> from_env();
};

/// Writes the conjoined instance to a temp file and runs the configured solver.
class ExternalOracle final : public Oracle {
 public:
  ExternalOracle(const CountingProblem& problem, SolverProfile profile);
  const char* name() const override { return "external"; }
  const SolverProfile& profile() const { return profile_; }

 protected:
  OracleVerdict query(const ParityHash& h, Budget budget) const override;

 private:
  SolverProfile profile_;
};

enum class OracleKind { explicit_set, exhaustive, external };

std::unique_ptr<Oracle> make_oracle(const CountingProblem& problem, OracleKind kind,
                                    const std::optional<SolverProfile>& profile = std::nullopt);

/// Original clauses unchanged, then one parity constraint per hash row over
/// hash_vars: native XORs, or xor_to_cnf expansions with auxiliaries
/// numbered after the formula's variables.
CnfFormula conjoin(const CnfFormula& formula, const std::vector<int>& hash_vars, const ParityHash& h,
                   bool native_xor, std::size_t chunk = 6);

/// Appends the CNF expansion of `x` to `f`, growing num_vars for auxiliaries.
/// An unsatisfiable empty XOR becomes (z) and (-z) over a fresh z.
void append_xor_as_cnf(CnfFormula& f, const XorConstraint& x, std::size_t chunk);

/// Full-model check of clauses and XORs.
bool satisfies(const CnfFormula& f, const BitVector& model);

/// Runs the solver on `instance`, parses "s ..." / "v ..." lines and rechecks
/// any model against `instance`.
OracleVerdict run_external(const CnfFormula& instance, const SolverProfile& profile, Budget budget);

/// Parses solver stdout. Throws ProtocolError on malformed s/v lines.
struct SolverOutput {
  std::optional<Answer> answer;
  std::vector<int> model_literals;
};
SolverOutput parse_solver_output(std::string_view out);

}  // namespace xorcount
