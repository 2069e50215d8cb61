#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "xorcount/bitvec.hpp"
#include "xorcount/dimacs.hpp"

namespace xorcount {

struct ExplicitSet {
  std::size_t n = 0;
  std::vector<Assignment> elements;  // sorted, deduplicated
};

struct CnfProblem {
  CnfFormula formula;
  /// Hash column j constrains variable hash_vars[j]. Every other variable is
  /// auxiliary and never appears in a parity row.
  std::vector<int> hash_vars;
};

/// The set S being counted, described through whatever its oracle needs.
class CountingProblem {
 public:
  static CountingProblem explicit_set(std::size_t n, std::vector<Assignment> elements);
  /// Hash columns are the formula's projection (its "c ind" set, else all vars).
  static CountingProblem cnf(CnfFormula formula, std::string origin = "cnf");
  static CountingProblem cnf(CnfFormula formula, std::vector<int> hash_vars, std::string origin);

  /// Number of hash columns (the n of the hash family).
  std::size_t n() const { return n_; }
  /// "explicit", "cnf" or "table".
  const std::string& origin() const { return origin_; }

  bool is_explicit() const { return std::holds_alternative<ExplicitSet>(body_); }
  const ExplicitSet& as_explicit() const { return std::get<ExplicitSet>(body_); }
  const CnfProblem& as_cnf() const { return std::get<CnfProblem>(body_); }

 private:
  CountingProblem(std::size_t n, std::variant<ExplicitSet, CnfProblem> body, std::string origin)
      : n_(n), body_(std::move(body)), origin_(std::move(origin)) {}

  std::size_t n_;
  std::variant<ExplicitSet, CnfProblem> body_;
  std::string origin_;
};

/// Reads "n" followed by one bitstring per element ("0101", bit 0 first);
/// '#' starts a comment.
CountingProblem parse_explicit_set(const std::string& text);

}  // namespace xorcount
