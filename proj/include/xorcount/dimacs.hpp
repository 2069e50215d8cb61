#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace xorcount {

using Literal = int;
using Clause = std::vector<Literal>;

/// Parity constraint: XOR of the listed variables equals rhs.
struct XorConstraint {
  std::vector<int> vars;  // positive, no duplicates
  bool rhs = true;

  friend bool operator==(const XorConstraint&, const XorConstraint&) = default;
};

struct CnfFormula {
  std::size_t num_vars = 0;
  std::vector<Clause> clauses;
  std::vector<XorConstraint> xors;
  /// Projection ("c ind") variables; empty means all of 1..num_vars.
  std::vector<int> sampling_set;

  void add_clause(Clause c);
  void add_xor(std::vector<int> vars, bool rhs);
  /// 1-based variables the model count is taken over.
  std::vector<int> projection() const;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

/// Literals "v" / "-v" with v in 1..n; an x-line's negations fold into rhs.
/// Duplicate clause literals are dropped; a variable repeated in an x-line
/// cancels in pairs.
Clause normalize_clause(Clause c);
XorConstraint normalize_xor(const std::vector<Literal>& lits);

struct ParseResult {
  CnfFormula formula;
  std::vector<std::string> warnings;
};

/// DIMACS CNF with optional x-lines ("x1 -2 3 0" or "x 1 -2 3 0": XOR of the
/// literals is true) and "c ind ... 0" projection lines. Clauses may span
/// lines. A header/body count mismatch is a warning; everything else that is
/// malformed throws ParseError.
ParseResult parse_dimacs(std::string_view text);

/// Canonical text: header, "c ind" lines, clauses in order, x-lines last.
/// With native_xor = false, XORs are expanded through xor_to_cnf (chunk
/// size `chunk`) with auxiliaries numbered after num_vars.
std::string emit_dimacs(const CnfFormula& f, bool native_xor = true, std::size_t chunk = 6);

}  // namespace xorcount
