#pragma once

#include <cstddef>
#include <vector>

#include "xorcount/dimacs.hpp"

namespace xorcount {

inline constexpr std::size_t kDefaultXorChunk = 6;

/// Hands out fresh variable indices above a starting point.
class VarAllocator {
 public:
  explicit VarAllocator(std::size_t used) : next_(static_cast<int>(used) + 1) {}
  int fresh() { return next_++; }
  std::size_t used() const { return static_cast<std::size_t>(next_ - 1); }

 private:
  int next_;
};

/// Number of sub-XORs a support of size t is split into.
std::size_t xor_chunk_count(std::size_t support, std::size_t chunk);

// CNF encoding of sum(vars) = rhs (mod 2). The support is folded left to right:
// each sub-XOR reads at most `chunk` inputs (original variables or the carry
// from the previous link) and, except the last, defines a fresh auxiliary as
// their parity. A sub-XOR over s literals becomes the 2^(s-1) clauses that
// exclude each wrong-parity assignment. Empty support: rhs = 1 gives the
// empty clause, rhs = 0 gives nothing.
std::vector<Clause> xor_to_cnf(const XorConstraint& x, std::size_t chunk, VarAllocator& fresh);

/// Clauses for lits[0] xor ... xor lits[s-1] = rhs, no auxiliaries.
std::vector<Clause> parity_clauses(const std::vector<int>& vars, bool rhs);

}  // namespace xorcount
