#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "xorcount/bitvec.hpp"
#include "xorcount/dimacs.hpp"

namespace xorcount {

// Plain DPLL over clauses and native XORs. Propagation walks occurrence lists
// of newly assigned variables; branching follows a static order with the
// projection variables first. No learning, so it is meant for the small
// instances the exhaustive backend, the tests and the stand-in solver handle.
class SmallSolver {
 public:
  explicit SmallSolver(const CnfFormula& f);

  /// A model over 1..num_vars (bit v-1 holds variable v), or nullopt if unsat.
  std::optional<BitVector> solve();

  /// Calls `visit(projected, model)` once per assignment of `vars` that
  /// extends to a model. `projected` bit j is the value of vars[j].
  void enumerate(const std::vector<int>& vars,
                 const std::function<void(const BitVector& projected, const BitVector& model)>& visit);

  std::uint64_t decisions() const { return decisions_; }

 private:
  bool assign(int var, bool value);
  bool propagate();
  bool check_clause(std::size_t c);
  bool check_xor(std::size_t x);
  bool propagate_all();
  void undo(std::size_t trail_size);
  bool search();
  void enumerate_from(std::size_t depth, const std::vector<int>& vars,
                      const std::function<void(const BitVector&, const BitVector&)>& visit);
  BitVector snapshot() const;

  const CnfFormula* f_;
  std::vector<std::int8_t> value_;  // -1 unassigned, else 0/1; index = var
  std::vector<int> trail_;
  std::size_t qhead_ = 0;
  std::vector<std::vector<std::uint32_t>> clause_occ_;  // index = var
  std::vector<std::vector<std::uint32_t>> xor_occ_;
  std::vector<int> order_;
  std::uint64_t decisions_ = 0;
};

}  // namespace xorcount
