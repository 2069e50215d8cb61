#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xorcount/bigint.hpp"
#include "xorcount/gf2hash.hpp"
#include "xorcount/problem.hpp"

namespace xorcount {

/// r x c nonnegative integer (or 0/1) matrices with fixed row and column sums
/// and optional cells pinned to zero. Indices are 0-based in memory; the text
/// format uses 1-based "Z: i j" lines.
struct ContingencyTableSpec {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint64_t> row_marginals;
  std::vector<std::uint64_t> col_marginals;
  bool binary = false;
  std::set<std::pair<std::size_t, std::size_t>> structural_zeros;

  /// Throws ParameterError on shape errors. Unequal totals and binary
  /// marginals that exceed the opposite dimension only produce warnings,
  /// because they simply make the count zero.
  std::vector<std::string> validate() const;
  bool is_zero(std::size_t i, std::size_t j) const { return structural_zeros.contains({i, j}); }
  /// Largest value cell (i, j) can take.
  std::uint64_t cell_cap(std::size_t i, std::size_t j) const;
  ContingencyTableSpec transposed() const;
};

/// Line format:
///   rows 3 cols 4
///   R: 2 1 3
///   C: 1 1 2 2
///   binary: 1
///   Z: 1 2
/// '#' starts a comment.
ContingencyTableSpec parse_table_spec(std::string_view text);
std::string format_table_spec(const ContingencyTableSpec& spec);

/// n x n binary blocked matrix with marginals {1, n-1, ..., n-1}; it has
/// 1 + (n-1)^2 completions.
ContingencyTableSpec blocked_matrix(std::size_t n);

struct CountLimits {
  std::size_t max_cells = 64;
  std::uint64_t max_work = 1'000'000'000;  // row-composition nodes visited
};

/// Exact count. Rows are filled one at a time by enumerating compositions of
/// R_i under the remaining column demands, pruning whenever a column demand
/// exceeds what the remaining rows can still supply, with memoization on
/// (row, remaining demands). Throws CapacityError past the limits.
BigInt brute_force_count(const ContingencyTableSpec& spec, const CountLimits& limits = {});

struct CellEncoding {
  /// Bits per cell: ceil(log2(cap + 1)) with cap = min(R_i, C_j) (at most 1
  /// when binary), floored at 1; structural zeros get 0.
  std::vector<std::vector<std::size_t>> width;
  /// DIMACS variables of each cell, least significant bit first.
  std::vector<std::vector<std::vector<int>>> vars;
  std::size_t num_cell_bits = 0;
};

struct EncodedTable {
  CountingProblem problem;
  CellEncoding encoding;
};

// CNF lowering: cell bits occupy variables 1..num_cell_bits, then every
// auxiliary. Each row and column sum is a balanced tree of Tseitin-encoded
// ripple-carry adders compared bitwise with its marginal; each cell is also
// clamped to <= its cap. Auxiliaries are functionally determined by the cell
// bits, so projected models and tables are in bijection.
EncodedTable encode_to_cnf(const ContingencyTableSpec& spec);

/// A hash over the cell bits only.
ParityHash hash_over_cells(const EncodedTable& table, std::size_t m, double f, std::uint64_t seed);

}  // namespace xorcount
