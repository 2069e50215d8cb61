#pragma once

#include <random>

#include "xorcount/tables.hpp"

// Random small table specs whose marginals come from an actual table, so most
// have completions. Some get extra structural zeros, which may kill them.
inline xorcount::ContingencyTableSpec random_table_spec(std::mt19937_64& gen, std::size_t max_dim = 3,
                                                        std::uint64_t max_entry = 3) {
  xorcount::ContingencyTableSpec s;
  s.rows = 1 + gen() % max_dim;
  s.cols = 1 + gen() % max_dim;
  s.binary = gen() % 3 == 0;
  const std::uint64_t hi = s.binary ? 1 : max_entry;
  s.row_marginals.assign(s.rows, 0);
  s.col_marginals.assign(s.cols, 0);
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::size_t j = 0; j < s.cols; ++j) {
      const bool zero = gen() % 5 == 0;
      if (zero) {
        s.structural_zeros.insert({i, j});
        continue;
      }
      const std::uint64_t v = gen() % (hi + 1);
      s.row_marginals[i] += v;
      s.col_marginals[j] += v;
    }
  if (gen() % 6 == 0) s.structural_zeros.insert({gen() % s.rows, gen() % s.cols});
  return s;
}
