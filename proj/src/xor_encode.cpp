#include "xorcount/xor_encode.hpp"

#include <bit>
#include <cstdint>
#include <string>

#include "xorcount/error.hpp"

namespace xorcount {

std::size_t xor_chunk_count(std::size_t support, std::size_t chunk) {
  if (chunk < 2) throw ParameterError("xor chunk size must be at least 2");
  if (support <= 1) return support;
  return (support - 1 + chunk - 2) / (chunk - 1);
}

std::vector<Clause> parity_clauses(const std::vector<int>& vars, bool rhs) {
  std::vector<Clause> out;
  const std::size_t s = vars.size();
  if (s == 0) {
    if (rhs) out.emplace_back();
    return out;
  }
  if (s > 20) throw ParameterError("parity_clauses: arity " + std::to_string(s) + " is too large to expand");
  // Exclude every assignment whose parity differs from rhs.
  for (std::uint32_t pattern = 0; pattern < (1U << s); ++pattern) {
    const bool parity = (std::popcount(pattern) & 1) != 0;
    if (parity == rhs) continue;
    Clause c(s);
    for (std::size_t i = 0; i < s; ++i) c[i] = ((pattern >> i) & 1U) ? -vars[i] : vars[i];
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Clause> xor_to_cnf(const XorConstraint& x, std::size_t chunk, VarAllocator& fresh) {
  if (chunk < 2) throw ParameterError("xor chunk size must be at least 2");
  const auto& vars = x.vars;
  if (vars.size() <= chunk) return parity_clauses(vars, x.rhs);

  std::vector<Clause> out;
  auto emit = [&](std::vector<int> lits, bool rhs) {
    auto cls = parity_clauses(lits, rhs);
    out.insert(out.end(), std::make_move_iterator(cls.begin()), std::make_move_iterator(cls.end()));
  };

  std::size_t next = 0;
  std::vector<int> link(vars.begin(), vars.begin() + static_cast<std::ptrdiff_t>(chunk));
  next = chunk;
  int carry = fresh.fresh();
  link.push_back(carry);
  emit(link, false);
  while (vars.size() - next > chunk - 1) {
    link.assign(1, carry);
    link.insert(link.end(), vars.begin() + static_cast<std::ptrdiff_t>(next),
                vars.begin() + static_cast<std::ptrdiff_t>(next + chunk - 1));
    next += chunk - 1;
    carry = fresh.fresh();
    link.push_back(carry);
    emit(link, false);
  }
  link.assign(1, carry);
  link.insert(link.end(), vars.begin() + static_cast<std::ptrdiff_t>(next), vars.end());
  emit(link, x.rhs);
  return out;
}

}  // namespace xorcount
