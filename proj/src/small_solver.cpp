#include "xorcount/small_solver.hpp"

#include <algorithm>
#include <cstdlib>

namespace xorcount {

SmallSolver::SmallSolver(const CnfFormula& f)
    : f_(&f), value_(f.num_vars + 1, -1), clause_occ_(f.num_vars + 1), xor_occ_(f.num_vars + 1) {
  for (std::size_t i = 0; i < f.clauses.size(); ++i)
    for (Literal l : f.clauses[i]) clause_occ_[static_cast<std::size_t>(std::abs(l))].push_back(static_cast<std::uint32_t>(i));
  for (std::size_t i = 0; i < f.xors.size(); ++i)
    for (int v : f.xors[i].vars) xor_occ_[static_cast<std::size_t>(v)].push_back(static_cast<std::uint32_t>(i));
  std::vector<char> placed(f.num_vars + 1, 0);
  for (int v : f.projection()) {
    if (v >= 1 && static_cast<std::size_t>(v) <= f.num_vars && !placed[static_cast<std::size_t>(v)]) {
      placed[static_cast<std::size_t>(v)] = 1;
      order_.push_back(v);
    }
  }
  for (std::size_t v = 1; v <= f.num_vars; ++v)
    if (!placed[v]) order_.push_back(static_cast<int>(v));
}

bool SmallSolver::assign(int var, bool value) {
  auto& slot = value_[static_cast<std::size_t>(var)];
  if (slot >= 0) return slot == static_cast<std::int8_t>(value);
  slot = static_cast<std::int8_t>(value);
  trail_.push_back(var);
  return true;
}

void SmallSolver::undo(std::size_t trail_size) {
  while (trail_.size() > trail_size) {
    value_[static_cast<std::size_t>(trail_.back())] = -1;
    trail_.pop_back();
  }
  qhead_ = std::min(qhead_, trail_size);
}

// False on conflict; assigns the last literal of a unit clause.
bool SmallSolver::check_clause(std::size_t c) {
  int unassigned = 0;
  Literal last = 0;
  for (Literal l : f_->clauses[c]) {
    const auto v = value_[static_cast<std::size_t>(std::abs(l))];
    if (v < 0) {
      if (++unassigned > 1) return true;
      last = l;
    } else if ((v == 1) == (l > 0)) {
      return true;
    }
  }
  if (unassigned == 0) return false;
  return assign(std::abs(last), last > 0);
}

bool SmallSolver::check_xor(std::size_t x) {
  const auto& c = f_->xors[x];
  int unassigned = 0;
  int last = 0;
  bool parity = false;
  for (int var : c.vars) {
    const auto v = value_[static_cast<std::size_t>(var)];
    if (v < 0) {
      if (++unassigned > 1) return true;
      last = var;
    } else {
      parity ^= (v == 1);
    }
  }
  if (unassigned == 0) return parity == c.rhs;
  return assign(last, parity != c.rhs);
}

bool SmallSolver::propagate() {
  while (qhead_ < trail_.size()) {
    const auto var = static_cast<std::size_t>(trail_[qhead_++]);
    for (std::uint32_t c : clause_occ_[var])
      if (!check_clause(c)) return false;
    for (std::uint32_t x : xor_occ_[var])
      if (!check_xor(x)) return false;
  }
  return true;
}

// Constraints with at most one literal never appear on an occurrence list
// of an assigned variable before they are violated, so the root needs a scan.
bool SmallSolver::propagate_all() {
  for (std::size_t c = 0; c < f_->clauses.size(); ++c)
    if (!check_clause(c)) return false;
  for (std::size_t x = 0; x < f_->xors.size(); ++x)
    if (!check_xor(x)) return false;
  return propagate();
}

BitVector SmallSolver::snapshot() const {
  BitVector model(f_->num_vars);
  for (std::size_t v = 1; v <= f_->num_vars; ++v) model.set(v - 1, value_[v] == 1);
  return model;
}

bool SmallSolver::search() {
  if (!propagate()) return false;
  auto it = std::find_if(order_.begin(), order_.end(),
                         [&](int v) { return value_[static_cast<std::size_t>(v)] < 0; });
  if (it == order_.end()) return true;  // every variable is assigned without conflict
  const int pick = *it;
  for (bool value : {false, true}) {
    const std::size_t mark = trail_.size();
    ++decisions_;
    assign(pick, value);
    if (search()) return true;
    undo(mark);
  }
  return false;
}

std::optional<BitVector> SmallSolver::solve() {
  undo(0);
  if (!propagate_all() || !search()) {
    undo(0);
    return std::nullopt;
  }
  BitVector model = snapshot();
  undo(0);
  return model;
}

void SmallSolver::enumerate_from(std::size_t depth, const std::vector<int>& vars,
                                 const std::function<void(const BitVector&, const BitVector&)>& visit) {
  if (!propagate()) return;
  while (depth < vars.size() && value_[static_cast<std::size_t>(vars[depth])] >= 0) ++depth;
  if (depth == vars.size()) {
    const std::size_t mark = trail_.size();
    if (search()) {
      BitVector projected(vars.size());
      for (std::size_t j = 0; j < vars.size(); ++j) projected.set(j, value_[static_cast<std::size_t>(vars[j])] == 1);
      visit(projected, snapshot());
    }
    undo(mark);
    return;
  }
  for (bool value : {false, true}) {
    const std::size_t mark = trail_.size();
    ++decisions_;
    assign(vars[depth], value);
    enumerate_from(depth + 1, vars, visit);
    undo(mark);
  }
}

void SmallSolver::enumerate(const std::vector<int>& vars,
                            const std::function<void(const BitVector&, const BitVector&)>& visit) {
  undo(0);
  if (propagate_all()) enumerate_from(0, vars, visit);
  undo(0);
}

}  // namespace xorcount
