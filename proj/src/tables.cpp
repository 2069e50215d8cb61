#include "xorcount/tables.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <numeric>
#include <sstream>

#include "xorcount/error.hpp"

namespace xorcount {

std::vector<std::string> ContingencyTableSpec::validate() const {
  if (rows == 0 || cols == 0) throw ParameterError("table needs at least one row and one column");
  if (row_marginals.size() != rows)
    throw ParameterError("expected " + std::to_string(rows) + " row marginals, got " +
                         std::to_string(row_marginals.size()));
  if (col_marginals.size() != cols)
    throw ParameterError("expected " + std::to_string(cols) + " column marginals, got " +
                         std::to_string(col_marginals.size()));
  for (const auto& [i, j] : structural_zeros)
    if (i >= rows || j >= cols)
      throw ParameterError("structural zero (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                           ") is outside the table");
  std::vector<std::string> warnings;
  const auto sum_r = std::accumulate(row_marginals.begin(), row_marginals.end(), std::uint64_t{0});
  const auto sum_c = std::accumulate(col_marginals.begin(), col_marginals.end(), std::uint64_t{0});
  if (sum_r != sum_c)
    warnings.push_back("row total " + std::to_string(sum_r) + " differs from column total " + std::to_string(sum_c) +
                       "; the count is 0");
  if (binary) {
    for (std::size_t i = 0; i < rows; ++i)
      if (row_marginals[i] > cols) warnings.push_back("binary row " + std::to_string(i + 1) + " exceeds the column count");
    for (std::size_t j = 0; j < cols; ++j)
      if (col_marginals[j] > rows) warnings.push_back("binary column " + std::to_string(j + 1) + " exceeds the row count");
  }
  return warnings;
}

std::uint64_t ContingencyTableSpec::cell_cap(std::size_t i, std::size_t j) const {
  if (is_zero(i, j)) return 0;
  const std::uint64_t cap = std::min(row_marginals[i], col_marginals[j]);
  return binary ? std::min<std::uint64_t>(cap, 1) : cap;
}

ContingencyTableSpec ContingencyTableSpec::transposed() const {
  ContingencyTableSpec t;
  t.rows = cols;
  t.cols = rows;
  t.row_marginals = col_marginals;
  t.col_marginals = row_marginals;
  t.binary = binary;
  for (const auto& [i, j] : structural_zeros) t.structural_zeros.insert({j, i});
  return t;
}

namespace {

std::vector<std::uint64_t> read_numbers(std::istringstream& in, std::size_t line_no) {
  std::vector<std::uint64_t> out;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      if (tok[0] == '-') throw std::invalid_argument(tok);
      out.push_back(std::stoull(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw ParseError("line " + std::to_string(line_no) + ": expected a nonnegative integer, got '" + tok + "'");
    }
  }
  return out;
}

}  // namespace

ContingencyTableSpec parse_table_spec(std::string_view text) {
  ContingencyTableSpec spec;
  bool have_shape = false, have_r = false, have_c = false;
  std::istringstream all{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(all, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream in(line);
    std::string key;
    if (!(in >> key)) continue;
    if (key == "rows") {
      std::string cols_kw;
      if (!(in >> spec.rows >> cols_kw >> spec.cols) || cols_kw != "cols")
        throw ParseError("line " + std::to_string(line_no) + ": expected 'rows <r> cols <c>'");
      have_shape = true;
    } else if (key == "R:") {
      spec.row_marginals = read_numbers(in, line_no);
      have_r = true;
    } else if (key == "C:") {
      spec.col_marginals = read_numbers(in, line_no);
      have_c = true;
    } else if (key == "binary:") {
      const auto v = read_numbers(in, line_no);
      if (v.size() != 1 || v[0] > 1) throw ParseError("line " + std::to_string(line_no) + ": binary must be 0 or 1");
      spec.binary = v[0] == 1;
    } else if (key == "Z:") {
      const auto v = read_numbers(in, line_no);
      if (v.size() != 2 || v[0] == 0 || v[1] == 0)
        throw ParseError("line " + std::to_string(line_no) + ": expected 'Z: <row> <col>' with 1-based indices");
      spec.structural_zeros.insert({v[0] - 1, v[1] - 1});
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (!have_shape) throw ParseError("missing 'rows <r> cols <c>' line");
  if (!have_r || !have_c) throw ParseError("missing 'R:' or 'C:' line");
  try {
    spec.validate();
  } catch (const ParameterError& e) {
    throw ParseError(e.what());
  }
  return spec;
}

std::string format_table_spec(const ContingencyTableSpec& spec) {
  std::ostringstream out;
  out << "rows " << spec.rows << " cols " << spec.cols << "\nR:";
  for (auto r : spec.row_marginals) out << ' ' << r;
  out << "\nC:";
  for (auto c : spec.col_marginals) out << ' ' << c;
  out << "\nbinary: " << (spec.binary ? 1 : 0) << '\n';
  for (const auto& [i, j] : spec.structural_zeros) out << "Z: " << i + 1 << ' ' << j + 1 << '\n';
  return out.str();
}

ContingencyTableSpec blocked_matrix(std::size_t n) {
  if (n < 2) throw ParameterError("blocked matrix needs n >= 2");
  ContingencyTableSpec spec;
  spec.rows = spec.cols = n;
  spec.binary = true;
  spec.row_marginals.assign(n, n - 1);
  spec.col_marginals.assign(n, n - 1);
  spec.row_marginals[0] = spec.col_marginals[0] = 1;
  return spec;
}

namespace {

// Row-by-row counter. Columns that share a structural-zero pattern over the
// remaining rows are interchangeable, so the memo key sorts demands within
// each such class.
class TableCounter {
 public:
  TableCounter(const ContingencyTableSpec& spec, const CountLimits& limits) : spec_(spec), limits_(limits) {
    const std::size_t r = spec.rows, c = spec.cols;
    class_of_.assign(r + 1, std::vector<std::size_t>(c, 0));
    for (std::size_t i = 0; i <= r; ++i) {
      std::map<std::vector<bool>, std::size_t> ids;
      for (std::size_t j = 0; j < c; ++j) {
        std::vector<bool> pattern;
        for (std::size_t k = i; k < r; ++k) pattern.push_back(spec.is_zero(k, j));
        class_of_[i][j] = ids.emplace(pattern, ids.size()).first->second;
      }
    }
    // capacity_[i][j]: most that rows i.. can still put into column j.
    capacity_.assign(r + 1, std::vector<std::uint64_t>(c, 0));
    for (std::size_t i = r; i-- > 0;)
      for (std::size_t j = 0; j < c; ++j)
        capacity_[i][j] = capacity_[i + 1][j] + (spec.is_zero(i, j) ? 0 : (spec.binary ? 1 : spec.row_marginals[i]));
  }

  BigInt count() {
    std::vector<std::uint64_t> demand = spec_.col_marginals;
    if (!feasible(0, demand)) return 0;
    return count_from(0, demand);
  }

 private:
  bool feasible(std::size_t row, const std::vector<std::uint64_t>& demand) const {
    for (std::size_t j = 0; j < demand.size(); ++j)
      if (demand[j] > capacity_[row][j]) return false;
    return true;
  }

  std::vector<std::uint64_t> canonical(std::size_t row, const std::vector<std::uint64_t>& demand) const {
    std::vector<std::pair<std::size_t, std::uint64_t>> keyed(demand.size());
    for (std::size_t j = 0; j < demand.size(); ++j) keyed[j] = {class_of_[row][j], demand[j]};
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::uint64_t> key;
    key.reserve(2 * demand.size() + 1);
    key.push_back(row);
    for (auto [cls, d] : keyed) {
      key.push_back(cls);
      key.push_back(d);
    }
    return key;
  }

  BigInt count_from(std::size_t row, std::vector<std::uint64_t>& demand) {
    if (row == spec_.rows) {
      for (auto d : demand)
        if (d != 0) return 0;
      return 1;
    }
    auto key = canonical(row, demand);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    BigInt total = 0;
    fill(row, 0, spec_.row_marginals[row], demand, total);
    memo_.emplace(std::move(key), total);
    return total;
  }

  // Distributes `left` over columns j.. of `row`.
  void fill(std::size_t row, std::size_t j, std::uint64_t left, std::vector<std::uint64_t>& demand, BigInt& total) {
    if (++work_ > limits_.max_work)
      throw CapacityError("table enumeration exceeded its work budget of " + std::to_string(limits_.max_work) +
                          " nodes");
    const std::size_t c = spec_.cols;
    if (j == c) {
      if (left == 0 && feasible(row + 1, demand)) total += count_from(row + 1, demand);
      return;
    }
    // Remaining columns must be able to absorb what is left of this row.
    std::uint64_t room = 0;
    for (std::size_t k = j; k < c; ++k) room += max_cell(row, k, demand);
    if (room < left) return;
    const std::uint64_t hi = std::min(left, max_cell(row, j, demand));
    for (std::uint64_t v = 0; v <= hi; ++v) {
      demand[j] -= v;
      fill(row, j + 1, left - v, demand, total);
      demand[j] += v;
    }
  }

  std::uint64_t max_cell(std::size_t row, std::size_t j, const std::vector<std::uint64_t>& demand) const {
    if (spec_.is_zero(row, j)) return 0;
    return spec_.binary ? std::min<std::uint64_t>(1, demand[j]) : demand[j];
  }

  const ContingencyTableSpec& spec_;
  const CountLimits& limits_;
  std::vector<std::vector<std::size_t>> class_of_;
  std::vector<std::vector<std::uint64_t>> capacity_;
  std::map<std::vector<std::uint64_t>, BigInt> memo_;
  std::uint64_t work_ = 0;
};

}  // namespace

BigInt brute_force_count(const ContingencyTableSpec& spec, const CountLimits& limits) {
  spec.validate();
  if (spec.rows * spec.cols > limits.max_cells)
    throw CapacityError("table has " + std::to_string(spec.rows * spec.cols) + " cells, limit is " +
                        std::to_string(limits.max_cells));
  const auto sum_r = std::accumulate(spec.row_marginals.begin(), spec.row_marginals.end(), std::uint64_t{0});
  const auto sum_c = std::accumulate(spec.col_marginals.begin(), spec.col_marginals.end(), std::uint64_t{0});
  if (sum_r != sum_c) return 0;
  TableCounter counter(spec, limits);
  return counter.count();
}

namespace {

std::size_t bit_length(std::uint64_t v) {
  std::size_t w = 0;
  while (v) {
    ++w;
    v >>= 1;
  }
  return w;
}

constexpr int kTrue = INT_MAX;
constexpr int kFalse = -INT_MAX;

// Tseitin gate builder with constant folding. Signals are DIMACS literals or
// the constants kTrue / kFalse (negation works on both by sign flip).
class Circuit {
 public:
  explicit Circuit(CnfFormula& f) : f_(f) {}

  static bool is_const(int s) { return s == kTrue || s == kFalse; }

  int gate_xor(int a, int b) {
    if (a == kFalse) return b;
    if (b == kFalse) return a;
    if (a == kTrue) return -b;
    if (b == kTrue) return -a;
    if (a == b) return kFalse;
    if (a == -b) return kTrue;
    const int z = fresh();
    f_.clauses.push_back({-z, a, b});
    f_.clauses.push_back({-z, -a, -b});
    f_.clauses.push_back({z, -a, b});
    f_.clauses.push_back({z, a, -b});
    return z;
  }

  int gate_and(int a, int b) {
    if (a == kFalse || b == kFalse) return kFalse;
    if (a == kTrue) return b;
    if (b == kTrue) return a;
    if (a == b) return a;
    if (a == -b) return kFalse;
    const int z = fresh();
    f_.clauses.push_back({-z, a});
    f_.clauses.push_back({-z, b});
    f_.clauses.push_back({z, -a, -b});
    return z;
  }

  int gate_or(int a, int b) { return -gate_and(-a, -b); }

  // Unsigned sum, least significant bit first.
  std::vector<int> add(const std::vector<int>& x, const std::vector<int>& y) {
    const std::size_t w = std::max(x.size(), y.size());
    std::vector<int> out;
    int carry = kFalse;
    for (std::size_t i = 0; i < w; ++i) {
      const int a = i < x.size() ? x[i] : kFalse;
      const int b = i < y.size() ? y[i] : kFalse;
      const int ab = gate_xor(a, b);
      out.push_back(gate_xor(ab, carry));
      carry = gate_or(gate_and(a, b), gate_and(carry, ab));
    }
    if (carry != kFalse) out.push_back(carry);
    return out;
  }

  std::vector<int> sum_tree(std::vector<std::vector<int>> terms) {
    if (terms.empty()) return {};
    while (terms.size() > 1) {
      std::vector<std::vector<int>> next;
      for (std::size_t i = 0; i + 1 < terms.size(); i += 2) next.push_back(add(terms[i], terms[i + 1]));
      if (terms.size() % 2 == 1) next.push_back(std::move(terms.back()));
      terms = std::move(next);
    }
    return std::move(terms.front());
  }

  void require(int s, bool value) {
    const int lit = value ? s : -s;
    if (lit == kTrue) return;
    if (lit == kFalse) {
      contradiction();
      return;
    }
    f_.clauses.push_back({lit});
  }

  void require_equal(const std::vector<int>& bits, std::uint64_t k) {
    if (bit_length(k) > bits.size()) {
      contradiction();
      return;
    }
    for (std::size_t i = 0; i < bits.size(); ++i) require(bits[i], i < 64 && ((k >> i) & 1U));
  }

  void contradiction() {
    const int z = fresh();
    f_.clauses.push_back({z});
    f_.clauses.push_back({-z});
  }

 private:
  int fresh() { return static_cast<int>(++f_.num_vars); }

  CnfFormula& f_;
};

}  // namespace

EncodedTable encode_to_cnf(const ContingencyTableSpec& spec) {
  spec.validate();
  CellEncoding enc;
  enc.width.assign(spec.rows, std::vector<std::size_t>(spec.cols, 0));
  enc.vars.assign(spec.rows, std::vector<std::vector<int>>(spec.cols));
  int next = 1;
  for (std::size_t i = 0; i < spec.rows; ++i)
    for (std::size_t j = 0; j < spec.cols; ++j) {
      if (spec.is_zero(i, j)) continue;
      const std::size_t w = std::max<std::size_t>(1, bit_length(spec.cell_cap(i, j)));
      enc.width[i][j] = w;
      for (std::size_t b = 0; b < w; ++b) enc.vars[i][j].push_back(next++);
    }
  enc.num_cell_bits = static_cast<std::size_t>(next - 1);
  if (enc.num_cell_bits == 0) throw ParameterError("every cell is a structural zero; nothing to count");

  CnfFormula f;
  f.num_vars = enc.num_cell_bits;
  Circuit circuit(f);

  // Clamp each cell to its cap: for every 0 bit of the cap, forbid that bit
  // together with all higher 1 bits of the cap.
  for (std::size_t i = 0; i < spec.rows; ++i)
    for (std::size_t j = 0; j < spec.cols; ++j) {
      const auto& bits = enc.vars[i][j];
      const std::uint64_t cap = spec.cell_cap(i, j);
      for (std::size_t b = 0; b < bits.size(); ++b) {
        if ((cap >> b) & 1U) continue;
        Clause c{-bits[b]};
        for (std::size_t h = b + 1; h < bits.size(); ++h)
          if ((cap >> h) & 1U) c.push_back(-bits[h]);
        f.clauses.push_back(std::move(c));
      }
    }

  for (std::size_t i = 0; i < spec.rows; ++i) {
    std::vector<std::vector<int>> terms;
    for (std::size_t j = 0; j < spec.cols; ++j)
      if (!enc.vars[i][j].empty()) terms.push_back(enc.vars[i][j]);
    circuit.require_equal(circuit.sum_tree(std::move(terms)), spec.row_marginals[i]);
  }
  for (std::size_t j = 0; j < spec.cols; ++j) {
    std::vector<std::vector<int>> terms;
    for (std::size_t i = 0; i < spec.rows; ++i)
      if (!enc.vars[i][j].empty()) terms.push_back(enc.vars[i][j]);
    circuit.require_equal(circuit.sum_tree(std::move(terms)), spec.col_marginals[j]);
  }

  std::vector<int> cells(enc.num_cell_bits);
  std::iota(cells.begin(), cells.end(), 1);
  f.sampling_set = cells;
  return EncodedTable{CountingProblem::cnf(std::move(f), std::move(cells), "table"), std::move(enc)};
}

ParityHash hash_over_cells(const EncodedTable& table, std::size_t m, double f, std::uint64_t seed) {
  return sample_hash({table.encoding.num_cell_bits, m, f, seed});
}

}  // namespace xorcount
