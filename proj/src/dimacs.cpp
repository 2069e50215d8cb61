#include "xorcount/dimacs.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "xorcount/error.hpp"
#include "xorcount/oracle.hpp"

namespace xorcount {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

long long to_int(std::string_view tok, std::size_t line_no) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": expected an integer, got '" + std::string(tok) + "'");
  return v;
}

}  // namespace

Clause normalize_clause(Clause c) {
  std::unordered_set<Literal> seen;
  Clause out;
  out.reserve(c.size());
  for (Literal l : c)
    if (seen.insert(l).second) out.push_back(l);
  return out;
}

XorConstraint normalize_xor(const std::vector<Literal>& lits) {
  XorConstraint x;
  std::unordered_map<int, int> parity;
  std::vector<int> order;
  for (Literal l : lits) {
    if (l < 0) x.rhs = !x.rhs;
    const int v = std::abs(l);
    if (parity[v]++ == 0) order.push_back(v);
  }
  for (int v : order)
    if (parity[v] % 2 == 1) x.vars.push_back(v);
  return x;
}

void CnfFormula::add_clause(Clause c) {
  for (Literal l : c) {
    const auto v = static_cast<std::size_t>(std::abs(l));
    if (l == 0 || v > num_vars) throw ParameterError("literal out of range: " + std::to_string(l));
  }
  clauses.push_back(normalize_clause(std::move(c)));
}

void CnfFormula::add_xor(std::vector<int> vars, bool rhs) {
  for (int v : vars)
    if (v <= 0 || static_cast<std::size_t>(v) > num_vars)
      throw ParameterError("xor variable out of range: " + std::to_string(v));
  XorConstraint x = normalize_xor(vars);
  x.rhs = rhs;
  if (x.vars.empty() && !x.rhs) return;
  xors.push_back(std::move(x));
}

std::vector<int> CnfFormula::projection() const {
  if (!sampling_set.empty()) return sampling_set;
  std::vector<int> all(num_vars);
  std::iota(all.begin(), all.end(), 1);
  return all;
}

ParseResult parse_dimacs(std::string_view text) {
  ParseResult result;
  CnfFormula& f = result.formula;
  bool have_header = false;
  std::size_t declared_clauses = 0;
  Clause pending;
  std::size_t line_no = 0;

  auto check_lit = [&](long long l) {
    const auto v = static_cast<std::size_t>(l < 0 ? -l : l);
    if (v > f.num_vars)
      throw ParseError("line " + std::to_string(line_no) + ": literal " + std::to_string(l) + " exceeds " +
                       std::to_string(f.num_vars) + " variables");
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto toks = split_ws(line);
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::string_view first = toks[0];
    if (first == "%") break;
    if (first[0] == 'c') {
      if (first == "c" && toks.size() > 1 && toks[1] == "ind") {
        if (!have_header) throw ParseError("line " + std::to_string(line_no) + ": 'c ind' before header");
        for (std::size_t i = 2; i < toks.size(); ++i) {
          const long long v = to_int(toks[i], line_no);
          if (v == 0) break;
          if (v < 0) throw ParseError("line " + std::to_string(line_no) + ": negative projection variable");
          check_lit(v);
          f.sampling_set.push_back(static_cast<int>(v));
        }
      }
      continue;
    }
    if (first[0] == 'p') {
      if (have_header) throw ParseError("line " + std::to_string(line_no) + ": duplicate header");
      if (toks.size() != 4 || toks[0] != "p" || toks[1] != "cnf")
        throw ParseError("line " + std::to_string(line_no) + ": malformed header, expected 'p cnf <vars> <clauses>'");
      const long long v = to_int(toks[2], line_no);
      const long long c = to_int(toks[3], line_no);
      if (v < 0 || c < 0) throw ParseError("line " + std::to_string(line_no) + ": negative header count");
      f.num_vars = static_cast<std::size_t>(v);
      declared_clauses = static_cast<std::size_t>(c);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError("line " + std::to_string(line_no) + ": clause before 'p cnf' header");

    if (first[0] == 'x') {
      if (!pending.empty()) throw ParseError("line " + std::to_string(line_no) + ": x-line inside a clause");
      std::vector<std::string_view> body;
      if (first.size() > 1) body.push_back(first.substr(1));
      body.insert(body.end(), toks.begin() + 1, toks.end());
      std::vector<Literal> lits;
      bool terminated = false;
      for (auto tok : body) {
        const long long l = to_int(tok, line_no);
        if (l == 0) {
          terminated = true;
          break;
        }
        check_lit(l);
        lits.push_back(static_cast<Literal>(l));
      }
      if (!terminated) throw ParseError("line " + std::to_string(line_no) + ": x-line without terminating 0");
      XorConstraint x = normalize_xor(lits);
      if (!(x.vars.empty() && !x.rhs)) f.xors.push_back(std::move(x));
      continue;
    }

    for (auto tok : toks) {
      const long long l = to_int(tok, line_no);
      if (l == 0) {
        if (pending.empty()) throw ParseError("line " + std::to_string(line_no) + ": zero-width clause");
        f.clauses.push_back(normalize_clause(std::move(pending)));
        pending.clear();
      } else {
        check_lit(l);
        pending.push_back(static_cast<Literal>(l));
      }
    }
  }
  if (!pending.empty()) {
    result.warnings.push_back("last clause is missing its terminating 0");
    f.clauses.push_back(normalize_clause(std::move(pending)));
  }
  if (!have_header) throw ParseError("missing 'p cnf' header");
  const std::size_t body = f.clauses.size() + f.xors.size();
  if (body != declared_clauses)
    result.warnings.push_back("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                              std::to_string(body));
  return result;
}

std::string emit_dimacs(const CnfFormula& input, bool native_xor, std::size_t chunk) {
  CnfFormula expanded;
  const CnfFormula* f = &input;
  if (!native_xor && !input.xors.empty()) {
    expanded = input;
    expanded.xors.clear();
    for (const auto& x : input.xors) append_xor_as_cnf(expanded, x, chunk);
    f = &expanded;
  }
  std::ostringstream out;
  out << "p cnf " << f->num_vars << ' ' << (f->clauses.size() + f->xors.size()) << '\n';
  if (!f->sampling_set.empty()) {
    out << "c ind";
    for (int v : f->sampling_set) out << ' ' << v;
    out << " 0\n";
  }
  for (const auto& c : f->clauses) {
    for (Literal l : c) out << l << ' ';
    out << "0\n";
  }
  for (const auto& x : f->xors) {
    out << 'x';
    for (std::size_t i = 0; i < x.vars.size(); ++i) {
      if (i > 0) out << ' ';
      out << ((i == 0 && !x.rhs) ? -x.vars[i] : x.vars[i]);
    }
    out << (x.vars.empty() ? "0\n" : " 0\n");
  }
  return out.str();
}

}  // namespace xorcount
