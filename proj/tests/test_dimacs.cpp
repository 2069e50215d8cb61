#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "xorcount/error.hpp"
#include "xorcount/dimacs.hpp"
#include "xorcount/oracle.hpp"
#include "xorcount/xor_encode.hpp"

using namespace xorcount;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(XORCOUNT_TEST_DATA) + "/" + name);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

bool parity_of(const std::vector<int>& vars, std::uint32_t assignment) {
  bool p = false;
  for (int v : vars) p ^= ((assignment >> (v - 1)) & 1U) != 0;
  return p;
}

// Does some assignment of the variables above `base` satisfy every clause?
bool extends(const std::vector<Clause>& clauses, std::uint32_t base, std::size_t base_vars, std::size_t total_vars) {
  const std::size_t aux = total_vars - base_vars;
  for (std::uint32_t a = 0; a < (1U << aux); ++a) {
    const std::uint64_t full = base | (std::uint64_t{a} << base_vars);
    bool ok = true;
    for (const auto& c : clauses) {
      bool sat = false;
      for (Literal l : c)
        if ((((full >> (std::abs(l) - 1)) & 1U) != 0) == (l > 0)) {
          sat = true;
          break;
        }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("golden parse and emit") {
  const auto parsed = parse_dimacs(slurp("mixed.cnf"));
  CHECK(parsed.warnings.empty());
  const CnfFormula& f = parsed.formula;
  CHECK(f.num_vars == 6);
  CHECK(f.clauses.size() == 3);
  CHECK(f.clauses[1] == Clause{3, 4, -5});
  CHECK(f.clauses[2] == Clause{2, 6});
  REQUIRE(f.xors.size() == 2);
  CHECK(f.xors[0] == XorConstraint{{1, 2, 3}, false});
  CHECK(f.xors[1] == XorConstraint{{5, 6}, true});
  CHECK(f.sampling_set == std::vector<int>{1, 2, 3, 4});
  CHECK(emit_dimacs(f) == slurp("mixed.expected.cnf"));
}

TEST_CASE("emit then parse is the identity") {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 30; ++t) {
    CnfFormula f;
    f.num_vars = 1 + gen() % 12;
    for (int c = 0; c < 8; ++c) {
      Clause cl;
      const std::size_t len = 1 + gen() % 4;
      for (std::size_t k = 0; k < len; ++k) {
        const int v = 1 + static_cast<int>(gen() % f.num_vars);
        cl.push_back(gen() & 1 ? v : -v);
      }
      f.add_clause(cl);
    }
    for (int x = 0; x < 3; ++x) {
      std::vector<int> vars;
      for (std::size_t v = 1; v <= f.num_vars; ++v)
        if (gen() & 1) vars.push_back(static_cast<int>(v));
      f.add_xor(vars, gen() & 1);
    }
    if (gen() & 1) f.sampling_set = {1};
    const auto back = parse_dimacs(emit_dimacs(f));
    CHECK(back.warnings.empty());
    CHECK(back.formula == f);
    CHECK(emit_dimacs(back.formula) == emit_dimacs(f));
  }
}

TEST_CASE("x-line sign convention") {
  auto f = parse_dimacs("p cnf 2 1\nx 1 2 0\n").formula;
  CHECK(f.xors[0] == XorConstraint{{1, 2}, true});
  f = parse_dimacs("p cnf 2 1\nx -1 2 0\n").formula;
  CHECK(f.xors[0] == XorConstraint{{1, 2}, false});
  f = parse_dimacs("p cnf 2 1\nx1 -2 -1 0\n").formula;
  CHECK(f.xors[0] == XorConstraint{{2}, true});
  f = parse_dimacs("p cnf 2 1\nx1 -1 0\n").formula;
  CHECK(f.xors.empty());
  // x1 xor x1 = 1 is unsatisfiable and must survive as an empty parity line.
  f = parse_dimacs("p cnf 2 1\nx1 1 0\n").formula;
  REQUIRE(f.xors.size() == 1);
  CHECK(f.xors[0] == XorConstraint{{}, true});
  CHECK(parse_dimacs(emit_dimacs(f)).formula == f);
}

TEST_CASE("parse errors and warnings") {
  CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf x 1\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p dnf 2 1\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 a 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\nx1 2\n"), ParseError);
  CHECK(parse_dimacs("p cnf 2 3\n1 2 0\n").warnings.size() == 1);
  CHECK(parse_dimacs("p cnf 2 1\n1 2\n").warnings.size() == 1);
}

TEST_CASE("parity_clauses small cases") {
  const auto eq = parity_clauses({1, 2}, false);
  CHECK(eq.size() == 2);
  CHECK(std::find(eq.begin(), eq.end(), Clause{-1, 2}) != eq.end());
  CHECK(std::find(eq.begin(), eq.end(), Clause{1, -2}) != eq.end());
  CHECK(parity_clauses({4}, true) == std::vector<Clause>{{4}});
  CHECK(parity_clauses({}, true) == std::vector<Clause>{Clause{}});
  CHECK(parity_clauses({}, false).empty());
  CHECK(parity_clauses({1, 2, 3, 4, 5}, true).size() == 16);
}

TEST_CASE("chunk counts") {
  CHECK(xor_chunk_count(1, 6) == 1);
  CHECK(xor_chunk_count(6, 6) == 1);
  CHECK(xor_chunk_count(7, 6) == 2);
  CHECK(xor_chunk_count(11, 6) == 2);
  CHECK(xor_chunk_count(12, 6) == 3);
  CHECK(xor_chunk_count(5, 2) == 4);
  CHECK_THROWS_AS(xor_chunk_count(5, 1), ParameterError);
}

TEST_CASE("xor_to_cnf projects to the parity constraint") {
  std::mt19937_64 gen(11);
  for (std::size_t chunk = 2; chunk <= 6; ++chunk) {
    for (int t = 0; t < 6; ++t) {
      const std::size_t n = 3 + gen() % 6;
      XorConstraint x;
      for (std::size_t v = 1; v <= n; ++v)
        if (gen() % 3 != 0) x.vars.push_back(static_cast<int>(v));
      x.rhs = gen() & 1;
      VarAllocator alloc(n);
      const auto clauses = xor_to_cnf(x, chunk, alloc);
      const std::size_t links = x.vars.empty() ? 0 : xor_chunk_count(x.vars.size(), chunk);
      CHECK(alloc.used() - n == (links == 0 ? 0 : links - 1));
      for (const auto& c : clauses) CHECK(c.size() <= chunk + 1);
      for (std::uint32_t a = 0; a < (1U << n); ++a)
        CHECK(extends(clauses, a, n, alloc.used()) == (parity_of(x.vars, a) == x.rhs));
    }
  }
}

TEST_CASE("non-native emission expands parity lines") {
  CnfFormula f;
  f.num_vars = 8;
  f.add_clause({1, 2});
  f.add_xor({1, 2, 3, 4, 5, 6, 7, 8}, true);
  const auto text = emit_dimacs(f, false, 3);
  const auto back = parse_dimacs(text).formula;
  CHECK(back.xors.empty());
  CHECK(back.num_vars == 8 + xor_chunk_count(8, 3) - 1);
  for (std::uint32_t a = 0; a < 256; ++a) {
    const bool want = ((a & 3U) != 0) && parity_of({1, 2, 3, 4, 5, 6, 7, 8}, a);
    CHECK(extends(back.clauses, a, 8, back.num_vars) == want);
  }
}
