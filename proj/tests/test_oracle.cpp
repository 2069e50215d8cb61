#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "doctest.h"
#include "xorcount/error.hpp"
#include "xorcount/oracle.hpp"
#include "xorcount/rng.hpp"

using namespace xorcount;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(XORCOUNT_TEST_DATA) + "/" + name);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

SolverProfile mini(const std::string& flags = "", bool native = false) {
  SolverProfile p;
  p.command = std::string(MINI_SAT) + " " + flags + " {in}";
  p.native_xor = native;
  p.chunk = 3;
  return p;
}

// 10 variables, a handful of clauses, a parity line and 2 auxiliaries (9, 10).
CnfFormula sample_formula() {
  CnfFormula f;
  f.num_vars = 10;
  f.add_clause({1, 2, -3});
  f.add_clause({-1, 4});
  f.add_clause({5, 6, 7, 8});
  f.add_clause({-9, 2});
  f.add_clause({9, -6});
  f.add_clause({10, 3});
  f.add_xor({2, 5, 8}, true);
  return f;
}

std::vector<int> first_eight() { return {1, 2, 3, 4, 5, 6, 7, 8}; }

// Brute-force projected solutions of sample_formula over variables 1..8.
std::vector<Assignment> brute_solutions(const CnfFormula& f) {
  std::vector<Assignment> out;
  for (std::uint32_t a = 0; a < 256; ++a) {
    bool any = false;
    for (std::uint32_t aux = 0; aux < 4 && !any; ++aux) {
      BitVector model(10);
      for (int v = 0; v < 8; ++v) model.set(v, (a >> v) & 1U);
      model.set(8, aux & 1U);
      model.set(9, aux & 2U);
      any = satisfies(f, model);
    }
    if (any) out.push_back(BitVector::from_word(a, 8));
  }
  std::sort(out.begin(), out.end());
  return out;
}

class BrokenOracle final : public Oracle {
 public:
  using Oracle::Oracle;
  const char* name() const override { return "broken"; }

 protected:
  OracleVerdict query(const ParityHash& h, Budget) const override {
    OracleVerdict v;
    v.answer = Answer::sat;
    v.witness = BitVector(h.num_vars());
    v.witness->flip(0);
    return v;
  }
};

}  // namespace

TEST_CASE("explicit oracle agrees with direct survivor counts") {
  const auto problem = parse_explicit_set(slurp("tiny.set"));
  CHECK(problem.n() == 5);
  CHECK(problem.as_explicit().elements.size() == 4);
  ExplicitSetOracle oracle(problem);
  for (std::uint64_t t = 0; t < 200; ++t) {
    const ParityHash h = sample_hash({5, 1 + t % 4, 0.3, trial_seed(9, t)});
    const auto v = oracle.has_survivor(h);
    CHECK((v.answer == Answer::sat) == (count_survivors(h, problem.as_explicit().elements) > 0));
    if (v.witness) CHECK(survives(h, *v.witness));
  }
  CHECK_THROWS_AS(oracle.has_survivor(sample_hash({6, 1, 0.3, 1})), DimensionError);
}

TEST_CASE("explicit set parsing") {
  CHECK_THROWS_AS(parse_explicit_set("3\n0101\n"), ParseError);
  CHECK_THROWS_AS(parse_explicit_set("x\n"), ParseError);
  CHECK_THROWS_AS(parse_explicit_set("# nothing\n"), ParseError);
  CHECK(parse_explicit_set("2\n01 01 10\n").as_explicit().elements.size() == 2);
}

TEST_CASE("exhaustive oracle finds exactly the projected solutions") {
  const auto problem = CountingProblem::cnf(sample_formula(), first_eight(), "cnf");
  ExhaustiveOracle oracle(problem);
  const auto expected = brute_solutions(sample_formula());
  REQUIRE(oracle.model_count() == expected.size());
  CHECK(std::equal(expected.begin(), expected.end(), oracle.solutions().begin()));
  for (std::uint64_t t = 0; t < 100; ++t) {
    const ParityHash h = sample_hash({8, 1 + t % 6, 0.4, trial_seed(2, t)});
    const auto v = oracle.has_survivor(h);
    CHECK((v.answer == Answer::sat) == (count_survivors(h, expected) > 0));
  }
  // 2^30 projected solutions trip the solution cap; 65 columns trip the width cap.
  for (std::size_t vars : {30, 65}) {
    const auto wide = CountingProblem::cnf([vars] {
      CnfFormula f;
      f.num_vars = vars;
      return f;
    }());
    CHECK_THROWS_AS(ExhaustiveOracle{wide}, CapacityError);
  }
}

TEST_CASE("a bad witness is caught by the recheck") {
  const auto problem = CountingProblem::explicit_set(4, {BitVector::from_string("0000")});
  BrokenOracle oracle(problem);
  CHECK_THROWS_AS(oracle.has_survivor(sample_hash({4, 2, 0.5, 3})), IntegrityError);
}

TEST_CASE("conjoin keeps the formula and adds one parity per row") {
  const CnfFormula f = sample_formula();
  const ParityHash h = sample_hash({8, 3, 0.5, 21});
  const CnfFormula native = conjoin(f, first_eight(), h, true);
  CHECK(native.clauses == f.clauses);
  CHECK(native.num_vars == f.num_vars);
  const CnfFormula expanded = conjoin(f, first_eight(), h, false, 3);
  CHECK(expanded.xors == f.xors);
  CHECK(expanded.num_vars >= f.num_vars);

  // An all-zero row with rhs 1 makes the instance unsatisfiable.
  ParityHash dead({8, 1, 0.0, 0}, {BitVector(8)}, BitVector::from_string("1"));
  const CnfFormula both = conjoin(f, first_eight(), dead, true);
  CHECK(both.num_vars == f.num_vars + 1);
  const auto problem = CountingProblem::cnf(f, first_eight(), "cnf");
  CHECK(ExhaustiveOracle(problem).has_survivor(dead).answer == Answer::unsat);
  CHECK(ExternalOracle(problem, mini()).has_survivor(dead).answer == Answer::unsat);
}

TEST_CASE("external oracle agrees with the exhaustive backend") {
  const auto problem = CountingProblem::cnf(sample_formula(), first_eight(), "cnf");
  ExhaustiveOracle exhaustive(problem);
  for (bool native : {false, true}) {
    ExternalOracle external(problem, mini("", native));
    for (std::uint64_t t = 0; t < 25; ++t) {
      const ParityHash h = sample_hash({8, 1 + t % 5, 0.35, trial_seed(4, t)});
      const auto want = exhaustive.has_survivor(h).answer;
      const auto got = external.has_survivor(h);
      CHECK(got.answer == want);
      if (got.answer == Answer::sat) {
        REQUIRE(got.witness);
        CHECK(survives(h, *got.witness));
        CHECK(got.conflicts.has_value());
      }
    }
  }
}

TEST_CASE("external oracle is safe to call concurrently") {
  const auto problem = CountingProblem::cnf(sample_formula(), first_eight(), "cnf");
  ExhaustiveOracle exhaustive(problem);
  ExternalOracle external(problem, mini());
  std::vector<std::future<bool>> jobs;
  for (std::uint64_t t = 0; t < 8; ++t)
    jobs.push_back(std::async(std::launch::async, [&, t] {
      const ParityHash h = sample_hash({8, 2, 0.5, trial_seed(77, t)});
      return external.has_survivor(h).answer == exhaustive.has_survivor(h).answer;
    }));
  for (auto& j : jobs) CHECK(j.get());
}

TEST_CASE("solver protocol failures") {
  const auto problem = CountingProblem::cnf(sample_formula(), first_eight(), "cnf");
  const ParityHash h = sample_hash({8, 1, 0.5, 5});
  CHECK_THROWS_AS(ExternalOracle(problem, mini("--lie")).has_survivor(sample_hash({8, 8, 0.5, 1})),
                  IntegrityError);
  CHECK_THROWS_AS(ExternalOracle(problem, mini("--garbage")).has_survivor(h), ProtocolError);
  CHECK(ExternalOracle(problem, mini("--garbage --exit 3")).has_survivor(h).answer == Answer::unknown);
  CHECK_THROWS_AS(ExternalOracle(problem, mini("--no-model")).has_survivor(h), ProtocolError);
  CHECK_THROWS_AS(ExternalOracle(problem, mini("--exit 20")).has_survivor(h), ProtocolError);
  SolverProfile missing;
  missing.command = "/nonexistent/solver {in}";
  CHECK(ExternalOracle(problem, missing).has_survivor(h).answer == Answer::unknown);
}

TEST_CASE("budget exhaustion yields unknown") {
  const auto problem = CountingProblem::cnf(sample_formula(), first_eight(), "cnf");
  SolverProfile slow = mini("--sleep 5");
  ExternalOracle oracle(problem, slow);
  const auto start = std::chrono::steady_clock::now();
  const auto v = oracle.has_survivor(sample_hash({8, 1, 0.5, 5}), Budget(0.3));
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(v.answer == Answer::unknown);
  CHECK(elapsed < 2.0);
  CHECK(v.diagnostics.find("budget") != std::string::npos);
}

TEST_CASE("solver output parsing") {
  auto out = parse_solver_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n");
  CHECK(out.answer == Answer::sat);
  CHECK(out.model_literals == std::vector<int>{1, -2, 3});
  CHECK(parse_solver_output("s UNSATISFIABLE\n").answer == Answer::unsat);
  CHECK(parse_solver_output("s UNKNOWN\n").answer == Answer::unknown);
  CHECK_FALSE(parse_solver_output("c only comments\n").answer.has_value());
  CHECK_THROWS_AS(parse_solver_output("s MAYBE\n"), ProtocolError);
  CHECK_THROWS_AS(parse_solver_output("s SATISFIABLE\nv 1 x 0\n"), ProtocolError);
  CHECK_THROWS_AS(parse_solver_output("s SATISFIABLE\ns UNSATISFIABLE\n"), ProtocolError);
}

TEST_CASE("solver profile from the environment") {
  ::setenv("XORCOUNT_SOLVER", "cryptominisat5 --verb 0 {in}", 1);
  const auto p = SolverProfile::from_env();
  REQUIRE(p);
  CHECK(p->command == "cryptominisat5 --verb 0 {in}");
  ::unsetenv("XORCOUNT_SOLVER");
  CHECK_FALSE(SolverProfile::from_env());
  const auto problem = CountingProblem::cnf(sample_formula(), first_eight(), "cnf");
  CHECK_THROWS_AS(make_oracle(problem, OracleKind::external), ParameterError);
  CHECK(std::string(make_oracle(problem, OracleKind::exhaustive)->name()) == "exhaustive");
}
