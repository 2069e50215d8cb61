#include "xorcount/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "xorcount/error.hpp"
#include "xorcount/small_solver.hpp"
#include "xorcount/subprocess.hpp"
#include "xorcount/xor_encode.hpp"

namespace xorcount {

const char* to_string(Answer a) {
  switch (a) {
    case Answer::sat:
      return "sat";
    case Answer::unsat:
      return "unsat";
    case Answer::unknown:
      return "unknown";
  }
  return "unknown";
}

namespace {

struct PackedHash {
  std::vector<std::uint64_t> rows;
  std::uint64_t rhs = 0;
};

PackedHash pack(const ParityHash& h) {
  PackedHash p;
  p.rows.reserve(h.num_constraints());
  for (std::size_t i = 0; i < h.num_constraints(); ++i) {
    p.rows.push_back(h.row(i).word(0));
    if (h.rhs().get(i)) p.rhs |= std::uint64_t{1} << i;
  }
  return p;
}

bool packed_survives(const PackedHash& p, std::uint64_t x) {
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    const bool parity = (std::popcount(p.rows[i] & x) & 1) != 0;
    if (parity != (((p.rhs >> i) & 1U) != 0)) return false;
  }
  return true;
}

Assignment project(const BitVector& model, const std::vector<int>& vars) {
  Assignment a(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) a.set(j, model.get(static_cast<std::size_t>(vars[j] - 1)));
  return a;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

OracleVerdict Oracle::has_survivor(const ParityHash& h, Budget budget) const {
  if (h.num_vars() != num_vars())
    throw DimensionError("hash over " + std::to_string(h.num_vars()) + " variables queried against a problem over " +
                         std::to_string(num_vars()));
  OracleVerdict v = query(h, budget);
  if (v.answer == Answer::sat) recheck(h, v);
  return v;
}

void Oracle::recheck(const ParityHash& h, const OracleVerdict& v) const {
  if (!v.witness) throw IntegrityError(std::string(name()) + " oracle answered sat without a witness");
  const Assignment& w = *v.witness;
  if (w.size() != num_vars()) throw IntegrityError("witness has the wrong width");
  if (!survives(h, w)) throw IntegrityError(std::string(name()) + " oracle returned a witness with h(x) != 0");
  if (problem_->is_explicit()) {
    const auto& elems = problem_->as_explicit().elements;
    if (!std::binary_search(elems.begin(), elems.end(), w))
      throw IntegrityError(std::string(name()) + " oracle returned a witness outside the set");
    return;
  }
  const auto& cnf = problem_->as_cnf();
  if (!v.model) throw IntegrityError(std::string(name()) + " oracle answered sat without a model");
  if (!satisfies(cnf.formula, *v.model))
    throw IntegrityError(std::string(name()) + " oracle returned a model that violates the formula");
  if (project(*v.model, cnf.hash_vars) != w)
    throw IntegrityError(std::string(name()) + " oracle witness disagrees with its model");
}

ExplicitSetOracle::ExplicitSetOracle(const CountingProblem& problem) : Oracle(problem) {
  if (!problem.is_explicit()) throw ParameterError("explicit-set oracle needs an explicit set");
  if (problem.n() <= 64) {
    for (const auto& e : problem.as_explicit().elements) packed_.push_back(e.size() ? e.word(0) : 0);
  }
}

OracleVerdict ExplicitSetOracle::query(const ParityHash& h, Budget) const {
  OracleVerdict v;
  v.answer = Answer::unsat;
  const auto& elems = problem().as_explicit().elements;
  if (!packed_.empty() || elems.empty()) {
    const PackedHash p = pack(h);
    for (std::size_t i = 0; i < packed_.size(); ++i)
      if (packed_survives(p, packed_[i])) {
        v.answer = Answer::sat;
        v.witness = elems[i];
        break;
      }
    return v;
  }
  for (const auto& e : elems)
    if (survives(h, e)) {
      v.answer = Answer::sat;
      v.witness = e;
      break;
    }
  return v;
}

ExhaustiveOracle::ExhaustiveOracle(const CountingProblem& problem) : Oracle(problem) {
  if (problem.n() > kMaxExhaustiveVars)
    throw CapacityError("exhaustive oracle handles at most " + std::to_string(kMaxExhaustiveVars) +
                        " hash variables, got " + std::to_string(problem.n()));
  if (problem.is_explicit()) {
    solutions_ = problem.as_explicit().elements;
  } else {
    const auto& cnf = problem.as_cnf();
    SmallSolver solver(cnf.formula);
    std::vector<std::pair<Assignment, BitVector>> found;
    solver.enumerate(cnf.hash_vars,
                     [&](const BitVector& projected, const BitVector& model) {
                       if (found.size() == kMaxExhaustiveSolutions)
                         throw CapacityError("exhaustive oracle: more than " +
                                             std::to_string(kMaxExhaustiveSolutions) + " projected solutions");
                       found.emplace_back(projected, model);
                     });
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    solutions_.reserve(found.size());
    models_.reserve(found.size());
    for (auto& [s, m] : found) {
      solutions_.push_back(std::move(s));
      models_.push_back(std::move(m));
    }
  }
  for (const auto& s : solutions_) packed_.push_back(s.empty() ? 0 : s.word(0));
}

OracleVerdict ExhaustiveOracle::query(const ParityHash& h, Budget) const {
  OracleVerdict v;
  v.answer = Answer::unsat;
  const PackedHash p = pack(h);
  for (std::size_t i = 0; i < packed_.size(); ++i)
    if (packed_survives(p, packed_[i])) {
      v.answer = Answer::sat;
      v.witness = solutions_[i];
      if (!models_.empty()) v.model = models_[i];
      break;
    }
  return v;
}

std::optional<SolverProfile> SolverProfile::from_env() {
  const char* cmd = std::getenv("XORCOUNT_SOLVER");
  if (cmd == nullptr || *cmd == '\0') return std::nullopt;
  SolverProfile p;
  p.command = cmd;
  if (const char* nx = std::getenv("XORCOUNT_NATIVE_XOR"); nx != nullptr && std::string(nx) == "1") p.native_xor = true;
  return p;
}

ExternalOracle::ExternalOracle(const CountingProblem& problem, SolverProfile profile)
    : Oracle(problem), profile_(std::move(profile)) {
  if (problem.is_explicit()) throw ParameterError("external oracle needs a CNF problem");
  if (profile_.command.empty()) throw ParameterError("external oracle needs a solver command");
  if (profile_.chunk < 2) throw ParameterError("xor chunk size must be at least 2");
}

OracleVerdict ExternalOracle::query(const ParityHash& h, Budget budget) const {
  const auto& cnf = problem().as_cnf();
  const CnfFormula instance = conjoin(cnf.formula, cnf.hash_vars, h, profile_.native_xor, profile_.chunk);
  OracleVerdict v = run_external(instance, profile_, budget);
  if (v.answer == Answer::sat && v.model) {
    BitVector model(cnf.formula.num_vars);
    for (std::size_t i = 0; i < cnf.formula.num_vars; ++i) model.set(i, v.model->get(i));
    v.witness = project(model, cnf.hash_vars);
    v.model = std::move(model);
  }
  return v;
}

std::unique_ptr<Oracle> make_oracle(const CountingProblem& problem, OracleKind kind,
                                    const std::optional<SolverProfile>& profile) {
  switch (kind) {
    case OracleKind::explicit_set:
      return std::make_unique<ExplicitSetOracle>(problem);
    case OracleKind::exhaustive:
      return std::make_unique<ExhaustiveOracle>(problem);
    case OracleKind::external: {
      auto p = profile ? profile : SolverProfile::from_env();
      if (!p) throw ParameterError("no solver configured (pass a command or set XORCOUNT_SOLVER)");
      return std::make_unique<ExternalOracle>(problem, *p);
    }
  }
  throw ParameterError("unknown oracle kind");
}

void append_xor_as_cnf(CnfFormula& f, const XorConstraint& x, std::size_t chunk) {
  VarAllocator alloc(f.num_vars);
  if (x.vars.empty()) {
    if (!x.rhs) return;
    const int z = alloc.fresh();
    f.num_vars = alloc.used();
    f.clauses.push_back({z});
    f.clauses.push_back({-z});
    return;
  }
  auto clauses = xor_to_cnf(x, chunk, alloc);
  f.num_vars = alloc.used();
  for (auto& c : clauses) f.clauses.push_back(std::move(c));
}

CnfFormula conjoin(const CnfFormula& formula, const std::vector<int>& hash_vars, const ParityHash& h,
                   bool native_xor, std::size_t chunk) {
  if (h.num_vars() != hash_vars.size())
    throw DimensionError("hash has " + std::to_string(h.num_vars()) + " columns for " +
                         std::to_string(hash_vars.size()) + " hash variables");
  CnfFormula out = formula;
  for (std::size_t i = 0; i < h.num_constraints(); ++i) {
    XorConstraint x;
    x.rhs = h.rhs().get(i);
    const auto& row = h.row(i);
    for (std::size_t j = 0; j < hash_vars.size(); ++j)
      if (row.get(j)) x.vars.push_back(hash_vars[j]);
    if (native_xor && !x.vars.empty()) {
      out.xors.push_back(std::move(x));
    } else {
      append_xor_as_cnf(out, x, chunk);
    }
  }
  return out;
}

bool satisfies(const CnfFormula& f, const BitVector& model) {
  if (model.size() < f.num_vars) return false;
  auto value = [&](int var) { return model.get(static_cast<std::size_t>(var - 1)); };
  for (const auto& c : f.clauses) {
    bool sat = false;
    for (Literal l : c)
      if (value(std::abs(l)) == (l > 0)) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  for (const auto& x : f.xors) {
    bool parity = false;
    for (int var : x.vars) parity ^= value(var);
    if (parity != x.rhs) return false;
  }
  return true;
}

SolverOutput parse_solver_output(std::string_view out) {
  SolverOutput result;
  std::size_t pos = 0;
  while (pos < out.size()) {
    std::size_t end = out.find('\n', pos);
    if (end == std::string_view::npos) end = out.size();
    std::string line(out.substr(pos, end - pos));
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() < 1) continue;
    if (line[0] == 's' && (line.size() == 1 || line[1] == ' ')) {
      std::istringstream in(line.substr(1));
      std::string word;
      in >> word;
      Answer a;
      if (word == "SATISFIABLE") {
        a = Answer::sat;
      } else if (word == "UNSATISFIABLE") {
        a = Answer::unsat;
      } else if (word == "UNKNOWN" || word == "INDETERMINATE") {
        a = Answer::unknown;
      } else {
        throw ProtocolError("unrecognized status line: '" + line + "'");
      }
      if (result.answer && *result.answer != a) throw ProtocolError("conflicting status lines");
      result.answer = a;
    } else if (line[0] == 'v' && (line.size() == 1 || line[1] == ' ')) {
      std::istringstream in(line.substr(1));
      std::string tok;
      while (in >> tok) {
        try {
          std::size_t used = 0;
          const long long l = std::stoll(tok, &used);
          if (used != tok.size()) throw std::invalid_argument(tok);
          if (l != 0) result.model_literals.push_back(static_cast<int>(l));
        } catch (const std::logic_error&) {
          throw ProtocolError("malformed model token '" + tok + "'");
        }
      }
    }
  }
  return result;
}

OracleVerdict run_external(const CnfFormula& instance, const SolverProfile& profile, Budget budget) {
  TempFile file(".cnf");
  file.write(emit_dimacs(instance, profile.native_xor, profile.chunk));

  std::string command = profile.command;
  const std::string quoted = shell_quote(file.path().string());
  if (command.find("{in}") == std::string::npos) {
    command += " " + quoted;
  } else {
    for (std::size_t at = command.find("{in}"); at != std::string::npos; at = command.find("{in}", at + quoted.size()))
      command.replace(at, 4, quoted);
  }

  const ProcessResult run = run_shell(command, budget);
  OracleVerdict v;
  v.solver_time_s = run.wall_time_s;
  if (run.timed_out) {
    v.answer = Answer::unknown;
    v.diagnostics = "budget exhausted after " + std::to_string(run.wall_time_s) + " s";
    return v;
  }

  const SolverOutput parsed = parse_solver_output(run.out);
  for (std::size_t pos = run.out.find("c conflicts"); pos != std::string::npos;) {
    const auto digit = run.out.find_first_of("0123456789", pos);
    const auto eol = run.out.find('\n', pos);
    if (digit != std::string::npos && digit < eol) v.conflicts = std::stoull(run.out.substr(digit));
    break;
  }

  const bool exit_sat = contains(profile.sat_exit_codes, run.exit_code);
  const bool exit_unsat = contains(profile.unsat_exit_codes, run.exit_code);
  if (!parsed.answer) {
    if (run.exit_code == 0 || exit_sat || exit_unsat)
      throw ProtocolError("solver exited with code " + std::to_string(run.exit_code) + " without a status line");
    v.answer = Answer::unknown;
    v.diagnostics = "solver exited with code " + std::to_string(run.exit_code) +
                    (run.err.empty() ? std::string() : ": " + run.err.substr(0, 200));
    return v;
  }
  if ((*parsed.answer == Answer::sat && exit_unsat) || (*parsed.answer == Answer::unsat && exit_sat))
    throw ProtocolError("solver status line disagrees with exit code " + std::to_string(run.exit_code));

  v.answer = *parsed.answer;
  if (v.answer != Answer::sat) return v;
  if (parsed.model_literals.empty()) throw ProtocolError("solver reported sat without a model");
  BitVector model(instance.num_vars);
  for (int l : parsed.model_literals) {
    const auto var = static_cast<std::size_t>(std::abs(l));
    if (var >= 1 && var <= instance.num_vars) model.set(var - 1, l > 0);
  }
  if (!satisfies(instance, model)) throw IntegrityError("solver model fails the in-process recheck");
  v.model = std::move(model);
  return v;
}

}  // namespace xorcount
