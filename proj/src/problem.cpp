#include "xorcount/problem.hpp"

#include <algorithm>
#include <sstream>

#include "xorcount/error.hpp"

namespace xorcount {

CountingProblem CountingProblem::explicit_set(std::size_t n, std::vector<Assignment> elements) {
  if (n == 0) throw ParameterError("explicit set needs n >= 1");
  for (const auto& e : elements)
    if (e.size() != n)
      throw DimensionError("element of width " + std::to_string(e.size()) + " in a set over " + std::to_string(n) +
                           " variables");
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return CountingProblem(n, ExplicitSet{n, std::move(elements)}, "explicit");
}

CountingProblem CountingProblem::cnf(CnfFormula formula, std::string origin) {
  auto vars = formula.projection();
  return cnf(std::move(formula), std::move(vars), std::move(origin));
}

CountingProblem CountingProblem::cnf(CnfFormula formula, std::vector<int> hash_vars, std::string origin) {
  if (hash_vars.empty()) throw ParameterError("counting problem has no hash variables");
  std::vector<int> sorted = hash_vars;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ParameterError("hash variables repeat");
  for (int v : hash_vars)
    if (v <= 0 || static_cast<std::size_t>(v) > formula.num_vars)
      throw ParameterError("hash variable " + std::to_string(v) + " is outside the formula");
  const std::size_t n = hash_vars.size();
  return CountingProblem(n, CnfProblem{std::move(formula), std::move(hash_vars)}, std::move(origin));
}

CountingProblem parse_explicit_set(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  bool have_n = false;
  std::vector<Assignment> elements;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream toks(line);
    std::string tok;
    while (toks >> tok) {
      if (!have_n) {
        try {
          std::size_t used = 0;
          n = std::stoul(tok, &used);
          if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw ParseError("line " + std::to_string(line_no) + ": expected the variable count, got '" + tok + "'");
        }
        have_n = true;
        continue;
      }
      if (tok.size() != n || tok.find_first_not_of("01") != std::string::npos)
        throw ParseError("line " + std::to_string(line_no) + ": expected a " + std::to_string(n) +
                         "-bit string, got '" + tok + "'");
      elements.push_back(BitVector::from_string(tok));
    }
  }
  if (!have_n) throw ParseError("empty set file");
  return CountingProblem::explicit_set(n, std::move(elements));
}

}  // namespace xorcount
