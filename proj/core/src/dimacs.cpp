#include "zkgame/dimacs.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>

#include "zkgame/error.hpp"

namespace zkgame {
namespace {

bool parse_int(std::string_view tok, long long& out) {
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

Circuit or_tree(const std::vector<Circuit>& leaves, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return leaves[lo];
  const std::size_t mid = lo + (hi - lo + 1) / 2;
  return Circuit::lor(or_tree(leaves, lo, mid), or_tree(leaves, mid, hi));
}

}  // namespace

Cnf parse_dimacs(std::string_view text) {
  Cnf cnf;
  long long declared_clauses = -1;
  int header_line = 0;
  int line_no = 0;
  int last_line = 0;
  std::vector<int> current;
  bool open_clause = false;

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream toks(line);
    std::string first;
    if (!(toks >> first)) continue;
    if (first[0] == 'c') continue;
    if (first == "%") break;  // SATLIB trailer
    if (first == "p") {
      std::string fmt, sn, sm;
      long long n = 0, m = 0;
      if (declared_clauses >= 0) throw ParseError(line_no, "duplicate header");
      if (!(toks >> fmt >> sn >> sm) || fmt != "cnf" || !parse_int(sn, n) ||
          !parse_int(sm, m) || n < 0 || m < 0) {
        throw ParseError(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
      }
      std::string extra;
      if (toks >> extra) throw ParseError(line_no, "trailing token in header: " + extra);
      if (m == 0) throw ParseError(line_no, "a constraint system needs at least one clause");
      cnf.n = static_cast<int>(n);
      declared_clauses = m;
      header_line = line_no;
      continue;
    }
    if (declared_clauses < 0) throw ParseError(line_no, "clause before 'p cnf' header");
    toks.clear();
    toks.seekg(0);
    std::string tok;
    while (toks >> tok) {
      long long lit = 0;
      if (!parse_int(tok, lit)) throw ParseError(line_no, "bad literal '" + tok + "'");
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
        open_clause = false;
        continue;
      }
      if (std::llabs(lit) > cnf.n) {
        throw ParseError(line_no, "literal " + tok + " exceeds declared variable count");
      }
      current.push_back(static_cast<int>(lit));
      open_clause = true;
      last_line = line_no;
    }
  }
  if (declared_clauses < 0) throw ParseError(line_no == 0 ? 1 : line_no, "missing 'p cnf' header");
  if (open_clause) throw ParseError(last_line, "clause not terminated by 0");
  if (static_cast<long long>(cnf.clauses.size()) != declared_clauses) {
    throw ParseError(header_line, "header declares " + std::to_string(declared_clauses) +
                                      " clauses, found " + std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

Bcs bcs_from_cnf(const Cnf& cnf, const CnfOptions& opts) {
  Bcs b;
  b.n = cnf.n;
  b.c_max = opts.c_max;
  for (std::size_t ci = 0; ci < cnf.clauses.size(); ++ci) {
    const auto& clause = cnf.clauses[ci];
    std::vector<int> scope;
    std::vector<Circuit> leaves;
    for (int lit : clause) {
      const int v = std::abs(lit) - 1;
      if (std::find(scope.begin(), scope.end(), v) == scope.end()) scope.push_back(v);
      const auto leaf = Circuit::var(v);
      leaves.push_back(lit > 0 ? leaf : Circuit::negate(leaf));
    }
    if (static_cast<int>(scope.size()) > opts.c_max) {
      throw Error(Errc::kScopeTooLarge, "clause " + std::to_string(ci + 1) + " has " +
                                            std::to_string(scope.size()) +
                                            " variables, C_max is " + std::to_string(opts.c_max));
    }
    Circuit c = leaves.empty() ? Circuit::constant(false) : or_tree(leaves, 0, leaves.size());
    b.constraints.push_back(Constraint::circuit(std::move(scope), std::move(c)));
  }
  return b;
}

Bcs bcs_from_cnf(std::string_view text, const CnfOptions& opts) {
  return bcs_from_cnf(parse_dimacs(text), opts);
}

bool cnf_satisfied(const Cnf& cnf, const Assignment& a) {
  for (const auto& clause : cnf.clauses) {
    bool sat = false;
    for (int lit : clause) {
      const Sign s = a.at(std::abs(lit) - 1);
      if ((lit > 0) == (s > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

}  // namespace zkgame
