#pragma once

#include <string_view>
#include <vector>

#include "zkgame/bcs.hpp"

namespace zkgame {

struct CnfOptions {
  int c_max = 8;
};

struct Cnf {
  int n = 0;
  std::vector<std::vector<int>> clauses;  // DIMACS literals, 1-based
};

// Throws ParseError carrying the 1-based line of the offending token.
Cnf parse_dimacs(std::string_view text);

// One circuit constraint per clause: a balanced OR tree of literals over
// the clause's distinct variables (variable k becomes id k-1).
Bcs bcs_from_cnf(const Cnf& cnf, const CnfOptions& opts = {});
Bcs bcs_from_cnf(std::string_view text, const CnfOptions& opts = {});

bool cnf_satisfied(const Cnf& cnf, const Assignment& a);

}  // namespace zkgame
