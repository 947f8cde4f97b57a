#pragma once

#include <algorithm>
#include <string_view>
#include <vector>

#include "zkgame/bcs.hpp"
#include "zkgame/dimacs.hpp"
#include "zkgame/rng.hpp"

namespace zkgame::testing {

// x1 AND x2 as a circuit over two variables: Barrington depth 4.
inline Bcs and_bcs() {
  Bcs b;
  b.n = 2;
  b.constraints.push_back(Constraint::circuit({0, 1}, Circuit::land(Circuit::var(0), Circuit::var(1))));
  return b;
}

// One literal constraint x = +1: Barrington depth 1.
inline Bcs literal_bcs() {
  Bcs b;
  b.n = 1;
  b.constraints.push_back(Constraint::circuit({0}, Circuit::var(0)));
  return b;
}

inline Bcs tiny_3sat() { return bcs_from_cnf(std::string_view("p cnf 3 2\n1 2 3 0\n-1 2 -3 0\n")); }

// Random table BCS with n variables and m constraints of width <= 3.
inline Bcs random_table_bcs(Rng& rng, int n, int m) {
  Bcs b;
  b.n = n;
  for (int i = 0; i < m; ++i) {
    const int w = 1 + static_cast<int>(rng.below(std::min(3, n)));
    std::vector<int> scope;
    while (static_cast<int>(scope.size()) < w) {
      const int v = static_cast<int>(rng.below(n));
      if (std::find(scope.begin(), scope.end(), v) == scope.end()) scope.push_back(v);
    }
    std::vector<LocalAssignment> rows;
    for (int idx = 0; idx < (1 << w); ++idx) {
      if (rng.below(3) == 0) continue;
      LocalAssignment a(w);
      for (int j = 0; j < w; ++j) a[j] = (idx >> j & 1) ? 1 : -1;
      rows.push_back(a);
    }
    b.constraints.push_back(Constraint::table(scope, rows));
  }
  return b;
}

inline std::vector<Sign> as_vector(const Assignment& a, int n) {
  std::vector<Sign> w(n, 1);
  for (const auto& [v, s] : a) w[v] = s;
  return w;
}

}  // namespace zkgame::testing
