#pragma once

#include <vector>

#include "zkgame/bcs.hpp"

namespace zkgame {

// Degree-k obliviation: every base variable v becomes k copies x[v][t]
// (id v*k + t-1, t = 1..k) and a constraint holds iff the induced values
// psi(v) = prod_t x[v][t] satisfy the original constraint.
struct ObliviatedBcs {
  Bcs flat;
  Bcs base;
  int k = 1;

  int copy_var(int v, int t) const { return v * k + (t - 1); }
};

ObliviatedBcs obliviate(const Bcs& b, int k);

// psi for every base variable.
std::vector<Sign> induced_assignment(const ObliviatedBcs& ob, const std::vector<Sign>& copies);

}  // namespace zkgame
