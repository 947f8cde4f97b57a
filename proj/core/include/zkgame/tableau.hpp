#pragma once

#include <string>
#include <vector>

#include "zkgame/bcs.hpp"
#include "zkgame/branching_program.hpp"
#include "zkgame/obliviation.hpp"
#include "zkgame/rng.hpp"

namespace zkgame {

enum class ClauseKind { kPin, kPropagate, kProduct };

// Origin of one tableau clause; p and q are 1-based (q = 0 for products).
struct ClauseInfo {
  ClauseKind kind = ClauseKind::kPin;
  int constraint = 0;
  int p = 1, q = 0;
};

// What a variable group of the tableau BCS stands for.
struct GroupInfo {
  enum Kind { kCopy, kCell, kRandomizer } kind = kCopy;
  int a = 0, b = 0, c = 0;  // copy (v,t) | cell (i,p,q) | randomizer (i,p,j)
};

// Row-ell randomizing tableau over an obliviated BCS. Variable layout:
// the n*k oblivious copies first (one group each), then for every
// constraint its cells T[i][p][q] and randomizers r[i][p][j], each a
// 7-bit group. Boundary randomizers r[i][p][0] and r[i][p][d] are the
// identity and have no variables.
struct TableauBcs {
  Bcs bcs;
  ObliviatedBcs obl;
  int ell = 4;
  std::vector<PermutationBranchingProgram> programs;  // one per base constraint
  std::vector<ClauseInfo> clauses;                    // parallel to bcs.constraints
  std::vector<GroupInfo> group_info;                  // parallel to bcs.groups
  std::vector<int> cell_base, rand_base;              // first group per constraint
  std::vector<std::string> warnings;

  int k() const { return obl.k; }
  int m() const { return static_cast<int>(programs.size()); }
  int d(int i) const { return programs[i].depth(); }
  int copy_group(int v, int t) const { return obl.copy_var(v, t); }
  int cell_group(int i, int p, int q) const { return cell_base[i] + (p - 1) * d(i) + (q - 1); }
  // -1 for the constant boundary randomizers.
  int randomizer_group(int i, int p, int j) const {
    if (j <= 0 || j >= d(i)) return -1;
    return rand_base[i] + (p - 1) * (d(i) - 1) + (j - 1);
  }
  int first_bit(int group) const { return bcs.groups[group].vars.front(); }
  int clauses_of(int i) const { return d(i) + (ell - 1) * d(i) + 1; }
  int permutation_vars_of(int i) const { return ell * d(i) + (ell - 1) * (d(i) - 1); }
};

// Circuit form of a table constraint: OR over rows of AND over literals.
Circuit table_circuit(const Constraint& c);

TableauBcs tableau(const ObliviatedBcs& ob, int ell,
                   S5Element sigma = S5Element::standard_cycle());
TableauBcs tableau(const Bcs& b, int ell, S5Element sigma = S5Element::standard_cycle());
// tableau(obliviate(b, k), ell) with the pipeline's parameter checks.
TableauBcs pzk_transform(const Bcs& b, int ell = 8, int k = 9);

// Latent honest assignment of a tableau BCS.
struct TableauLatent {
  std::vector<Sign> copies;                         // n*k
  std::vector<std::vector<S5Element>> randomizers;  // [i][(p-1)*(d-1)+(j-1)]
  std::vector<std::vector<S5Element>> cells;        // [i][(p-1)*d+(q-1)]
};

// Fills the cells from copies and randomizers: row 1 by the pins, later
// rows by propagation.
void complete_cells(const TableauBcs& t, TableauLatent& latent);
// Throws NotAWitness unless w satisfies the base system.
void check_witness(const Bcs& base, const std::vector<Sign>& w);
// Honest latent: copies uniform given their products equal w, randomizers
// uniform, cells completed.
TableauLatent sample_latent(const TableauBcs& t, const std::vector<Sign>& w, Rng& rng);
// Full sign vector of the tableau BCS.
std::vector<Sign> latent_bits(const TableauBcs& t, const TableauLatent& latent);
// Signs of one variable group.
std::vector<Sign> latent_group_bits(const TableauBcs& t, const TableauLatent& latent, int group);

}  // namespace zkgame
