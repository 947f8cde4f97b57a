#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "zkgame/circuit.hpp"
#include "zkgame/s5.hpp"

namespace zkgame {

using Sign = std::int8_t;
// Global assignment: variable id -> sign.
using Assignment = std::map<int, Sign>;
// Values listed in a constraint's scope order.
using LocalAssignment = std::vector<Sign>;

struct TableSpec {
  std::vector<LocalAssignment> rows;
};

// Relations over 7-bit S5 blocks (see s5.hpp for the encoding). A block
// holding one of the invalid codes 120..127 fails every relation.
//
// Pin scope: `copies` sign variables, then the block T. Holds iff
// T == plus when the product of the copies is +1, else T == minus.
struct S5Pin {
  int copies = 1;
  S5Element plus, minus;
};
// Propagate scope: [left] T [right] T'. Holds iff T' == left^-1 T right,
// with a missing left/right block read as the identity.
struct S5Propagate {
  bool has_left = true;
  bool has_right = true;
};
// Product scope: `blocks` blocks whose left-to-right product is target.
struct S5Product {
  int blocks = 1;
  S5Element target;
};
using S5Relation = std::variant<S5Pin, S5Propagate, S5Product>;

struct Constraint {
  std::vector<int> scope;
  std::variant<TableSpec, Circuit, S5Relation> spec;

  static Constraint table(std::vector<int> scope, std::vector<LocalAssignment> rows);
  static Constraint circuit(std::vector<int> scope, Circuit c);
  static Constraint s5(std::vector<int> scope, S5Relation rel);
};

// Logical variable: a name for a block of sign variables (7 bits for a
// permutation-valued variable, 1 bit otherwise).
struct VarGroup {
  std::string name;
  std::vector<int> vars;
};

struct Bcs {
  int n = 0;
  std::vector<Constraint> constraints;
  std::vector<std::string> names;  // empty, or one per variable
  std::vector<VarGroup> groups;    // empty means one group per variable
  int c_max = 8;

  int m() const { return static_cast<int>(constraints.size()); }
  // Throws InvalidArgument on any broken invariant.
  void validate() const;
};

// Groups with the singleton default filled in.
std::vector<VarGroup> effective_groups(const Bcs& b);
// var id -> index into effective_groups(b).
std::vector<int> group_index(const Bcs& b);
std::string var_name(const Bcs& b, int v);

bool eval_local(const Constraint& c, std::span<const Sign> values);
bool eval_constraint(const Constraint& c, const Assignment& a);

inline constexpr int kSatisfyingSetGuard = 20;
// Enumeration order: index bit j set <=> scope position j is +1.
std::vector<LocalAssignment> satisfying_set(const Constraint& c,
                                            int guard = kSatisfyingSetGuard);

inline constexpr int kBruteForceGuard = 24;
std::optional<Assignment> brute_force_satisfiable(const Bcs& b,
                                                  int guard = kBruteForceGuard);

// Constraint "product of scope values == sign".
Constraint parity_constraint(std::vector<int> scope, Sign product);
// Nine variables v1..v9 (ids 0..8) in a 3x3 grid; rows and the first two
// columns multiply to +1, the last column to -1.
Bcs magic_square();

LocalAssignment restrict_to(const Assignment& a, const std::vector<int>& scope);

}  // namespace zkgame
