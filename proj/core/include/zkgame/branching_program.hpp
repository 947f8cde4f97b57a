#pragma once

#include <span>
#include <vector>

#include "zkgame/bcs.hpp"
#include "zkgame/circuit.hpp"
#include "zkgame/s5.hpp"

namespace zkgame {

// One step of a width-5 program: reads `var` and contributes on_plus when
// it is +1, on_minus otherwise.
struct Instruction {
  int var = 0;
  S5Element on_plus, on_minus;
};

struct PermutationBranchingProgram {
  std::vector<int> vars;  // scope X
  std::vector<Instruction> instructions;
  S5Element sigma = S5Element::standard_cycle();

  int depth() const { return static_cast<int>(instructions.size()); }
};

// Barrington compilation of a circuit of gate depth d into exactly 4^d
// instructions. NOT flips the target cycle, AND uses a commutator of two
// conjugated 5-cycles, OR goes through De Morgan. XOR gates and constants
// over an empty scope are rejected with UnsupportedGate.
PermutationBranchingProgram compile_branching_program(
    const Circuit& c, const std::vector<int>& scope,
    S5Element sigma = S5Element::standard_cycle());
PermutationBranchingProgram compile_branching_program(
    const Constraint& c, S5Element sigma = S5Element::standard_cycle());

S5Element run_pbp(const PermutationBranchingProgram& p, const Assignment& a);
// `values` follow p.vars order.
S5Element run_pbp_local(const PermutationBranchingProgram& p, std::span<const Sign> values);

inline constexpr int kRecognizeGuard = 12;
// P(phi) == sigma exactly on satisfying phi and == e elsewhere.
bool recognizes(const PermutationBranchingProgram& p, const Constraint& c);

}  // namespace zkgame
