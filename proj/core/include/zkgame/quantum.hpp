#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "zkgame/bcs.hpp"
#include "zkgame/game.hpp"

namespace zkgame {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Projective measurement: one projector per listed outcome.
struct Measurement {
  std::vector<Answer> outcomes;
  std::vector<Matrix> projectors;
};

// Shared state in H_A (x) H_B, index a*dim_b + b, plus per-question
// measurements indexed like the game's question sets.
struct Strategy {
  Vector state;
  int dim_a = 1, dim_b = 1;
  std::vector<std::optional<Measurement>> alice, bob;
};

inline constexpr int kMaxEprPairs = 6;
// n maximally entangled qubit pairs, Alice's qubits first.
Vector epr_state(int n_pairs);
Vector maximally_entangled(int dim);

// P(a,b|x,y) = <psi| A (x) B |psi> for the listed outcomes.
Correlation correlation_of(const NonlocalGame& g, const Strategy& s);
// Outcome distribution of one question pair (support or not).
std::vector<Outcome<double>> pair_correlation(const Strategy& s, int x, int y);
double strategy_value(const NonlocalGame& g, const Strategy& s);

struct PccReport {
  double projectivity = 0;  // max of |P^2-P|, |P-P*|, |sum P - 1|
  double commutator = 0;    // max |[A^x_a, B^y_b]| over support pairs
  double consistency = 0;   // max |(A^x_a (x) 1 - 1 (x) B^x_a) psi|
  bool pass = false;
};
PccReport check_pcc(const NonlocalGame& g, const Strategy& s, double tol);

// Eigenprojectors of a +-1 observable: {P_+, P_-}. Eigenvalues within
// 1e-8 of +-1 are rounded; anything else throws InvalidArgument.
std::pair<Matrix, Matrix> sign_projectors(const Matrix& observable);

// M^{i,k} = sum_a a_k M^i_a over Alice's (or Bob's) measurement for
// constraint question i of a CC or CV game built from b.
Matrix variable_observable(const Strategy& s, const Bcs& b, int i, int var, bool bob = false);

// Maximally entangled state of the observables' dimension; constraint
// questions measure the joint eigenprojectors of their scope's
// observables, variable questions a single observable. Bob measures the
// transposes. Works for cc_game(b) and cv_game(b).
Strategy strategy_from_observables(const NonlocalGame& g, const Bcs& b,
                                   const std::vector<Matrix>& observables);

// The 3x3 grid of two-qubit Pauli observables for magic_square().
std::vector<Matrix> magic_square_observables();
Strategy magic_square_strategy();     // for cv_game(magic_square())
Strategy magic_square_cc_strategy();  // for cc_game(magic_square())

// One-dimensional strategy answering deterministically.
Strategy embed_deterministic(const NonlocalGame& g, const DeterministicStrategy& d);

// CV strategy from a perfect CC strategy: constraint questions keep their
// measurements, variable questions measure the extracted observables.
Strategy cv_strategy_from_cc(const Strategy& cc, const Bcs& b, double tol = 1e-9);

}  // namespace zkgame
