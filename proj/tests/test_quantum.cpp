#include <doctest.h>

#include <complex>

#include "helpers.hpp"
#include "zkgame/error.hpp"
#include "zkgame/quantum.hpp"

using namespace zkgame;
using namespace zkgame::testing;
using cd = std::complex<double>;

namespace {

Matrix pauli(char c) {
  Matrix m(2, 2);
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    case 'Y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    default: m = Matrix::Identity(2, 2);
  }
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Question one_bit(const std::string& label) {
  Question q;
  q.label = label;
  q.answer_bits = 1;
  q.answers = std::vector<Answer>{{1}, {-1}};
  return q;
}

Measurement sign_measurement(const Matrix& obs) {
  const auto [plus, minus] = sign_projectors(obs);
  return {{{1}, {-1}}, {plus, minus}};
}

}  // namespace

TEST_CASE("EPR states") {
  const auto s = epr_state(1);
  REQUIRE(s.size() == 4);
  const double h = 1 / std::sqrt(2.0);
  CHECK(std::abs(s(0) - h) < 1e-15);
  CHECK(std::abs(s(1)) < 1e-15);
  CHECK(std::abs(s(2)) < 1e-15);
  CHECK(std::abs(s(3) - h) < 1e-15);
  for (int n = 0; n <= 3; ++n) CHECK(std::abs(epr_state(n).norm() - 1) < 1e-12);
  const Matrix zz = kron(pauli('Z'), pauli('Z'));
  CHECK(std::abs((s.adjoint() * zz * s)(0, 0) - 1.0) < 1e-12);
  CHECK_THROWS_AS(epr_state(kMaxEprPairs + 1), Error);
}

TEST_CASE("transpose trick on the maximally entangled state") {
  Rng rng(6);
  const int dim = 4;
  const auto phi = maximally_entangled(dim);
  auto random_hermitian = [&] {
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = cd(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
    return Matrix((m + m.adjoint()) / 2);
  };
  for (int t = 0; t < 10; ++t) {
    const Matrix a = random_hermitian(), b = random_hermitian();
    const cd lhs = (phi.adjoint() * kron(a, b) * phi)(0, 0);
    const cd rhs = (phi.adjoint() * kron(a * b.transpose(), Matrix::Identity(dim, dim)) * phi)(0, 0);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("magic square observables") {
  const auto obs = magic_square_observables();
  REQUIRE(obs.size() == 9);
  const auto ms = magic_square();
  const Matrix id = Matrix::Identity(4, 4);
  const std::vector<double> signs{1, 1, 1, 1, 1, -1};
  for (int i = 0; i < 6; ++i) {
    const auto& sc = ms.constraints[i].scope;
    Matrix prod = id;
    for (int v : sc) prod = prod * obs[v];
    CHECK((prod - signs[i] * id).norm() < 1e-12);
    for (int u : sc)
      for (int v : sc) CHECK((obs[u] * obs[v] - obs[v] * obs[u]).norm() < 1e-12);
  }
  for (const auto& o : obs) CHECK((o * o - id).norm() < 1e-9);
}

TEST_CASE("magic square strategy wins") {
  const auto g = cv_game(magic_square());
  const auto s = magic_square_strategy();
  CHECK(strategy_value(g, s) >= 1 - 1e-9);
  const auto r = check_pcc(g, s, 1e-9);
  CHECK(r.pass);

  // v1 read from the first row matches the grid observable
  const auto obs = magic_square_observables();
  CHECK((variable_observable(s, magic_square(), 0, 0) - obs[0]).norm() < 1e-12);
  // v5 sits in row 1 and column 1 (constraints 1 and 4)
  CHECK((variable_observable(s, magic_square(), 1, 4) - variable_observable(s, magic_square(), 4, 4)).norm() < 1e-9);
  CHECK_THROWS_AS(variable_observable(s, magic_square(), 0, 5), Error);

  const auto cc = cc_game(magic_square());
  CHECK(strategy_value(cc, magic_square_cc_strategy()) >= 1 - 1e-9);
}

TEST_CASE("correlations are normalized") {
  const auto g = cv_game(magic_square());
  const auto corr = correlation_of(g, magic_square_strategy());
  for (const auto& [xy, outs] : corr) {
    double sum = 0;
    for (const auto& o : outs) {
      CHECK(o.p >= -1e-12);
      sum += o.p;
    }
    CHECK(std::abs(sum - 1) < 1e-10);
  }
  CHECK(std::abs(value_of_correlation(g, corr) - 1) < 1e-9);
}

TEST_CASE("cc to cv") {
  const auto ms = magic_square();
  const auto cv = cv_game(ms);
  const auto s = cv_strategy_from_cc(magic_square_cc_strategy(), ms);
  CHECK(strategy_value(cv, s) >= 1 - 1e-9);
  CHECK(check_pcc(cv, s, 1e-9).pass);

  // a classical satisfiable BCS: the deterministic CC strategy carries over exactly
  Bcs b;
  b.n = 2;
  b.constraints.push_back(parity_constraint({0, 1}, -1));
  b.constraints.push_back(Constraint::circuit({1}, Circuit::var(1)));
  const auto cc = cc_game(b);
  const auto d = perfect_classical_strategy(cc);
  REQUIRE(d.has_value());
  const auto lifted = cv_strategy_from_cc(embed_deterministic(cc, *d), b);
  CHECK(strategy_value(cv_game(b), lifted) == doctest::Approx(1.0).epsilon(1e-12));

  // an imperfect CC strategy is refused
  auto bad = *d;
  bad.alice[0] = bad.alice[0] == Answer{1, -1} ? Answer{-1, 1} : Answer{1, -1};
  const auto imperfect = embed_deterministic(cc, DeterministicStrategy{bad.alice, d->bob});
  CHECK_THROWS_AS(cv_strategy_from_cc(imperfect, b), Error);
}

TEST_CASE("embedded deterministic strategies") {
  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    const auto g = cv_game(random_table_bcs(rng, 3, 2));
    DeterministicStrategy d;
    for (const auto& q : g.x_set()) d.alice.push_back((*q.answers)[rng.below(q.answers->size())]);
    for (const auto& q : g.y_set()) d.bob.push_back((*q.answers)[rng.below(q.answers->size())]);
    const auto s = embed_deterministic(g, d);
    CHECK(std::abs(strategy_value(g, s) - to_double(evaluate_deterministic(g, d))) < 1e-12);
    const auto r = check_pcc(g, s, 0);
    CHECK(r.commutator == 0);
    CHECK(r.projectivity == 0);
  }
}

TEST_CASE("non-commuting measurements fail the PCC check") {
  const auto q = one_bit("q");
  const NonlocalGame g("xz", {q}, {q}, {{0, 0, make_rational(1)}},
                       [](int, int, const Answer&, const Answer&) { return true; });
  Strategy s;
  s.state = epr_state(1);
  s.dim_a = s.dim_b = 2;
  s.alice = {sign_measurement(pauli('X'))};
  s.bob = {sign_measurement(pauli('Z'))};
  CHECK(strategy_value(g, s) == doctest::Approx(1.0));
  const auto r = check_pcc(g, s, 1e-9);
  CHECK_FALSE(r.pass);
  // projectors (1 +- X)/2 and (1 +- Z)/2: commutator norm 1/2 (the observables' is 2)
  CHECK(r.commutator == doctest::Approx(0.5));
  CHECK((pauli('X') * pauli('Z') - pauli('Z') * pauli('X')).operatorNorm() == doctest::Approx(2.0));

  s.alice = {sign_measurement(pauli('Z'))};
  CHECK(check_pcc(g, s, 1e-9).pass);
}

TEST_CASE("sign projectors") {
  const auto [p, m] = sign_projectors(pauli('Z'));
  CHECK((p - Matrix(Eigen::Vector2cd(1, 0).asDiagonal())).norm() < 1e-12);
  CHECK((p + m - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK_THROWS_AS(sign_projectors(2 * pauli('Z')), Error);
}

TEST_CASE("strategy dimension checks") {
  const auto g = cv_game(magic_square());
  auto s = magic_square_strategy();
  s.state = epr_state(1);
  CHECK_THROWS_AS(strategy_value(g, s), Error);
}
