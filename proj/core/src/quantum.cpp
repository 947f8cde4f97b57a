#include "zkgame/quantum.hpp"

#include <cmath>

#include "zkgame/error.hpp"

namespace zkgame {
namespace {

using cd = std::complex<double>;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// State vector reshaped to a dim_a x dim_b coefficient matrix.
Matrix coefficients(const Strategy& s) {
  if (s.state.size() != static_cast<Eigen::Index>(s.dim_a) * s.dim_b) {
    throw Error(Errc::kDimensionMismatch, "state size differs from dim_a * dim_b");
  }
  Matrix m(s.dim_a, s.dim_b);
  for (int a = 0; a < s.dim_a; ++a) {
    for (int b = 0; b < s.dim_b; ++b) m(a, b) = s.state(static_cast<Eigen::Index>(a) * s.dim_b + b);
  }
  return m;
}

const Measurement& measurement_for(const std::vector<std::optional<Measurement>>& side, int q, int dim,
                                   const std::string& who) {
  if (q >= static_cast<int>(side.size()) || !side[q]) {
    throw Error(Errc::kUnsupportedQuestion, who + " has no measurement for question " + std::to_string(q));
  }
  for (const auto& p : side[q]->projectors) {
    if (p.rows() != dim || p.cols() != dim) {
      throw Error(Errc::kDimensionMismatch, who + "'s projector has the wrong dimension");
    }
  }
  return *side[q];
}

Matrix pauli(char c) {
  Matrix m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
  }
  return m;
}

Measurement constraint_measurement(const Constraint& c, const std::vector<Answer>& answers,
                                   const std::vector<Matrix>& obs, bool transpose) {
  const auto dim = obs.front().rows();
  Measurement m;
  for (const auto& a : answers) {
    Matrix p = Matrix::Identity(dim, dim);
    for (std::size_t t = 0; t < c.scope.size(); ++t) {
      const Matrix o = transpose ? Matrix(obs[c.scope[t]].transpose()) : obs[c.scope[t]];
      p = p * (Matrix::Identity(dim, dim) + static_cast<double>(a[t]) * o) * 0.5;
    }
    m.outcomes.push_back(a);
    m.projectors.push_back(std::move(p));
  }
  return m;
}

Measurement sign_measurement(const Matrix& o) {
  auto [plus, minus] = sign_projectors(o);
  return Measurement{{Answer{1}, Answer{-1}}, {plus, minus}};
}

Measurement trivial_measurement(int dim) {
  return Measurement{{Answer{1}}, {Matrix::Identity(dim, dim)}};
}

int single_var(const Bcs& b, int group) {
  const auto groups = effective_groups(b);
  if (groups[group].vars.size() != 1) {
    throw Error(Errc::kInvalidArgument, "quantum strategies support single-variable questions only");
  }
  return groups[group].vars.front();
}

}  // namespace

Vector maximally_entangled(int dim) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim) * dim);
  for (int i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i) * dim + i) = 1.0 / std::sqrt(dim);
  return v;
}

Vector epr_state(int n_pairs) {
  if (n_pairs < 0 || n_pairs > kMaxEprPairs) {
    throw Error(Errc::kTooLarge, "at most " + std::to_string(kMaxEprPairs) + " EPR pairs");
  }
  return maximally_entangled(1 << n_pairs);
}

std::vector<Outcome<double>> pair_correlation(const Strategy& s, int x, int y) {
  const Matrix m = coefficients(s);
  const Matrix md = m.adjoint();
  const auto& ma = measurement_for(s.alice, x, s.dim_a, "Alice");
  const auto& mb = measurement_for(s.bob, y, s.dim_b, "Bob");
  std::vector<Outcome<double>> cond;
  for (std::size_t i = 0; i < ma.outcomes.size(); ++i) {
    const Matrix left = md * ma.projectors[i] * m;
    for (std::size_t j = 0; j < mb.outcomes.size(); ++j) {
      const double p = (left * mb.projectors[j].transpose()).trace().real();
      if (p > 1e-15) cond.push_back({ma.outcomes[i], mb.outcomes[j], p});
    }
  }
  return cond;
}

Correlation correlation_of(const NonlocalGame& g, const Strategy& s) {
  Correlation out;
  for (const auto& e : g.mu()) out[{e.x, e.y}] = pair_correlation(s, e.x, e.y);
  return out;
}

double strategy_value(const NonlocalGame& g, const Strategy& s) {
  return value_of_correlation(g, correlation_of(g, s));
}

PccReport check_pcc(const NonlocalGame& g, const Strategy& s, double tol) {
  PccReport r;
  const Matrix m = coefficients(s);
  auto projective = [&](const Measurement& meas, int dim) {
    Matrix sum = Matrix::Zero(dim, dim);
    for (const auto& p : meas.projectors) {
      r.projectivity = std::max(r.projectivity, (p * p - p).norm());
      r.projectivity = std::max(r.projectivity, (p - p.adjoint()).norm());
      sum += p;
    }
    r.projectivity = std::max(r.projectivity, (sum - Matrix::Identity(dim, dim)).norm());
  };
  std::vector<char> seen_a(g.x_set().size(), 0), seen_b(g.y_set().size(), 0);
  for (const auto& e : g.mu()) {
    const auto& ma = measurement_for(s.alice, e.x, s.dim_a, "Alice");
    const auto& mb = measurement_for(s.bob, e.y, s.dim_b, "Bob");
    if (!seen_a[e.x]++) projective(ma, s.dim_a);
    if (!seen_b[e.y]++) projective(mb, s.dim_b);
    if (s.dim_a != s.dim_b) throw Error(Errc::kDimensionMismatch, "commutators need a common space");
    for (const auto& pa : ma.projectors) {
      for (const auto& pb : mb.projectors) {
        r.commutator = std::max(r.commutator, (pa * pb - pb * pa).operatorNorm());
      }
    }
  }
  // Consistency on questions asked to both sides.
  for (std::size_t x = 0; x < g.x_set().size() && x < g.y_set().size(); ++x) {
    if (!seen_a[x] || !seen_b[x] || g.x_set()[x].label != g.y_set()[x].label) continue;
    const auto& ma = *s.alice[x];
    const auto& mb = *s.bob[x];
    for (std::size_t i = 0; i < ma.outcomes.size(); ++i) {
      Matrix bob_part = Matrix::Zero(s.dim_a, s.dim_b);
      for (std::size_t j = 0; j < mb.outcomes.size(); ++j) {
        if (mb.outcomes[j] == ma.outcomes[i]) bob_part = m * mb.projectors[j].transpose();
      }
      r.consistency = std::max(r.consistency, (ma.projectors[i] * m - bob_part).norm());
    }
    for (std::size_t j = 0; j < mb.outcomes.size(); ++j) {
      bool listed = false;
      for (const auto& a : ma.outcomes) listed = listed || a == mb.outcomes[j];
      if (!listed) r.consistency = std::max(r.consistency, (m * mb.projectors[j].transpose()).norm());
    }
  }
  r.pass = r.projectivity <= tol && r.commutator <= tol && r.consistency <= tol;
  return r;
}

std::pair<Matrix, Matrix> sign_projectors(const Matrix& o) {
  if ((o - o.adjoint()).norm() > 1e-8) throw Error(Errc::kInvalidArgument, "observable is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(o);
  const auto dim = o.rows();
  Matrix plus = Matrix::Zero(dim, dim), minus = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double lambda = es.eigenvalues()(i);
    const Vector v = es.eigenvectors().col(i);
    if (std::abs(lambda - 1) <= 1e-8) {
      plus += v * v.adjoint();
    } else if (std::abs(lambda + 1) <= 1e-8) {
      minus += v * v.adjoint();
    } else {
      throw Error(Errc::kInvalidArgument, "observable eigenvalue " + std::to_string(lambda) + " is not +-1");
    }
  }
  return {plus, minus};
}

Matrix variable_observable(const Strategy& s, const Bcs& b, int i, int var, bool bob) {
  const auto& scope = b.constraints.at(i).scope;
  const auto it = std::find(scope.begin(), scope.end(), var);
  if (it == scope.end()) {
    throw Error(Errc::kVarNotInScope, "variable " + std::to_string(var) + " not in constraint " + std::to_string(i));
  }
  const auto pos = it - scope.begin();
  const auto& side = bob ? s.bob : s.alice;
  const int dim = bob ? s.dim_b : s.dim_a;
  const auto& meas = measurement_for(side, i, dim, bob ? "Bob" : "Alice");
  Matrix o = Matrix::Zero(dim, dim);
  for (std::size_t a = 0; a < meas.outcomes.size(); ++a) {
    o += static_cast<double>(meas.outcomes[a][pos]) * meas.projectors[a];
  }
  return o;
}

Strategy strategy_from_observables(const NonlocalGame& g, const Bcs& b, const std::vector<Matrix>& obs) {
  if (static_cast<int>(obs.size()) != b.n || obs.empty()) {
    throw Error(Errc::kDimensionMismatch, "one observable per variable required");
  }
  const int dim = static_cast<int>(obs.front().rows());
  Strategy s;
  s.dim_a = s.dim_b = dim;
  s.state = maximally_entangled(dim);
  for (int side = 0; side < 2; ++side) {
    const auto& qs = side == 0 ? g.x_set() : g.y_set();
    auto& out = side == 0 ? s.alice : s.bob;
    for (const auto& q : qs) {
      if (const auto* c = std::get_if<ConstraintQ>(&q.tag)) {
        const auto& con = b.constraints.at(c->i);
        const auto answers = q.answers ? *q.answers : satisfying_set(con);
        out.push_back(constraint_measurement(con, answers, obs, side == 1));
      } else if (const auto* v = std::get_if<VariableQ>(&q.tag)) {
        const Matrix& o = obs.at(single_var(b, v->j));
        out.push_back(sign_measurement(side == 1 ? Matrix(o.transpose()) : o));
      } else {
        out.push_back(std::nullopt);
      }
    }
  }
  return s;
}

std::vector<Matrix> magic_square_observables() {
  static const char* kGrid[9] = {"XI", "IX", "XX", "IZ", "ZI", "ZZ", "XZ", "ZX", "YY"};
  std::vector<Matrix> out;
  for (const char* cell : kGrid) out.push_back(kron(pauli(cell[0]), pauli(cell[1])));
  return out;
}

Strategy magic_square_strategy() {
  const Bcs b = magic_square();
  return strategy_from_observables(cv_game(b), b, magic_square_observables());
}

Strategy magic_square_cc_strategy() {
  const Bcs b = magic_square();
  return strategy_from_observables(cc_game(b), b, magic_square_observables());
}

Strategy embed_deterministic(const NonlocalGame& g, const DeterministicStrategy& d) {
  Strategy s;
  s.state = Vector::Ones(1);
  for (const auto& a : d.alice) s.alice.push_back(Measurement{{a}, {Matrix::Identity(1, 1)}});
  for (const auto& b : d.bob) s.bob.push_back(Measurement{{b}, {Matrix::Identity(1, 1)}});
  if (s.alice.size() != g.x_set().size() || s.bob.size() != g.y_set().size()) {
    throw Error(Errc::kDimensionMismatch, "strategy does not cover the question sets");
  }
  return s;
}

Strategy cv_strategy_from_cc(const Strategy& cc, const Bcs& b, double tol) {
  const auto gcc = cc_game(b);
  const double v = strategy_value(gcc, cc);
  if (v < 1 - tol) throw Error(Errc::kNotPerfect, "CC strategy value " + std::to_string(v) + " is below 1");
  const auto gcv = cv_game(b);
  Strategy s;
  s.state = cc.state;
  s.dim_a = cc.dim_a;
  s.dim_b = cc.dim_b;
  for (int side = 0; side < 2; ++side) {
    const bool bob = side == 1;
    auto& out = bob ? s.bob : s.alice;
    const auto& in = bob ? cc.bob : cc.alice;
    const int dim = bob ? s.dim_b : s.dim_a;
    for (const auto& q : (bob ? gcv.y_set() : gcv.x_set())) {
      if (const auto* c = std::get_if<ConstraintQ>(&q.tag)) {
        out.push_back(in.at(c->i));
        continue;
      }
      const int var = single_var(b, std::get<VariableQ>(q.tag).j);
      int owner = -1;
      for (int i = 0; i < b.m() && owner < 0; ++i) {
        const auto& sc = b.constraints[i].scope;
        if (std::find(sc.begin(), sc.end(), var) != sc.end()) owner = i;
      }
      out.push_back(owner < 0 ? trivial_measurement(dim)
                              : sign_measurement(variable_observable(cc, b, owner, var, bob)));
    }
  }
  return s;
}

}  // namespace zkgame
