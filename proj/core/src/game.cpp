#include "zkgame/game.hpp"

#include <algorithm>
#include <numeric>

#include "zkgame/error.hpp"

namespace zkgame {
namespace {

BigInt lcm_big(const BigInt& a, const BigInt& b) { return a / boost::multiprecision::gcd(a, b) * b; }

BigInt uniform_below(Rng& rng, const BigInt& n) {
  if (n <= BigInt(std::numeric_limits<std::uint64_t>::max())) {
    return BigInt(rng.below(n.convert_to<std::uint64_t>()));
  }
  const unsigned bits = boost::multiprecision::msb(n) + 1;
  for (;;) {
    BigInt v = 0;
    for (unsigned got = 0; got < bits; got += 64) v = (v << 64) | BigInt(rng());
    v >>= (bits + 63) / 64 * 64 - bits;
    if (v < n) return v;
  }
}

std::vector<Answer> full_cube(int width) {
  std::vector<Answer> out;
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << width); ++idx) {
    Answer a(width);
    for (int j = 0; j < width; ++j) a[j] = ((idx >> j) & 1) ? 1 : -1;
    out.push_back(std::move(a));
  }
  return out;
}

std::optional<std::vector<Answer>> constraint_answers(const Constraint& c) {
  if (static_cast<int>(c.scope.size()) > kExplicitAnswerBits) return std::nullopt;
  auto sat = satisfying_set(c, kExplicitAnswerBits);
  if (sat.empty()) return full_cube(static_cast<int>(c.scope.size()));
  return sat;
}

bool agree_on_shared(const std::vector<int>& s1, const Answer& a, const std::vector<int>& s2,
                     const Answer& b) {
  for (std::size_t p = 0; p < s1.size(); ++p) {
    const auto it = std::find(s2.begin(), s2.end(), s1[p]);
    if (it != s2.end() && b[it - s2.begin()] != a[p]) return false;
  }
  return true;
}

bool satisfies(const Constraint& c, const Answer& a) {
  return a.size() == c.scope.size() && eval_local(c, a);
}

}  // namespace

int bits_for(std::size_t count) {
  int bits = 1;
  while ((std::size_t{1} << bits) < count) ++bits;
  return bits;
}

NonlocalGame::NonlocalGame(std::string name, std::vector<Question> xs, std::vector<Question> ys,
                           std::vector<MuEntry> mu, Predicate predicate)
    : name_(std::move(name)), xs_(std::move(xs)), ys_(std::move(ys)), predicate_(std::move(predicate)) {
  std::map<std::pair<int, int>, Rational> merged;
  for (auto& e : mu) {
    if (e.x < 0 || e.x >= static_cast<int>(xs_.size()) || e.y < 0 ||
        e.y >= static_cast<int>(ys_.size())) {
      throw Error(Errc::kInvalidArgument, "distribution entry outside question sets");
    }
    if (e.p < 0) throw Error(Errc::kInvalidArgument, "negative probability");
    merged[{e.x, e.y}] += e.p;
  }
  Rational total = 0;
  BigInt den = 1;
  for (const auto& [key, p] : merged) {
    if (p == 0) continue;
    index_[key] = mu_.size();
    mu_.push_back({key.first, key.second, p});
    total += p;
    den = lcm_big(den, denominator(p));
  }
  if (total != 1) {
    throw Error(Errc::kInvalidArgument, "question distribution sums to " + to_string(total));
  }
  total_ = 0;
  for (const auto& e : mu_) {
    total_ += numerator(e.p) * (den / denominator(e.p));
    cumulative_.push_back(total_);
  }
}

Rational NonlocalGame::prob(int x, int y) const {
  const auto it = index_.find({x, y});
  return it == index_.end() ? Rational(0) : mu_[it->second].p;
}

std::pair<int, int> NonlocalGame::sample_pair(Rng& rng) const {
  const BigInt r = uniform_below(rng, total_);
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  const auto& e = mu_[it - cumulative_.begin()];
  return {e.x, e.y};
}

NonlocalGame cc_game(const Bcs& b) {
  b.validate();
  auto src = std::make_shared<const Bcs>(b);
  const int m = b.m();
  std::vector<Question> qs;
  for (int i = 0; i < m; ++i) {
    const auto& c = b.constraints[i];
    qs.push_back({"c" + std::to_string(i), ConstraintQ{i}, bits_for(m),
                  static_cast<int>(c.scope.size()), constraint_answers(c)});
  }
  std::vector<MuEntry> mu;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) mu.push_back({i, j, make_rational(1, std::int64_t{m} * m)});
  }
  Predicate pred = [src](int x, int y, const Answer& a, const Answer& b2) {
    const auto& ci = src->constraints[x];
    const auto& cj = src->constraints[y];
    return satisfies(ci, a) && satisfies(cj, b2) && agree_on_shared(ci.scope, a, cj.scope, b2);
  };
  NonlocalGame g("cc", qs, qs, std::move(mu), std::move(pred));
  g.kind = GameKind::kCC;
  g.bcs = src;
  return g;
}

NonlocalGame cv_game(const Bcs& b) {
  b.validate();
  auto src = std::make_shared<const Bcs>(b);
  const int m = b.m();
  const auto groups = effective_groups(b);
  const auto gidx = group_index(b);
  const int ng = static_cast<int>(groups.size());
  const int total = m + ng;

  std::vector<Question> qs;
  for (int i = 0; i < m; ++i) {
    const auto& c = b.constraints[i];
    qs.push_back({"c" + std::to_string(i), ConstraintQ{i}, bits_for(total),
                  static_cast<int>(c.scope.size()), constraint_answers(c)});
  }
  for (int j = 0; j < ng; ++j) {
    const int w = static_cast<int>(groups[j].vars.size());
    std::optional<std::vector<Answer>> answers;
    if (w <= kExplicitAnswerBits) answers = full_cube(w);
    qs.push_back({groups[j].name, VariableQ{j}, bits_for(total), w, std::move(answers)});
  }

  // Referee: i uniform, j uniform among the groups met by V_i, then one of
  // (i,i), (j,j), (i,j), (j,i) with probability 1/4 each.
  std::vector<MuEntry> mu;
  for (int i = 0; i < m; ++i) {
    std::vector<int> touched;
    for (int v : b.constraints[i].scope) {
      if (std::find(touched.begin(), touched.end(), gidx[v]) == touched.end()) {
        touched.push_back(gidx[v]);
      }
    }
    if (touched.empty()) {
      mu.push_back({i, i, make_rational(1, m)});
      continue;
    }
    mu.push_back({i, i, make_rational(1, 4 * std::int64_t{m})});
    const auto p = make_rational(1, 4 * std::int64_t{m} * static_cast<std::int64_t>(touched.size()));
    for (int j : touched) {
      mu.push_back({m + j, m + j, p});
      mu.push_back({i, m + j, p});
      mu.push_back({m + j, i, p});
    }
  }

  auto group_vars = std::make_shared<const std::vector<VarGroup>>(groups);
  Predicate pred = [src, group_vars, m](int x, int y, const Answer& a, const Answer& bb) {
    const auto& gs = *group_vars;
    auto width_ok = [&](int q, const Answer& ans) {
      return q < m ? ans.size() == src->constraints[q].scope.size()
                   : ans.size() == gs[q - m].vars.size();
    };
    if (!width_ok(x, a) || !width_ok(y, bb)) return false;
    if (x == y) return a == bb && (x >= m || eval_local(src->constraints[x], a));
    if (x < m && y < m) {
      const auto& ci = src->constraints[x];
      const auto& cj = src->constraints[y];
      return eval_local(ci, a) && eval_local(cj, bb) && agree_on_shared(ci.scope, a, cj.scope, bb);
    }
    if (x >= m && y >= m) return true;
    const bool alice_constraint = x < m;
    const auto& c = src->constraints[alice_constraint ? x : y];
    const auto& ca = alice_constraint ? a : bb;
    const auto& va = alice_constraint ? bb : a;
    const auto& g = gs[(alice_constraint ? y : x) - m];
    return eval_local(c, ca) && agree_on_shared(c.scope, ca, g.vars, va);
  };
  NonlocalGame g("cv", qs, qs, std::move(mu), std::move(pred));
  g.kind = GameKind::kCV;
  g.bcs = src;
  return g;
}

Rational synchronicity_alpha(const NonlocalGame& g) {
  const auto& xs = g.x_set();
  const auto& ys = g.y_set();
  if (xs.size() != ys.size()) throw Error(Errc::kAsymmetricGame, "question sets differ in size");
  for (std::size_t q = 0; q < xs.size(); ++q) {
    if (xs[q].label != ys[q].label) {
      throw Error(Errc::kAsymmetricGame, "question " + std::to_string(q) + " differs between sides");
    }
  }
  std::vector<Rational> row(xs.size(), 0);
  for (const auto& e : g.mu()) row[e.x] += e.p;
  std::optional<Rational> alpha;
  for (std::size_t x = 0; x < xs.size(); ++x) {
    if (row[x] == 0) continue;
    const Rational r = g.prob(static_cast<int>(x), static_cast<int>(x)) / row[x];
    if (!alpha || r < *alpha) alpha = r;
  }
  return alpha.value_or(Rational(1));
}

Rational evaluate_deterministic(const NonlocalGame& g, const DeterministicStrategy& s) {
  if (s.alice.size() != g.x_set().size() || s.bob.size() != g.y_set().size()) {
    throw Error(Errc::kDimensionMismatch, "strategy does not cover the question sets");
  }
  Rational v = 0;
  for (const auto& e : g.mu()) {
    if (g.accepts(e.x, e.y, s.alice[e.x], s.bob[e.y])) v += e.p;
  }
  return v;
}

ExactCorrelation correlation_of(const NonlocalGame& g, const DeterministicStrategy& s) {
  ExactCorrelation out;
  for (const auto& e : g.mu()) out[{e.x, e.y}].push_back({s.alice[e.x], s.bob[e.y], Rational(1)});
  return out;
}

namespace {

template <class P>
P correlation_value(const NonlocalGame& g, const BasicCorrelation<P>& p) {
  P v = 0;
  for (const auto& e : g.mu()) {
    const auto it = p.find({e.x, e.y});
    if (it == p.end()) {
      throw Error(Errc::kMissingConditional, "no conditional for (" + g.x_set()[e.x].label + ", " +
                                                 g.y_set()[e.y].label + ")");
    }
    P win = 0;
    for (const auto& o : it->second) {
      if (g.accepts(e.x, e.y, o.a, o.b)) win += o.p;
    }
    if constexpr (std::is_same_v<P, Rational>) {
      v += e.p * win;
    } else {
      v += to_double(e.p) * win;
    }
  }
  return v;
}

}  // namespace

double value_of_correlation(const NonlocalGame& g, const Correlation& p) {
  return correlation_value(g, p);
}

Rational value_of_correlation(const NonlocalGame& g, const ExactCorrelation& p) {
  return correlation_value(g, p);
}

bool is_projection(const NonlocalGame& g) {
  for (const auto& e : g.mu()) {
    const auto& ax = g.x_set()[e.x].answers;
    const auto& by = g.y_set()[e.y].answers;
    if (!ax || !by) throw Error(Errc::kTooLarge, "answer sets are implicit");
    for (const auto& b : *by) {
      int accepted = 0;
      for (const auto& a : *ax) {
        if (g.accepts(e.x, e.y, a, b) && ++accepted > 1) return false;
      }
    }
  }
  return true;
}

}  // namespace zkgame
