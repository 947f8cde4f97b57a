#include <doctest.h>

#include "helpers.hpp"
#include "zkgame/error.hpp"
#include "zkgame/transforms.hpp"
#include "zkgame/zk_sim.hpp"

using namespace zkgame;
using namespace zkgame::testing;

namespace {

Rational r(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }

Answer cat(const Answer& a, const Answer& b) {
  Answer out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// A satisfiable BCS with a perfect deterministic CC strategy.
struct PerfectCase {
  Bcs b;
  NonlocalGame cc, cv;
  DeterministicStrategy d;
};

PerfectCase perfect_case() {
  PerfectCase pc;
  pc.b.n = 3;
  pc.b.constraints.push_back(parity_constraint({0, 1}, -1));
  pc.b.constraints.push_back(parity_constraint({1, 2}, 1));
  pc.b.constraints.push_back(Constraint::circuit({2}, Circuit::var(2)));
  pc.cc = cc_game(pc.b);
  pc.cv = cv_game(pc.b);
  pc.d = *perfect_classical_strategy(pc.cc);
  return pc;
}

void check_matches_exact(const AnswerSampler& s, int x, int y, int draws, std::uint64_t seed) {
  const auto exact = s.exact_distribution(x, y);
  REQUIRE(exact.has_value());
  std::map<AnswerPair, int> hits;
  Rng rng(seed);
  for (int t = 0; t < draws; ++t) {
    const auto ab = s.sample(x, y, rng);
    REQUIRE(ab.has_value());
    ++hits[*ab];
  }
  for (const auto& [ab, p] : *exact) {
    const double q = to_double(p);
    CHECK(std::abs(hits[ab] - q * draws) <= 4 * std::sqrt(draws * q * (1 - q)) + 1);
  }
  for (const auto& [ab, n] : hits) CHECK(exact->count(ab) == 1);
}

std::vector<int> clause_questions(const TableauBcs& t, ClauseKind kind) {
  std::vector<int> out;
  for (int c = 0; c < static_cast<int>(t.clauses.size()); ++c)
    if (t.clauses[c].kind == kind) out.push_back(c);
  return out;
}

}  // namespace

TEST_CASE("statistical distance on answer pairs") {
  const AnswerPair p{{1}, {1}}, q{{-1}, {1}};
  const PairDistribution half{{p, r(1, 2)}, {q, r(1, 2)}}, point{{p, r(1)}}, other{{q, r(1)}};
  CHECK(statistical_distance(half, half) == 0);
  CHECK(statistical_distance(point, other) == 1);
  CHECK(statistical_distance(half, point) == r(1, 2));
  const PairDistribution wide{{{{1, 1}, {1}}, r(1)}};
  CHECK_THROWS_AS(statistical_distance(point, wide), Error);
}

TEST_CASE("honest marginal of a literal obliviated twice") {
  const auto t = tableau(obliviate(literal_bcs(), 2), 4);
  const auto d = honest_marginal(t, {1}, {t.copy_group(0, 1), t.copy_group(0, 2)});
  // key bit set <=> +1: (+,+) = 3, (-,-) = 0
  CHECK(d.prob(3) == r(1, 2));
  CHECK(d.prob(0) == r(1, 2));
  CHECK(d.prob(1) == 0);
  CHECK(d.prob(2) == 0);
}

TEST_CASE("uniformity test") {
  const auto t = tableau(obliviate(literal_bcs(), 2), 4);
  const auto one = uniformity_test(t, {1}, {t.copy_group(0, 1)});
  CHECK(one.applicable);
  CHECK(one.uniform);
  CHECK(one.distance == 0);

  const auto both = uniformity_test(t, {1}, {t.copy_group(0, 1), t.copy_group(0, 2)});
  CHECK_FALSE(both.applicable);

  CHECK_THROWS_AS(uniformity_test(t, {1}, {t.cell_group(0, 1, 1)}), Error);

  const auto t5 = pzk_transform(tiny_3sat(), 4, 5);
  const auto sampled = uniformity_test(t5, {1, 1, 1}, {t5.copy_group(0, 1), t5.copy_group(1, 3), t5.copy_group(2, 4)},
                                       false, 20000, 3);
  CHECK(sampled.uniform);
  CHECK(sampled.p_value > 1e-4);
}

TEST_CASE("oblivious subsets below k are uniform") {
  for (int k : {2, 3, 5}) {
    const auto t = tableau(obliviate(and_bcs(), k), 4);
    const std::vector<Sign> w{1, 1};
    for (int mask = 1; mask < (1 << (2 * k)); ++mask) {
      std::vector<int> groups;
      for (int g = 0; g < 2 * k; ++g)
        if (mask >> g & 1) groups.push_back(g);
      const auto v = uniformity_test(t, w, groups);
      if (static_cast<int>(groups.size()) < k) {
        CHECK(v.uniform);
        continue;
      }
      CHECK_FALSE(v.applicable);
      // all k copies of one variable pin its product; anything less is free
      bool full = false;
      for (int var = 0; var < 2; ++var) full = full || ((mask >> (var * k)) & ((1 << k) - 1)) == (1 << k) - 1;
      const auto dist = statistical_distance(honest_marginal(t, w, groups), uniform_distribution(t, groups));
      CHECK((dist == 0) == !full);
    }
  }
}

TEST_CASE("simulator matches the honest marginal on randomizer clauses") {
  const auto t = tableau(obliviate(and_bcs(), 2), 4);
  const std::vector<Sign> w{1, 1};
  for (int c : clause_questions(t, ClauseKind::kProduct)) {
    const auto groups = question_groups(t, c);
    CHECK(statistical_distance(sim_tableau_question(t, c), honest_marginal(t, w, groups)) == 0);
  }
  for (int c : clause_questions(t, ClauseKind::kPropagate)) {
    const auto groups = question_groups(t, c);
    const auto dist = statistical_distance(sim_tableau_question(t, c), honest_marginal(t, w, groups));
    // row-1 cells are a point mass under a fixed witness; the simulator draws them from two values
    if (t.clauses[c].p == 1)
      CHECK(dist == r(1, 2));
    else
      CHECK(dist == 0);
  }
}

TEST_CASE("simulator on lone variables") {
  const auto t = tableau(obliviate(and_bcs(), 2), 4);
  const std::vector<Sign> w{1, 1};
  const int nc = static_cast<int>(t.clauses.size());
  for (int g = 0; g < static_cast<int>(t.group_info.size()); ++g) {
    const auto& info = t.group_info[g];
    const bool interior = info.kind == GroupInfo::kCell && info.b >= 2;
    if (info.kind != GroupInfo::kRandomizer && !interior && info.kind != GroupInfo::kCopy) continue;
    const auto sim = sim_tableau_question(t, nc + g);
    CHECK(statistical_distance(sim, honest_marginal(t, w, {g})) == 0);
    if (info.kind == GroupInfo::kRandomizer) CHECK(statistical_distance(sim, uniform_distribution(t, {g})) == 0);
  }
}

TEST_CASE("single-block product clause is sigma") {
  Bcs b;
  b.n = 1;
  b.constraints.push_back(Constraint::circuit({0}, Circuit::var(0)));
  const auto t = tableau(b, 4);
  const int c = clause_questions(t, ClauseKind::kProduct).front();
  const auto sim = sim_tableau_question(t, c);
  // d = 1: the single block is sigma
  CHECK(sim.counts.size() == 1);
  CHECK(statistical_distance(sim, honest_marginal(t, {1}, sim.groups)) == 0);
}

TEST_CASE("simulator marginals agree across clauses (no signaling)") {
  const auto t = tableau(obliviate(and_bcs(), 2), 4);
  std::vector<GroupDistribution> per_clause;
  for (int c = 0; c < static_cast<int>(t.clauses.size()); ++c) per_clause.push_back(sim_tableau_question(t, c));
  for (int g = 0; g < static_cast<int>(t.group_info.size()); ++g) {
    const auto& info = t.group_info[g];
    if (info.kind == GroupInfo::kCopy) continue;
    if (info.kind == GroupInfo::kCell && info.b == 1) continue;
    std::optional<GroupDistribution> first;
    for (int c = 0; c < static_cast<int>(t.clauses.size()); ++c) {
      const auto& groups = per_clause[c].groups;
      if (std::find(groups.begin(), groups.end(), g) == groups.end()) continue;
      const auto m = marginalize(t, per_clause[c], {g});
      if (!first)
        first = m;
      else
        CHECK(statistical_distance(*first, m) == 0);
    }
  }
}

TEST_CASE("honest tableau sampler wins") {
  auto t = std::make_shared<const TableauBcs>(pzk_transform(literal_bcs(), 4, 5));
  const auto g = cv_game(t->bcs);
  const HonestTableauSampler honest(t, {1});
  CHECK(exact_value(g, honest) == 1);
  Rng rng(1);
  for (int round = 0; round < 2000; ++round) {
    const auto [x, y] = g.sample_pair(rng);
    const auto ab = honest.sample(x, y, rng);
    REQUIRE(ab.has_value());
    CHECK(g.accepts(x, y, ab->first, ab->second));
  }
  check_matches_exact(honest, 0, 0, 20000, 9);
  CHECK_THROWS_AS(HonestTableauSampler(t, {-1}), Error);
}

TEST_CASE("tableau simulator covers same-question and clause-variable pairs") {
  auto t = std::make_shared<const TableauBcs>(tableau(obliviate(and_bcs(), 2), 4));
  const TableauSimulator sim(t);
  const int nc = static_cast<int>(t->clauses.size());
  const int prod = clause_questions(*t, ClauseKind::kProduct).front();
  const auto d = sim.exact_distribution(prod, prod);
  REQUIRE(d.has_value());
  for (const auto& [ab, p] : *d) CHECK(ab.first == ab.second);

  // mixed pair on a one-block tableau keeps the support small
  auto t1 = std::make_shared<const TableauBcs>(tableau(literal_bcs(), 4));
  const TableauSimulator sim1(t1);
  const int prod1 = clause_questions(*t1, ClauseKind::kProduct).front();
  const int g = question_groups(*t1, prod1).front();
  const int nc1 = static_cast<int>(t1->clauses.size());
  const auto mixed = sim1.exact_distribution(prod1, nc1 + g);
  REQUIRE(mixed.has_value());
  const int width = static_cast<int>(mixed->begin()->first.second.size());
  for (const auto& [ab, p] : *mixed) CHECK(Answer(ab.first.begin(), ab.first.begin() + width) == ab.second);

  Rng rng(0);
  CHECK_FALSE(sim.sample(0, prod, rng).has_value());
  int rg = 0;
  while (t->group_info[rg].kind != GroupInfo::kRandomizer) ++rg;
  check_matches_exact(sim, nc + rg, nc + rg, 30000, 4);
}

TEST_CASE("sim_cv is the pushforward of its base") {
  const auto pc = perfect_case();
  const auto ms = magic_square();
  const auto cc = cc_game(ms);
  const auto cv = cv_game(ms);
  auto base = std::make_shared<const CorrelationSampler>(CorrelationSampler::from_strategy(cc, magic_square_cc_strategy()));
  const auto sim = sim_cv(base, ms);
  const int m = ms.m();
  for (int i = 0; i < m; ++i) {
    for (int pos = 0; pos < static_cast<int>(ms.constraints[i].scope.size()); ++pos) {
      const int k = ms.constraints[i].scope[pos];
      PairDistribution want;
      for (int j = 0; j < m; ++j) {
        const auto bij = base->exact_distribution(i, j);
        REQUIRE(bij.has_value());
        for (const auto& [ab, p] : *bij) want[{ab.first, Answer{ab.first[pos]}}] += p / m;
      }
      const auto got = sim->exact_distribution(i, m + k);
      REQUIRE(got.has_value());
      CHECK(statistical_distance(*got, want) == 0);
    }
  }
  for (int x = 0; x < static_cast<int>(cv.x_set().size()); ++x) {
    const auto d = sim->exact_distribution(x, x);
    REQUIRE(d.has_value());
    for (const auto& [ab, p] : *d) CHECK(ab.first == ab.second);
  }
  CHECK(to_double(exact_value(cv, *sim)) == doctest::Approx(1.0).epsilon(1e-9));

  auto exact_base =
      std::make_shared<const CorrelationSampler>(CorrelationSampler::from_deterministic(pc.cc, pc.d));
  CHECK(exact_value(pc.cv, *sim_cv(exact_base, pc.b)) == 1);
}

TEST_CASE("sim_cv Monte Carlo on the magic square") {
  const auto ms = magic_square();
  const auto cv = cv_game(ms);
  auto base = std::make_shared<const CorrelationSampler>(
      CorrelationSampler::from_strategy(cc_game(ms), magic_square_cc_strategy()));
  const auto sim = sim_cv(base, ms);
  Rng rng(77);
  int won = 0;
  const int rounds = 100000;
  for (int t = 0; t < rounds; ++t) {
    const auto [x, y] = cv.sample_pair(rng);
    const auto ab = sim->sample(x, y, rng);
    won += ab && cv.accepts(x, y, ab->first, ab->second);
  }
  CHECK(won == rounds);
  check_matches_exact(*sim, 0, 6 + 1, 50000, 5);
}

TEST_CASE("sim_oracularized") {
  const auto pc = perfect_case();
  const auto og = oracularize(pc.cv);
  auto base = std::make_shared<const CorrelationSampler>(CorrelationSampler::from_deterministic(pc.cv, perfect_classical_strategy(pc.cv).value()));
  const auto sim = sim_oracularized(base, og);
  CHECK(exact_value(og, *sim) == 1);

  const int ns = static_cast<int>(pc.cv.mu().size());
  for (int s = 0; s < ns; ++s) {
    const auto& e = pc.cv.mu()[s];
    const auto same = sim->exact_distribution(s, s);
    REQUIRE(same.has_value());
    const auto want = base->exact_distribution(e.x, e.y);
    PairDistribution dup;
    for (const auto& [ab, p] : *want) dup[{cat(ab.first, ab.second), cat(ab.first, ab.second)}] += p;
    CHECK(statistical_distance(*same, dup) == 0);

    // role A with the oracle: first coordinates agree
    const auto mixed = sim->exact_distribution(ns + e.x, s);
    REQUIRE(mixed.has_value());
    for (const auto& [ab, p] : *mixed)
      CHECK(Answer(ab.second.begin(), ab.second.begin() + ab.first.size()) == ab.first);
  }
  // an uncorrelated pair is answered by independent calls
  Rng rng(3);
  CHECK(sim->sample(ns, ns + 1, rng).has_value());
}

TEST_CASE("sim_parallel is a product") {
  const auto g = cv_game(magic_square());
  const auto best = classical_value_with_strategy(g);
  auto base = std::make_shared<const CorrelationSampler>(CorrelationSampler::from_deterministic(g, best.strategy));
  CHECK(sim_parallel(base, g) == base);

  const auto g2 = parallel_repeat(g, 2);
  const auto sim = sim_parallel(base, g2);
  const int n = static_cast<int>(g.x_set().size());
  for (int t = 0; t < 30; ++t) {
    const auto& e1 = g.mu()[t % g.mu().size()];
    const auto& e2 = g.mu()[(7 * t + 3) % g.mu().size()];
    const auto d1 = base->exact_distribution(e1.x, e1.y), d2 = base->exact_distribution(e2.x, e2.y);
    REQUIRE(d1.has_value());
    REQUIRE(d2.has_value());
    PairDistribution want;
    for (const auto& [ab1, p1] : *d1)
      for (const auto& [ab2, p2] : *d2)
        want[{cat(ab1.first, ab2.first), cat(ab1.second, ab2.second)}] += p1 * p2;
    const auto got = sim->exact_distribution(e1.x + n * e2.x, e1.y + n * e2.y);
    REQUIRE(got.has_value());
    CHECK(statistical_distance(*got, want) == 0);
  }
  CHECK(exact_value(g2, *sim) == best.value * best.value);
}

TEST_CASE("value one survives every combinator") {
  const auto pc = perfect_case();
  auto cc_base = std::make_shared<const CorrelationSampler>(CorrelationSampler::from_deterministic(pc.cc, pc.d));
  auto cv_sim = sim_cv(cc_base, pc.b);
  CHECK(exact_value(pc.cv, *cv_sim) == 1);
  const auto og = oracularize(pc.cv);
  auto or_sim = sim_oracularized(cv_sim, og);
  CHECK(exact_value(og, *or_sim) == 1);
  const auto g2 = parallel_repeat(pc.cv, 2);
  CHECK(exact_value(g2, *sim_parallel(cv_sim, g2)) == 1);
}

TEST_CASE("strategy sampler") {
  const auto g = cv_game(magic_square());
  const StrategySampler s(magic_square_strategy());
  check_matches_exact(s, 0, 6, 100000, 8);
  // off-support pair: still measured
  CHECK(s.exact_distribution(0, 1).has_value());
  CHECK(to_double(exact_value(g, s)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("dishonest probe") {
  const auto t = pzk_transform(literal_bcs(), 4, 5);
  const auto pins = clause_questions(t, ClauseKind::kPin);
  CHECK_THROWS_AS(dishonest_probe(t, {1}, {pins}), Error);
  ProbeOptions below;
  below.allow_below_threshold = true;
  const auto rep = dishonest_probe(t, {1}, {pins}, below);
  CHECK_FALSE(rep.violations.empty());
  CHECK(rep.violations.front().distance == r(1, 2));

  const auto t9 = pzk_transform(literal_bcs(), 8, 9);
  const auto ok = dishonest_probe(t9, {1}, {clause_questions(t9, ClauseKind::kPin)});
  CHECK(ok.violations.empty());
  CHECK(ok.subsets_checked > 0);
}
