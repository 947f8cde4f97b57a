#include <algorithm>
#include <numeric>

#include "zkgame/error.hpp"
#include "zkgame/game.hpp"

namespace zkgame {
namespace {

// One side's questions enumerated, the other best-responding. `flip`
// swaps the roles of Alice and Bob relative to the game.
struct Search {
  const NonlocalGame& g;
  bool flip;
  std::vector<int> enum_qs, resp_qs;                 // question ids
  std::vector<const std::vector<Answer>*> enum_ans, resp_ans;
  struct Pair {
    int e, r;  // positions in enum_qs / resp_qs
    std::int64_t w;
    std::vector<char> win;  // [ae * |B(r)| + br]
    std::vector<std::int64_t> opt;
  };
  std::vector<Pair> pairs;
  std::vector<std::vector<int>> pairs_of_e;
  std::vector<std::vector<std::int64_t>> score;  // [r][br]
  std::vector<int> choice, best_choice;
  std::int64_t best = -1;
  std::int64_t scale = 1;

  bool accepts(int e, int r, const Answer& ae, const Answer& br) const {
    return flip ? g.accepts(resp_qs[r], enum_qs[e], br, ae) : g.accepts(enum_qs[e], resp_qs[r], ae, br);
  }

  std::int64_t bound() const {
    std::int64_t total = 0;
    for (const auto& row : score) total += *std::max_element(row.begin(), row.end());
    return total;
  }

  void assign(int e, int ae, int sign) {
    for (int pi : pairs_of_e[e]) {
      auto& p = pairs[pi];
      const int nb = static_cast<int>(resp_ans[p.r]->size());
      for (int br = 0; br < nb; ++br) {
        score[p.r][br] += sign * ((p.win[ae * nb + br] ? p.w : 0) - p.opt[br]);
      }
    }
  }

  void dfs(std::size_t depth) {
    if (bound() <= best) return;
    if (depth == enum_qs.size()) {
      best = bound();
      best_choice = choice;
      return;
    }
    const int na = static_cast<int>(enum_ans[depth]->size());
    for (int ae = 0; ae < na; ++ae) {
      choice[depth] = ae;
      assign(static_cast<int>(depth), ae, +1);
      dfs(depth + 1);
      assign(static_cast<int>(depth), ae, -1);
    }
  }
};

const std::vector<Answer>& explicit_answers(const Question& q) {
  if (!q.answers) throw Error(Errc::kTooLarge, "answer set of " + q.label + " is implicit");
  if (q.answers->empty()) throw Error(Errc::kInvalidArgument, "empty answer set for " + q.label);
  return *q.answers;
}

Answer default_answer(const Question& q) {
  if (q.answers && !q.answers->empty()) return q.answers->front();
  return Answer(q.answer_bits, 1);
}

}  // namespace

ClassicalResult classical_value_with_strategy(const NonlocalGame& g, double guard) {
  std::vector<int> xs, ys;
  for (const auto& e : g.mu()) {
    xs.push_back(e.x);
    ys.push_back(e.y);
  }
  for (auto* v : {&xs, &ys}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }
  auto count = [](const std::vector<Question>& qs, const std::vector<int>& ids) {
    double prod = 1;
    for (int q : ids) prod *= static_cast<double>(explicit_answers(qs[q]).size());
    return prod;
  };
  const double na = count(g.x_set(), xs);
  const double nb = count(g.y_set(), ys);
  const bool flip = nb < na;
  if (std::min(na, nb) > guard) {
    throw Error(Errc::kTooLarge, "deterministic strategy space exceeds the guard");
  }

  Search s{g, flip, {}, {}, {}, {}, {}, {}, {}, {}, {}, -1, 1};
  s.enum_qs = flip ? ys : xs;
  s.resp_qs = flip ? xs : ys;
  const auto& eq = flip ? g.y_set() : g.x_set();
  const auto& rq = flip ? g.x_set() : g.y_set();
  for (int q : s.enum_qs) s.enum_ans.push_back(&eq[q].answers.value());
  for (int q : s.resp_qs) s.resp_ans.push_back(&rq[q].answers.value());

  BigInt den = 1;
  for (const auto& e : g.mu()) {
    den = den / boost::multiprecision::gcd(den, denominator(e.p)) * denominator(e.p);
  }
  if (den > BigInt(std::int64_t{1} << 40)) {
    throw Error(Errc::kTooLarge, "distribution denominators too large for exact search");
  }
  s.scale = den.convert_to<std::int64_t>();

  // Most-constrained questions first tighten the bound early.
  std::vector<int> degree(s.enum_qs.size(), 0);
  auto pos = [](const std::vector<int>& v, int q) {
    return static_cast<int>(std::lower_bound(v.begin(), v.end(), q) - v.begin());
  };
  for (const auto& e : g.mu()) ++degree[pos(s.enum_qs, flip ? e.y : e.x)];
  std::vector<int> order(s.enum_qs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return degree[a] > degree[b]; });
  std::vector<int> sorted_enum;
  std::vector<const std::vector<Answer>*> sorted_ans;
  for (int o : order) {
    sorted_enum.push_back(s.enum_qs[o]);
    sorted_ans.push_back(s.enum_ans[o]);
  }
  std::vector<int> enum_pos(s.enum_qs.size());
  for (std::size_t k = 0; k < order.size(); ++k) enum_pos[order[k]] = static_cast<int>(k);
  s.enum_qs = sorted_enum;
  s.enum_ans = sorted_ans;

  s.score.resize(s.resp_qs.size());
  for (std::size_t r = 0; r < s.resp_qs.size(); ++r) s.score[r].assign(s.resp_ans[r]->size(), 0);
  s.pairs_of_e.resize(s.enum_qs.size());
  for (const auto& e : g.mu()) {
    Search::Pair p;
    p.e = enum_pos[pos(flip ? ys : xs, flip ? e.y : e.x)];
    p.r = pos(s.resp_qs, flip ? e.x : e.y);
    p.w = (e.p * s.scale).convert_to<std::int64_t>();
    const auto& as = *s.enum_ans[p.e];
    const auto& bs = *s.resp_ans[p.r];
    p.win.resize(as.size() * bs.size());
    p.opt.assign(bs.size(), 0);
    for (std::size_t ae = 0; ae < as.size(); ++ae) {
      for (std::size_t br = 0; br < bs.size(); ++br) {
        const bool w = s.accepts(p.e, p.r, as[ae], bs[br]);
        p.win[ae * bs.size() + br] = w;
        if (w) p.opt[br] = p.w;
      }
    }
    for (std::size_t br = 0; br < bs.size(); ++br) s.score[p.r][br] += p.opt[br];
    s.pairs_of_e[p.e].push_back(static_cast<int>(s.pairs.size()));
    s.pairs.push_back(std::move(p));
  }
  s.choice.assign(s.enum_qs.size(), 0);
  s.dfs(0);

  // Rebuild the optimal strategy: recorded choices plus best responses.
  DeterministicStrategy strat;
  for (const auto& q : g.x_set()) strat.alice.push_back(default_answer(q));
  for (const auto& q : g.y_set()) strat.bob.push_back(default_answer(q));
  auto& enum_side = flip ? strat.bob : strat.alice;
  auto& resp_side = flip ? strat.alice : strat.bob;
  for (std::size_t e = 0; e < s.enum_qs.size(); ++e) {
    enum_side[s.enum_qs[e]] = (*s.enum_ans[e])[s.best_choice[e]];
  }
  for (std::size_t r = 0; r < s.resp_qs.size(); ++r) {
    const auto& bs = *s.resp_ans[r];
    std::vector<std::int64_t> tally(bs.size(), 0);
    for (const auto& p : s.pairs) {
      if (p.r != static_cast<int>(r)) continue;
      const int ae = s.best_choice[p.e];
      for (std::size_t br = 0; br < bs.size(); ++br) {
        if (p.win[ae * bs.size() + br]) tally[br] += p.w;
      }
    }
    resp_side[s.resp_qs[r]] = bs[std::max_element(tally.begin(), tally.end()) - tally.begin()];
  }
  return {Rational(BigInt(s.best), BigInt(s.scale)), std::move(strat)};
}

Rational classical_value(const NonlocalGame& g, double guard) {
  return classical_value_with_strategy(g, guard).value;
}

std::optional<DeterministicStrategy> perfect_classical_strategy(const NonlocalGame& g) {
  // Nodes 0..|X|-1 are Alice's questions, the rest Bob's.
  const int nx = static_cast<int>(g.x_set().size());
  const int total = nx + static_cast<int>(g.y_set().size());
  auto question = [&](int node) -> const Question& {
    return node < nx ? g.x_set()[node] : g.y_set()[node - nx];
  };
  std::vector<std::vector<int>> nbrs(total);
  std::vector<char> used(total, 0);
  for (const auto& e : g.mu()) {
    nbrs[e.x].push_back(nx + e.y);
    nbrs[nx + e.y].push_back(e.x);
    used[e.x] = used[nx + e.y] = 1;
  }
  std::vector<std::vector<char>> alive(total);
  std::vector<int> live_count(total, 0);
  for (int v = 0; v < total; ++v) {
    if (!used[v]) continue;
    alive[v].assign(explicit_answers(question(v)).size(), 1);
    live_count[v] = static_cast<int>(alive[v].size());
  }
  auto ok = [&](int u, int au, int v, int av) {
    const auto& a = (*question(u).answers)[au];
    const auto& b = (*question(v).answers)[av];
    return u < nx ? g.accepts(u, v - nx, a, b) : g.accepts(v, u - nx, b, a);
  };
  std::vector<int> value(total, -1);
  std::vector<std::pair<int, int>> trail;

  std::function<bool()> solve = [&]() -> bool {
    int pick = -1;
    for (int v = 0; v < total; ++v) {
      if (used[v] && value[v] < 0 && (pick < 0 || live_count[v] < live_count[pick])) pick = v;
    }
    if (pick < 0) return true;
    for (std::size_t a = 0; a < alive[pick].size(); ++a) {
      if (!alive[pick][a]) continue;
      value[pick] = static_cast<int>(a);
      const std::size_t mark = trail.size();
      bool dead = false;
      for (int v : nbrs[pick]) {
        if (value[v] >= 0) {
          dead = dead || !ok(pick, static_cast<int>(a), v, value[v]);
          continue;
        }
        for (std::size_t b = 0; b < alive[v].size() && !dead; ++b) {
          if (alive[v][b] && !ok(pick, static_cast<int>(a), v, static_cast<int>(b))) {
            alive[v][b] = 0;
            --live_count[v];
            trail.push_back({v, static_cast<int>(b)});
          }
        }
        if (live_count[v] == 0) dead = true;
        if (dead) break;
      }
      if (!dead && solve()) return true;
      while (trail.size() > mark) {
        auto [v, b] = trail.back();
        trail.pop_back();
        alive[v][b] = 1;
        ++live_count[v];
      }
      value[pick] = -1;
    }
    return false;
  };
  if (!solve()) return std::nullopt;
  DeterministicStrategy s;
  for (int v = 0; v < total; ++v) {
    const auto& q = question(v);
    Answer a = used[v] ? (*q.answers)[value[v]] : default_answer(q);
    (v < nx ? s.alice : s.bob).push_back(std::move(a));
  }
  return s;
}

}  // namespace zkgame
