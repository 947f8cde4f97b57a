#include "zkgame/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "zkgame/error.hpp"

namespace zkgame {
namespace {

constexpr int kRoleTagBits = 2;
constexpr std::size_t kMaxListedAnswers = std::size_t{1} << 16;

Answer concat(const Answer& a, const Answer& b) {
  Answer out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::string tuple_label(const std::vector<Question>& qs, const std::vector<int>& parts) {
  std::string s = "(";
  for (std::size_t t = 0; t < parts.size(); ++t) s += (t ? "," : "") + qs[parts[t]].label;
  return s + ")";
}

}  // namespace

NonlocalGame oracularize(const NonlocalGame& g, const OracularizeOptions& opts) {
  auto base = std::make_shared<const NonlocalGame>(g);
  const auto& xs = g.x_set();
  const auto& ys = g.y_set();
  const int ns = static_cast<int>(g.mu().size());
  const int nx = static_cast<int>(xs.size());

  std::vector<Question> qs;
  for (const auto& e : g.mu()) {
    const auto& qx = xs[e.x];
    const auto& qy = ys[e.y];
    std::optional<std::vector<Answer>> answers;
    if (qx.answers && qy.answers && qx.answers->size() * qy.answers->size() <= kMaxListedAnswers) {
      std::vector<Answer> acc;
      for (const auto& a : *qx.answers) {
        for (const auto& b : *qy.answers) {
          if (g.accepts(e.x, e.y, a, b)) acc.push_back(concat(a, b));
        }
      }
      if (acc.empty()) {
        for (const auto& a : *qx.answers) {
          for (const auto& b : *qy.answers) acc.push_back(concat(a, b));
        }
      }
      answers = std::move(acc);
    }
    qs.push_back({"O(" + qx.label + "," + qy.label + ")", OracleQ{e.x, e.y},
                  kRoleTagBits + qx.question_bits + qy.question_bits,
                  qx.answer_bits + qy.answer_bits, std::move(answers)});
  }
  for (int x = 0; x < nx; ++x) {
    qs.push_back({"A:" + xs[x].label, RoleQ{0, x}, kRoleTagBits + xs[x].question_bits,
                  xs[x].answer_bits, xs[x].answers});
  }
  for (int y = 0; y < static_cast<int>(ys.size()); ++y) {
    qs.push_back({"B:" + ys[y].label, RoleQ{1, y}, kRoleTagBits + ys[y].question_bits,
                  ys[y].answer_bits, ys[y].answers});
  }

  const int edges = opts.include_ab_edge ? 6 : 5;
  const Rational w = make_rational(1, edges);
  std::vector<MuEntry> mu;
  for (int s = 0; s < ns; ++s) {
    const auto& e = g.mu()[s];
    const Rational p = w * e.p;
    const int a = ns + e.x;
    const int b = ns + nx + e.y;
    mu.push_back({s, s, p});  // O-O
    mu.push_back({a, s, p});  // O-A
    mu.push_back({b, s, p});  // O-B
    mu.push_back({a, a, p});  // A-A
    mu.push_back({b, b, p});  // B-B
    if (opts.include_ab_edge) mu.push_back({a, b, p});
  }

  Predicate pred = [base, ns, nx](int qa, int qb, const Answer& a, const Answer& b) {
    const auto& G = *base;
    enum Kind { kO, kA, kB };
    auto kind = [&](int q) { return q < ns ? kO : (q < ns + nx ? kA : kB); };
    auto width = [&](int q) {
      if (q < ns) {
        const auto& e = G.mu()[q];
        return G.x_set()[e.x].answer_bits + G.y_set()[e.y].answer_bits;
      }
      return q < ns + nx ? G.x_set()[q - ns].answer_bits : G.y_set()[q - ns - nx].answer_bits;
    };
    if (static_cast<int>(a.size()) != width(qa) || static_cast<int>(b.size()) != width(qb)) {
      return false;
    }
    // Splits an oracle answer and checks it against the base predicate.
    auto oracle_ok = [&](int q, const Answer& ans, Answer* ax, Answer* by) {
      const auto& e = G.mu()[q];
      const auto wa = G.x_set()[e.x].answer_bits;
      *ax = Answer(ans.begin(), ans.begin() + wa);
      *by = Answer(ans.begin() + wa, ans.end());
      return G.accepts(e.x, e.y, *ax, *by);
    };
    const Kind ka = kind(qa), kb = kind(qb);
    if (ka == kO && kb == kO) {
      Answer ax, by, ax2, by2;
      if (!oracle_ok(qa, a, &ax, &by) || !oracle_ok(qb, b, &ax2, &by2)) return false;
      return qa != qb || a == b;
    }
    if (ka == kO || kb == kO) {
      const int qo = ka == kO ? qa : qb;
      const int qi = ka == kO ? qb : qa;
      const Answer& ao = ka == kO ? a : b;
      const Answer& ai = ka == kO ? b : a;
      Answer ax, by;
      if (!oracle_ok(qo, ao, &ax, &by)) return false;
      const auto& e = G.mu()[qo];
      if (kind(qi) == kA) return qi - ns != e.x || ai == ax;
      return qi - ns - nx != e.y || ai == by;
    }
    if (ka == kb) return qa != qb || a == b;
    // A-B (only in the support with include_ab_edge).
    const int x = ka == kA ? qa - ns : qb - ns;
    const int y = ka == kA ? qb - ns - nx : qa - ns - nx;
    return ka == kA ? G.accepts(x, y, a, b) : G.accepts(x, y, b, a);
  };

  NonlocalGame out("oracularize(" + g.name() + ")", qs, qs, std::move(mu), std::move(pred));
  out.kind = GameKind::kOracularized;
  out.base = base;
  out.bcs = g.bcs;
  out.oracle_edges = edges;
  return out;
}

NonlocalGame parallel_repeat(const NonlocalGame& g, int k, double guard) {
  if (k < 1) throw Error(Errc::kBadParams, "repetition count must be at least 1");
  if (k == 1) return g;
  const auto& xs = g.x_set();
  const auto& ys = g.y_set();
  const double support = std::pow(static_cast<double>(g.mu().size()), k);
  const double qx = std::pow(static_cast<double>(xs.size()), k);
  const double qy = std::pow(static_cast<double>(ys.size()), k);
  if (support > guard || qx > guard || qy > guard) {
    throw Error(Errc::kTooLarge, "repeated game exceeds exact-mode size; use RepeatedGame");
  }
  auto base = std::make_shared<const NonlocalGame>(g);

  auto tuples = [k](int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(k, 0);
    const long total = std::lround(std::pow(n, k));
    for (long id = 0; id < total; ++id) {
      long r = id;
      for (int t = 0; t < k; ++t) {
        cur[t] = static_cast<int>(r % n);
        r /= n;
      }
      out.push_back(cur);
    }
    return out;
  };
  auto product_questions = [&](const std::vector<Question>& qs) {
    std::vector<Question> out;
    for (const auto& parts : tuples(static_cast<int>(qs.size()))) {
      Question q{tuple_label(qs, parts), ProductQ{parts}, 0, 0, std::nullopt};
      std::size_t listed = 1;
      bool all_explicit = true;
      for (int p : parts) {
        q.question_bits += qs[p].question_bits;
        q.answer_bits += qs[p].answer_bits;
        all_explicit = all_explicit && qs[p].answers.has_value();
        if (all_explicit) listed *= qs[p].answers->size();
      }
      if (all_explicit && listed <= kMaxListedAnswers) {
        std::vector<Answer> acc{Answer{}};
        for (int p : parts) {
          std::vector<Answer> next;
          for (const auto& prefix : acc) {
            for (const auto& a : *qs[p].answers) next.push_back(concat(prefix, a));
          }
          acc = std::move(next);
        }
        q.answers = std::move(acc);
      }
      out.push_back(std::move(q));
    }
    return out;
  };
  auto x_out = product_questions(xs);
  auto y_out = product_questions(ys);

  const int nx = static_cast<int>(xs.size());
  const int ny = static_cast<int>(ys.size());
  const int ns = static_cast<int>(g.mu().size());
  std::vector<MuEntry> mu;
  for (const auto& parts : tuples(ns)) {
    long xid = 0, yid = 0, px = 1, py = 1;
    Rational p = 1;
    for (int t = 0; t < k; ++t) {
      const auto& e = g.mu()[parts[t]];
      xid += e.x * px;
      yid += e.y * py;
      px *= nx;
      py *= ny;
      p *= e.p;
    }
    mu.push_back({static_cast<int>(xid), static_cast<int>(yid), p});
  }

  auto x_parts = std::make_shared<std::vector<std::vector<int>>>(tuples(nx));
  auto y_parts = std::make_shared<std::vector<std::vector<int>>>(tuples(ny));
  Predicate pred = [base, x_parts, y_parts, k](int x, int y, const Answer& a, const Answer& b) {
    const auto& px = (*x_parts)[x];
    const auto& py = (*y_parts)[y];
    std::size_t oa = 0, ob = 0;
    for (int t = 0; t < k; ++t) {
      const auto wa = static_cast<std::size_t>(base->x_set()[px[t]].answer_bits);
      const auto wb = static_cast<std::size_t>(base->y_set()[py[t]].answer_bits);
      if (oa + wa > a.size() || ob + wb > b.size()) return false;
      const Answer at(a.begin() + oa, a.begin() + oa + wa);
      const Answer bt(b.begin() + ob, b.begin() + ob + wb);
      if (!base->accepts(px[t], py[t], at, bt)) return false;
      oa += wa;
      ob += wb;
    }
    return oa == a.size() && ob == b.size();
  };
  NonlocalGame out("repeat" + std::to_string(k) + "(" + g.name() + ")", std::move(x_out),
                   std::move(y_out), std::move(mu), std::move(pred));
  out.kind = GameKind::kRepeated;
  out.base = base;
  out.bcs = g.bcs;
  out.repeat_k = k;
  return out;
}

RepeatedGame::RepeatedGame(std::shared_ptr<const NonlocalGame> base, int k)
    : base_(std::move(base)), k_(k) {
  if (k < 1) throw Error(Errc::kBadParams, "repetition count must be at least 1");
}

std::pair<std::vector<int>, std::vector<int>> RepeatedGame::sample(Rng& rng) const {
  std::vector<int> xs, ys;
  for (int t = 0; t < k_; ++t) {
    const auto [x, y] = base_->sample_pair(rng);
    xs.push_back(x);
    ys.push_back(y);
  }
  return {xs, ys};
}

bool RepeatedGame::accepts(const std::vector<int>& xs, const std::vector<int>& ys,
                           const std::vector<Answer>& as, const std::vector<Answer>& bs) const {
  for (int t = 0; t < k_; ++t) {
    if (!base_->accepts(xs[t], ys[t], as[t], bs[t])) return false;
  }
  return true;
}

int max_question_bits(const NonlocalGame& g) {
  int m = 0;
  for (const auto* side : {&g.x_set(), &g.y_set()}) {
    for (const auto& q : *side) m = std::max(m, q.question_bits);
  }
  return m;
}

int max_answer_bits(const NonlocalGame& g) {
  int m = 0;
  for (const auto* side : {&g.x_set(), &g.y_set()}) {
    for (const auto& q : *side) m = std::max(m, q.answer_bits);
  }
  return m;
}

TransformReport report(const NonlocalGame& before, const NonlocalGame& after,
                       const std::string& pass, nlohmann::json params) {
  TransformReport r;
  r.pass = pass;
  r.params = std::move(params);
  r.x_before = before.x_set().size();
  r.y_before = before.y_set().size();
  r.x_after = after.x_set().size();
  r.y_after = after.y_set().size();
  r.question_bits_before = max_question_bits(before);
  r.question_bits_after = max_question_bits(after);
  r.answer_bits_before = max_answer_bits(before);
  r.answer_bits_after = max_answer_bits(after);
  r.support_before = before.mu().size();
  r.support_after = after.mu().size();
  return r;
}

nlohmann::json to_json(const TransformReport& r) {
  return {{"pass", r.pass},
          {"params", r.params},
          {"before", {{"x", r.x_before}, {"y", r.y_before}, {"question_bits", r.question_bits_before},
                      {"answer_bits", r.answer_bits_before}, {"support", r.support_before}}},
          {"after", {{"x", r.x_after}, {"y", r.y_after}, {"question_bits", r.question_bits_after},
                     {"answer_bits", r.answer_bits_after}, {"support", r.support_after}}}};
}

}  // namespace zkgame
