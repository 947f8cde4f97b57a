#include "zkgame/zk_sim.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "zkgame/error.hpp"

namespace zkgame {
namespace {

Answer concat(const Answer& a, const Answer& b) {
  Answer out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

template <class T>
std::size_t pick(const std::vector<T>& terms, Rng& rng) {
  double total = 0;
  for (const auto& t : terms) total += to_double(t.w);
  double u = rng.uniform01() * total;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    u -= to_double(terms[i].w);
    if (u < 0) return i;
  }
  return terms.size() - 1;
}

// Mixture of base calls followed by a projection. Joint plans feed one
// call to both provers; otherwise each side runs its own mixture.
struct JointTerm {
  Rational w;
  int x, y;
  std::function<AnswerPair(const Answer&, const Answer&)> f;
};
struct SideTerm {
  Rational w;
  int x, y;
  std::function<Answer(const Answer&, const Answer&)> f;
};
struct Plan {
  bool declined = false;
  std::vector<JointTerm> joint;
  std::vector<SideTerm> left, right;
};

class PlanSampler : public AnswerSampler {
 public:
  explicit PlanSampler(std::shared_ptr<const AnswerSampler> base) : base_(std::move(base)) {}

  std::optional<AnswerPair> sample(int x, int y, Rng& rng) const override {
    const Plan p = plan(x, y);
    if (p.declined) return std::nullopt;
    if (!p.joint.empty()) {
      const auto& t = p.joint[pick(p.joint, rng)];
      const auto r = base_->sample(t.x, t.y, rng);
      if (!r) return std::nullopt;
      return t.f(r->first, r->second);
    }
    const auto& l = p.left[pick(p.left, rng)];
    const auto rl = base_->sample(l.x, l.y, rng);
    const auto& r = p.right[pick(p.right, rng)];
    const auto rr = base_->sample(r.x, r.y, rng);
    if (!rl || !rr) return std::nullopt;
    return AnswerPair{l.f(rl->first, rl->second), r.f(rr->first, rr->second)};
  }

  std::optional<PairDistribution> exact_distribution(int x, int y) const override {
    const Plan p = plan(x, y);
    if (p.declined) return std::nullopt;
    PairDistribution out;
    if (!p.joint.empty()) {
      for (const auto& t : p.joint) {
        const auto d = base_->exact_distribution(t.x, t.y);
        if (!d) return std::nullopt;
        for (const auto& [ab, q] : *d) out[t.f(ab.first, ab.second)] += t.w * q;
      }
      return out;
    }
    auto side = [&](const std::vector<SideTerm>& terms) -> std::optional<std::map<Answer, Rational>> {
      std::map<Answer, Rational> m;
      for (const auto& t : terms) {
        const auto d = base_->exact_distribution(t.x, t.y);
        if (!d) return std::nullopt;
        for (const auto& [ab, q] : *d) m[t.f(ab.first, ab.second)] += t.w * q;
      }
      return m;
    };
    const auto l = side(p.left), r = side(p.right);
    if (!l || !r) return std::nullopt;
    for (const auto& [a, pa] : *l) {
      for (const auto& [b, pb] : *r) out[{a, b}] += pa * pb;
    }
    return out;
  }

 protected:
  virtual Plan plan(int x, int y) const = 0;
  std::shared_ptr<const AnswerSampler> base_;
};

Answer restrict_answer(const std::vector<int>& scope, const Answer& a, const std::vector<int>& vars) {
  Answer out;
  for (int v : vars) {
    const auto it = std::find(scope.begin(), scope.end(), v);
    out.push_back(a[it - scope.begin()]);
  }
  return out;
}

bool contains_all(const std::vector<int>& scope, const std::vector<int>& vars) {
  return std::all_of(vars.begin(), vars.end(), [&](int v) {
    return std::find(scope.begin(), scope.end(), v) != scope.end();
  });
}

class CvSim : public PlanSampler {
 public:
  CvSim(std::shared_ptr<const AnswerSampler> base, const Bcs& b)
      : PlanSampler(std::move(base)), b_(b), groups_(effective_groups(b)) {
    for (const auto& g : groups_) {
      int owner = -1;
      for (int i = 0; i < b.m(); ++i) {
        if (contains_all(b.constraints[i].scope, g.vars)) {
          owner = i;
          break;
        }
      }
      owner_.push_back(owner);
    }
  }

 protected:
  Plan plan(int x, int y) const override {
    const int m = b_.m();
    const Rational each = make_rational(1, m);
    Plan p;
    const bool cx = x < m, cy = y < m;
    auto scope = [&](int i) -> const std::vector<int>& { return b_.constraints[i].scope; };
    auto vars = [&](int q) -> const std::vector<int>& { return groups_[q - m].vars; };
    auto owner = [&](int q) { return owner_[q - m]; };

    if (cx && cy) {
      if (x == y) {
        for (int j = 0; j < m; ++j) {
          p.joint.push_back({each, x, j, [](const Answer& a, const Answer&) { return AnswerPair{a, a}; }});
        }
      } else {
        p.joint.push_back({1, x, y, [](const Answer& a, const Answer& b) { return AnswerPair{a, b}; }});
      }
      return p;
    }
    if (cx || cy) {
      const int i = cx ? x : y;
      const int k = cx ? y : x;
      const auto& sc = scope(i);
      const auto& vk = vars(k);
      if (contains_all(sc, vk)) {
        for (int j = 0; j < m; ++j) {
          if (cx) {
            p.joint.push_back({each, i, j, [sc, vk](const Answer& a, const Answer&) {
                                 return AnswerPair{a, restrict_answer(sc, a, vk)};
                               }});
          } else {
            p.joint.push_back({each, j, i, [sc, vk](const Answer&, const Answer& b) {
                                 return AnswerPair{restrict_answer(sc, b, vk), b};
                               }});
          }
        }
        return p;
      }
      const int o = owner(k);
      if (o < 0) return Plan{true, {}, {}, {}};
      const auto& so = scope(o);
      if (cx) {
        p.joint.push_back({1, i, o, [so, vk](const Answer& a, const Answer& b) {
                             return AnswerPair{a, restrict_answer(so, b, vk)};
                           }});
      } else {
        p.joint.push_back({1, o, i, [so, vk](const Answer& a, const Answer& b) {
                             return AnswerPair{restrict_answer(so, a, vk), b};
                           }});
      }
      return p;
    }
    const int ox = owner(x), oy = owner(y);
    if (ox < 0 || oy < 0) return Plan{true, {}, {}, {}};
    const auto& sx = scope(ox);
    const auto& sy = scope(oy);
    const auto& vx = vars(x);
    const auto& vy = vars(y);
    if (x == y) {
      for (int j = 0; j < m; ++j) {
        p.joint.push_back({each, ox, j, [sx, vx](const Answer& a, const Answer&) {
                             const auto r = restrict_answer(sx, a, vx);
                             return AnswerPair{r, r};
                           }});
      }
    } else {
      p.joint.push_back({1, ox, oy, [sx, sy, vx, vy](const Answer& a, const Answer& b) {
                           return AnswerPair{restrict_answer(sx, a, vx), restrict_answer(sy, b, vy)};
                         }});
    }
    return p;
  }

 private:
  Bcs b_;
  std::vector<VarGroup> groups_;
  std::vector<int> owner_;
};

class OracleSim : public PlanSampler {
 public:
  OracleSim(std::shared_ptr<const AnswerSampler> base, const NonlocalGame& og)
      : PlanSampler(std::move(base)), og_(og.x_set()) {
    if (og.kind != GameKind::kOracularized || !og.base) {
      throw Error(Errc::kInvalidArgument, "sim_oracularized needs an oracularized game");
    }
    g_ = og.base;
    given_x_.resize(g_->x_set().size());
    given_y_.resize(g_->y_set().size());
    for (const auto& e : g_->mu()) {
      given_x_[e.x].push_back({e.y, e.p});
      given_y_[e.y].push_back({e.x, e.p});
    }
    for (auto* side : {&given_x_, &given_y_}) {
      for (auto& list : *side) {
        Rational total = 0;
        for (const auto& [q, w] : list) total += w;
        for (auto& [q, w] : list) w /= total;
      }
    }
  }

 protected:
  Plan plan(int x, int y) const override {
    const auto& tx = og_.at(x).tag;
    const auto& ty = og_.at(y).tag;
    Plan p;
    // Same question, or questions the referee cross-checks: one call.
    if (x == y) {
      for (auto& t : calls_for(tx)) {
        auto f = t.f;
        p.joint.push_back({t.w, t.x, t.y, [f](const Answer& a, const Answer& b) {
                             const auto r = f(a, b);
                             return AnswerPair{r, r};
                           }});
      }
      return p;
    }
    const auto* ox = std::get_if<OracleQ>(&tx);
    const auto* oy = std::get_if<OracleQ>(&ty);
    const auto* rx = std::get_if<RoleQ>(&tx);
    const auto* ry = std::get_if<RoleQ>(&ty);
    auto role_proj = [](int role) {
      return role == 0 ? std::function<Answer(const Answer&, const Answer&)>(
                             [](const Answer& a, const Answer&) { return a; })
                       : [](const Answer&, const Answer& b) { return b; };
    };
    auto linked = [](const OracleQ& o, const RoleQ& r) {
      return r.role == 0 ? r.q == o.x : r.q == o.y;
    };
    if (ox && ry && linked(*ox, *ry)) {
      auto pr = role_proj(ry->role);
      p.joint.push_back({1, ox->x, ox->y, [pr](const Answer& a, const Answer& b) {
                           return AnswerPair{concat(a, b), pr(a, b)};
                         }});
      return p;
    }
    if (rx && oy && linked(*oy, *rx)) {
      auto pr = role_proj(rx->role);
      p.joint.push_back({1, oy->x, oy->y, [pr](const Answer& a, const Answer& b) {
                           return AnswerPair{pr(a, b), concat(a, b)};
                         }});
      return p;
    }
    if (rx && ry && rx->role != ry->role) {
      const int bx = rx->role == 0 ? rx->q : ry->q;
      const int by = rx->role == 0 ? ry->q : rx->q;
      if (g_->in_support(bx, by)) {
        const bool alice_first = rx->role == 0;
        p.joint.push_back({1, bx, by, [alice_first](const Answer& a, const Answer& b) {
                             return alice_first ? AnswerPair{a, b} : AnswerPair{b, a};
                           }});
        return p;
      }
    }
    p.left = calls_for(tx);
    p.right = calls_for(ty);
    return p;
  }

 private:
  std::vector<SideTerm> calls_for(const QuestionTag& tag) const {
    std::vector<SideTerm> out;
    if (const auto* o = std::get_if<OracleQ>(&tag)) {
      out.push_back({1, o->x, o->y, [](const Answer& a, const Answer& b) { return concat(a, b); }});
    } else if (const auto* r = std::get_if<RoleQ>(&tag)) {
      if (r->role == 0) {
        for (const auto& [y, w] : given_x_[r->q]) {
          out.push_back({w, r->q, y, [](const Answer& a, const Answer&) { return a; }});
        }
      } else {
        for (const auto& [x, w] : given_y_[r->q]) {
          out.push_back({w, x, r->q, [](const Answer&, const Answer& b) { return b; }});
        }
      }
    } else {
      throw Error(Errc::kUnknownQuestion, "not an oracularized question");
    }
    return out;
  }

  std::vector<Question> og_;
  std::shared_ptr<const NonlocalGame> g_;
  std::vector<std::vector<std::pair<int, Rational>>> given_x_, given_y_;
};

class ParallelSim : public AnswerSampler {
 public:
  ParallelSim(std::shared_ptr<const AnswerSampler> base, const NonlocalGame& rg)
      : base_(std::move(base)), xs_(rg.x_set()), ys_(rg.y_set()) {}

  std::optional<AnswerPair> sample(int x, int y, Rng& rng) const override {
    const auto& px = parts(xs_, x);
    const auto& py = parts(ys_, y);
    AnswerPair out;
    for (std::size_t t = 0; t < px.size(); ++t) {
      const auto r = base_->sample(px[t], py[t], rng);
      if (!r) return std::nullopt;
      out.first = concat(out.first, r->first);
      out.second = concat(out.second, r->second);
    }
    return out;
  }

  std::optional<PairDistribution> exact_distribution(int x, int y) const override {
    const auto& px = parts(xs_, x);
    const auto& py = parts(ys_, y);
    PairDistribution acc{{AnswerPair{}, Rational(1)}};
    for (std::size_t t = 0; t < px.size(); ++t) {
      const auto d = base_->exact_distribution(px[t], py[t]);
      if (!d) return std::nullopt;
      PairDistribution next;
      for (const auto& [ab, p] : acc) {
        for (const auto& [cd, q] : *d) {
          next[{concat(ab.first, cd.first), concat(ab.second, cd.second)}] += p * q;
        }
      }
      acc = std::move(next);
    }
    return acc;
  }

 private:
  static const std::vector<int>& parts(const std::vector<Question>& qs, int q) {
    const auto* t = std::get_if<ProductQ>(&qs.at(q).tag);
    if (!t) throw Error(Errc::kUnknownQuestion, "not a repeated-game question");
    return t->parts;
  }
  std::shared_ptr<const AnswerSampler> base_;
  std::vector<Question> xs_, ys_;
};

}  // namespace

Rational statistical_distance(const PairDistribution& p, const PairDistribution& q) {
  auto widths = [](const PairDistribution& d) {
    return d.empty() ? std::pair<std::size_t, std::size_t>{0, 0}
                     : std::pair{d.begin()->first.first.size(), d.begin()->first.second.size()};
  };
  if (!p.empty() && !q.empty() && widths(p) != widths(q)) {
    throw Error(Errc::kSpaceMismatch, "answer widths differ");
  }
  Rational sum = 0;
  for (const auto& [ab, x] : p) {
    const auto it = q.find(ab);
    const Rational diff = x - (it == q.end() ? Rational(0) : it->second);
    sum += diff < 0 ? Rational(-diff) : diff;
  }
  for (const auto& [ab, x] : q) {
    if (!p.count(ab)) sum += x;
  }
  return sum / 2;
}

std::optional<AnswerPair> sample_from(const PairDistribution& d, Rng& rng) {
  if (d.empty()) return std::nullopt;
  double u = rng.uniform01();
  for (const auto& [ab, p] : d) {
    u -= to_double(p);
    if (u < 0) return ab;
  }
  return d.rbegin()->first;
}

Rational exact_value(const NonlocalGame& g, const AnswerSampler& s) {
  Rational v = 0;
  for (const auto& e : g.mu()) {
    const auto d = s.exact_distribution(e.x, e.y);
    if (!d) {
      throw Error(Errc::kMissingConditional,
                  "no exact distribution for (" + std::to_string(e.x) + "," + std::to_string(e.y) + ")");
    }
    for (const auto& [ab, p] : *d) {
      if (g.accepts(e.x, e.y, ab.first, ab.second)) v += e.p * p;
    }
  }
  return v;
}

CorrelationSampler::CorrelationSampler(ExactCorrelation table) {
  for (auto& [xy, outs] : table) {
    auto& d = table_[xy];
    for (auto& o : outs) d[{o.a, o.b}] += o.p;
  }
}

CorrelationSampler CorrelationSampler::from_strategy(const NonlocalGame& g, const Strategy& s) {
  ExactCorrelation t;
  for (const auto& [xy, outs] : correlation_of(g, s)) {
    auto& d = t[xy];
    for (const auto& o : outs) d.push_back({o.a, o.b, Rational(o.p)});
  }
  return CorrelationSampler(std::move(t));
}

CorrelationSampler CorrelationSampler::from_deterministic(const NonlocalGame& g,
                                                          const DeterministicStrategy& d) {
  return CorrelationSampler(correlation_of(g, d));
}

std::optional<AnswerPair> CorrelationSampler::sample(int x, int y, Rng& rng) const {
  const auto it = table_.find({x, y});
  if (it == table_.end()) return std::nullopt;
  return sample_from(it->second, rng);
}

std::optional<PairDistribution> CorrelationSampler::exact_distribution(int x, int y) const {
  const auto it = table_.find({x, y});
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

std::optional<AnswerPair> StrategySampler::sample(int x, int y, Rng& rng) const {
  const auto outs = pair_correlation(s_, x, y);
  double u = rng.uniform01();
  for (const auto& o : outs) {
    u -= o.p;
    if (u < 0) return AnswerPair{o.a, o.b};
  }
  if (outs.empty()) return std::nullopt;
  return AnswerPair{outs.back().a, outs.back().b};
}

std::optional<PairDistribution> StrategySampler::exact_distribution(int x, int y) const {
  PairDistribution d;
  for (const auto& o : pair_correlation(s_, x, y)) d[{o.a, o.b}] += Rational(o.p);
  return d;
}

std::shared_ptr<AnswerSampler> sim_cv(std::shared_ptr<const AnswerSampler> base, const Bcs& b) {
  return std::make_shared<CvSim>(std::move(base), b);
}

std::shared_ptr<AnswerSampler> sim_oracularized(std::shared_ptr<const AnswerSampler> base,
                                                const NonlocalGame& og) {
  return std::make_shared<OracleSim>(std::move(base), og);
}

std::shared_ptr<AnswerSampler> sim_parallel(std::shared_ptr<const AnswerSampler> base,
                                            const NonlocalGame& rg) {
  if (rg.kind != GameKind::kRepeated) return std::const_pointer_cast<AnswerSampler>(base);
  return std::make_shared<ParallelSim>(std::move(base), rg);
}

// ---- tableau ----

std::vector<int> question_groups(const TableauBcs& t, int question) {
  const int nc = t.bcs.m();
  if (question < 0 || question >= nc + static_cast<int>(t.bcs.groups.size())) {
    throw Error(Errc::kUnknownQuestion, "question " + std::to_string(question) + " out of range");
  }
  if (question >= nc) return {question - nc};
  const auto gi = group_index(t.bcs);
  std::vector<int> out;
  for (int v : t.bcs.constraints[question].scope) {
    if (std::find(out.begin(), out.end(), gi[v]) == out.end()) out.push_back(gi[v]);
  }
  return out;
}

namespace {

Answer question_answer(const TableauBcs& t, int q, const std::map<int, Sign>& signs) {
  const int nc = t.bcs.m();
  const auto& vars = q < nc ? t.bcs.constraints[q].scope : t.bcs.groups[q - nc].vars;
  Answer out;
  for (int v : vars) out.push_back(signs.at(v));
  return out;
}

// Free groups drawn uniformly from their supports; `fill` appends the
// derived group (if any) so `v` holds the values of every question group.
struct QuestionSpec {
  std::vector<std::vector<int>> supports;
  std::function<void(std::vector<int>& v)> fill;
};

std::vector<int> all_codes() {
  std::vector<int> v(kS5Order);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<int> cell_support(const TableauBcs& t, int i, int p, int q) {
  const auto& prog = t.programs[i];
  if (t.d(i) == 1) return {prog.sigma.code()};
  if (p == 1) {
    const auto& ins = prog.instructions[q - 1];
    return {ins.on_plus.code(), ins.on_minus.code()};
  }
  return all_codes();
}

S5Element el(int code) { return S5Element::from_code(code); }

QuestionSpec question_spec(const TableauBcs& t, int question) {
  const int nc = t.bcs.m();
  QuestionSpec s;
  auto identity_fill = [](std::vector<int>&) {};
  if (question >= nc) {
    const auto& gi = t.group_info.at(question - nc);
    if (gi.kind == GroupInfo::kCopy) {
      s.supports = {{0, 1}};
    } else if (gi.kind == GroupInfo::kRandomizer) {
      s.supports = {all_codes()};
    } else {
      s.supports = {cell_support(t, gi.a, gi.b, gi.c)};
    }
    s.fill = identity_fill;
    return s;
  }
  const auto& ci = t.clauses.at(question);
  const auto& rel = std::get<S5Relation>(t.bcs.constraints[question].spec);
  const int i = ci.constraint;
  switch (ci.kind) {
    case ClauseKind::kPin: {
      const auto pin = std::get<S5Pin>(rel);
      s.supports.assign(pin.copies, {0, 1});
      s.fill = [pin](std::vector<int>& v) {
        int minus = 0;
        for (int b : v) minus ^= b == 0;
        v.push_back((minus ? pin.minus : pin.plus).code());
      };
      return s;
    }
    case ClauseKind::kPropagate: {
      const auto pr = std::get<S5Propagate>(rel);
      if (pr.has_left) s.supports.push_back(all_codes());
      s.supports.push_back(cell_support(t, i, ci.p, ci.q));
      if (pr.has_right) s.supports.push_back(all_codes());
      s.fill = [pr](std::vector<int>& v) {
        std::size_t j = 0;
        S5Element left = S5Element::identity(), right = S5Element::identity();
        if (pr.has_left) left = el(v[j++]);
        const S5Element cell = el(v[j++]);
        if (pr.has_right) right = el(v[j++]);
        v.push_back((left.inverse() * cell * right).code());
      };
      return s;
    }
    case ClauseKind::kProduct: {
      const auto prod = std::get<S5Product>(rel);
      if (prod.blocks == 1) {
        s.supports = {{prod.target.code()}};
        s.fill = identity_fill;
        return s;
      }
      s.supports.assign(prod.blocks - 1, all_codes());
      s.fill = [prod](std::vector<int>& v) {
        S5Element acc = S5Element::identity();
        for (int c : v) acc = acc * el(c);
        v.push_back((acc.inverse() * prod.target).code());
      };
      return s;
    }
  }
  throw Error(Errc::kInvalidArgument, "unknown clause kind");
}

}  // namespace

AnswerPair answers_from_values(const TableauBcs& t, int x, int y, const std::vector<int>& groups,
                               const std::vector<int>& values) {
  std::map<int, Sign> signs;
  for (std::size_t j = 0; j < groups.size(); ++j) {
    const auto bits = value_bits(t, groups[j], values[j]);
    const auto& vars = t.bcs.groups[groups[j]].vars;
    for (std::size_t b = 0; b < vars.size(); ++b) signs[vars[b]] = bits[b];
  }
  return {question_answer(t, x, signs), question_answer(t, y, signs)};
}

GroupDistribution sim_tableau_question(const TableauBcs& t, int question) {
  const auto spec = question_spec(t, question);
  double states = 1;
  for (const auto& s : spec.supports) states *= static_cast<double>(s.size());
  if (states > 5e7) throw Error(Errc::kTooLarge, "simulated question has too many states");
  GroupDistribution out;
  out.groups = question_groups(t, question);
  std::vector<std::size_t> idx(spec.supports.size(), 0);
  std::vector<int> values;
  values.reserve(out.groups.size());
  out.counts.reserve(static_cast<std::size_t>(states));
  for (;;) {
    values.clear();
    for (std::size_t j = 0; j < idx.size(); ++j) values.push_back(spec.supports[j][idx[j]]);
    spec.fill(values);
    out.counts[pack_values(t, out.groups, values)] += 1;
    out.total += 1;
    std::size_t j = 0;
    while (j < idx.size() && ++idx[j] == spec.supports[j].size()) idx[j++] = 0;
    if (j == idx.size()) break;
  }
  return out;
}

std::vector<int> sample_tableau_question(const TableauBcs& t, int question, Rng& rng) {
  const auto spec = question_spec(t, question);
  std::vector<int> values;
  for (const auto& s : spec.supports) values.push_back(s[rng.below(s.size())]);
  spec.fill(values);
  return values;
}

HonestTableauSampler::HonestTableauSampler(std::shared_ptr<const TableauBcs> t, std::vector<Sign> w)
    : t_(std::move(t)), w_(std::move(w)) {
  check_witness(t_->obl.base, w_);
}

std::optional<AnswerPair> HonestTableauSampler::sample(int x, int y, Rng& rng) const {
  const auto latent = sample_latent(*t_, w_, rng);
  const auto bits = latent_bits(*t_, latent);
  std::map<int, Sign> signs;
  for (int v = 0; v < static_cast<int>(bits.size()); ++v) signs[v] = bits[v];
  return AnswerPair{question_answer(*t_, x, signs), question_answer(*t_, y, signs)};
}

std::optional<PairDistribution> HonestTableauSampler::exact_distribution(int x, int y) const {
  auto groups = question_groups(*t_, x);
  for (int g : question_groups(*t_, y)) {
    if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
  }
  const auto d = honest_marginal(*t_, w_, groups);
  PairDistribution out;
  for (const auto& [key, c] : d.counts) {
    out[answers_from_values(*t_, x, y, groups, unpack_values(*t_, groups, key))] += d.prob(key);
  }
  return out;
}

TableauSimulator::TableauSimulator(std::shared_ptr<const TableauBcs> t) : t_(std::move(t)) {}

namespace {
// Question whose sample answers both sides, or -1.
int covering_question(const TableauBcs& t, int x, int y) {
  if (x == y) return x;
  const int nc = t.bcs.m();
  if (x < nc && y >= nc) {
    const auto g = question_groups(t, x);
    if (std::find(g.begin(), g.end(), y - nc) != g.end()) return x;
  }
  if (y < nc && x >= nc) {
    const auto g = question_groups(t, y);
    if (std::find(g.begin(), g.end(), x - nc) != g.end()) return y;
  }
  return -1;
}
}  // namespace

std::optional<AnswerPair> TableauSimulator::sample(int x, int y, Rng& rng) const {
  const int q = covering_question(*t_, x, y);
  if (q < 0) return std::nullopt;
  return answers_from_values(*t_, x, y, question_groups(*t_, q), sample_tableau_question(*t_, q, rng));
}

std::optional<PairDistribution> TableauSimulator::exact_distribution(int x, int y) const {
  const int q = covering_question(*t_, x, y);
  if (q < 0) return std::nullopt;
  const auto d = sim_tableau_question(*t_, q);
  PairDistribution out;
  for (const auto& [key, c] : d.counts) {
    out[answers_from_values(*t_, x, y, d.groups, unpack_values(*t_, d.groups, key))] += d.prob(key);
  }
  return out;
}

UniformityVerdict uniformity_test(const TableauBcs& t, const std::vector<Sign>& w,
                                  const std::vector<int>& copy_groups, bool exact, int samples,
                                  std::uint64_t seed) {
  for (int g : copy_groups) {
    if (t.group_info.at(g).kind != GroupInfo::kCopy) {
      throw Error(Errc::kNotOblivious, "group " + t.bcs.groups[g].name + " is not an oblivious copy");
    }
  }
  UniformityVerdict v;
  if (static_cast<int>(copy_groups.size()) >= t.k()) {
    v.applicable = false;
    v.note = "subset has at least k copies";
    return v;
  }
  if (exact) {
    v.distance = statistical_distance(honest_marginal(t, w, copy_groups),
                                      uniform_distribution(t, copy_groups));
    v.uniform = v.distance == 0;
    return v;
  }
  if (copy_groups.size() > 20) throw Error(Errc::kTooLarge, "too many cells for a chi-square test");
  const std::size_t cells = std::size_t{1} << copy_groups.size();
  std::vector<double> observed(cells, 0);
  Rng rng = Rng::substream(seed, "uniformity");
  for (int s = 0; s < samples; ++s) {
    const auto latent = sample_latent(t, w, rng);
    std::size_t key = 0;
    for (std::size_t j = 0; j < copy_groups.size(); ++j) {
      if (latent.copies[copy_groups[j]] > 0) key |= std::size_t{1} << j;
    }
    observed[key] += 1;
  }
  const double expected = static_cast<double>(samples) / static_cast<double>(cells);
  double stat = 0;
  for (double o : observed) stat += (o - expected) * (o - expected) / expected;
  if (cells == 1) {
    v.p_value = 1;
  } else {
    const boost::math::chi_squared dist(static_cast<double>(cells - 1));
    v.p_value = boost::math::cdf(boost::math::complement(dist, stat));
  }
  v.uniform = v.p_value > 1e-4;
  return v;
}

namespace {

double choose(std::size_t n, std::size_t r) {
  double c = 1;
  for (std::size_t j = 0; j < r; ++j) c = c * static_cast<double>(n - j) / static_cast<double>(j + 1);
  return c;
}

template <class F>
void for_each_subset(const std::vector<int>& items, std::size_t r, F&& f) {
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t n = items.size();
  if (r > n) return;
  for (;;) {
    std::vector<int> sub;
    for (auto j : idx) sub.push_back(items[j]);
    f(sub);
    std::size_t j = r;
    while (j > 0 && idx[j - 1] == n - r + j - 1) --j;
    if (j == 0) return;
    ++idx[j - 1];
    for (std::size_t l = j; l < r; ++l) idx[l] = idx[l - 1] + 1;
  }
}

}  // namespace

ProbeReport dishonest_probe(const TableauBcs& t, const std::vector<Sign>& w,
                            const std::vector<std::vector<int>>& probes, const ProbeOptions& opts) {
  if ((t.ell < 8 || t.k() < 9) && !opts.allow_below_threshold) {
    throw Error(Errc::kParamsTooSmall, "dishonest probe needs ell >= 8 and k >= 9 (ell=" +
                                           std::to_string(t.ell) + ", k=" + std::to_string(t.k()) + ")");
  }
  ProbeReport rep;
  constexpr std::size_t kMaxViolations = 64;
  // probes sharing a copy set share their nonzero subsets
  std::map<std::vector<int>, std::vector<std::pair<std::vector<int>, Rational>>> seen;
  for (const auto& probe : probes) {
    ++rep.probes;
    std::vector<int> copies;
    for (int q : probe) {
      for (int g : question_groups(t, q)) {
        if (t.group_info[g].kind == GroupInfo::kCopy &&
            std::find(copies.begin(), copies.end(), g) == copies.end()) {
          copies.push_back(g);
        }
      }
    }
    std::sort(copies.begin(), copies.end());
    const std::size_t r = std::min<std::size_t>(opts.max_subset, copies.size());
    if (r == 0) continue;
    const bool exhaustive = choose(copies.size(), r) <= static_cast<double>(opts.exhaustive_limit);
    if (!exhaustive) rep.exhaustive = false;
    auto [it, fresh] = seen.try_emplace(copies);
    if (fresh) {
      // A marginal of a uniform distribution is uniform, so the largest
      // subsets suffice.
      auto check = [&](const std::vector<int>& sub) {
        ++rep.subsets_checked;
        const auto dist = statistical_distance(honest_marginal(t, w, sub), uniform_distribution(t, sub));
        if (dist != 0) it->second.emplace_back(sub, dist);
      };
      if (exhaustive) {
        for_each_subset(copies, r, check);
      } else {
        std::map<int, std::vector<int>> by_var;
        for (int g : copies) by_var[t.group_info[g].a].push_back(g);
        for (const auto& [v, list] : by_var) {
          for_each_subset(list, std::min<std::size_t>(opts.max_subset, list.size()), check);
        }
      }
    }
    for (const auto& [sub, dist] : it->second) {
      if (rep.violations.size() < kMaxViolations) rep.violations.push_back({probe, sub, dist});
    }
  }
  return rep;
}

}  // namespace zkgame
