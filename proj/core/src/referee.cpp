#include "zkgame/referee.hpp"

#include <algorithm>
#include <thread>

#include "zkgame/error.hpp"

namespace zkgame {

VerifierPolicy VerifierPolicy::UniformAll(const NonlocalGame& g) {
  const auto nx = static_cast<std::int64_t>(g.x_set().size());
  const auto ny = static_cast<std::int64_t>(g.y_set().size());
  std::vector<MuEntry> d;
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) d.push_back({x, y, make_rational(1, nx * ny)});
  }
  return Dishonest(std::move(d));
}

namespace {

void check_policy(const NonlocalGame& g, const VerifierPolicy& p) {
  if (p.honest) return;
  Rational total = 0;
  for (const auto& e : p.dist) {
    if (e.x < 0 || e.y < 0 || e.x >= static_cast<int>(g.x_set().size()) ||
        e.y >= static_cast<int>(g.y_set().size())) {
      throw Error(Errc::kUnknownQuestion, "policy pair outside X x Y");
    }
    if (e.p < 0) throw Error(Errc::kInvalidArgument, "negative policy weight");
    total += e.p;
  }
  if (total != 1) throw Error(Errc::kInvalidArgument, "policy weights sum to " + to_string(total));
}

std::pair<int, int> draw(const NonlocalGame& g, const VerifierPolicy& p, Rng& rng) {
  if (p.honest) return g.sample_pair(rng);
  double u = rng.uniform01();
  for (const auto& e : p.dist) {
    u -= to_double(e.p);
    if (u < 0) return {e.x, e.y};
  }
  return {p.dist.back().x, p.dist.back().y};
}

}  // namespace

Transcript run_protocol(const NonlocalGame& g, const AnswerSampler& provers,
                        const VerifierPolicy& policy, std::size_t rounds, std::uint64_t seed,
                        int jobs, bool with_exact) {
  check_policy(g, policy);
  Transcript t;
  t.seed = seed;
  t.game = g.name();
  t.rounds.resize(rounds);

  auto play = [&](std::size_t r) {
    Rng rng = Rng::substream(seed, "round", r);
    auto& rd = t.rounds[r];
    std::tie(rd.x, rd.y) = draw(g, policy, rng);
    const auto ans = provers.sample(rd.x, rd.y, rng);
    if (!ans) {
      rd.declined = true;
      return;
    }
    rd.a = ans->first;
    rd.b = ans->second;
    rd.ok = g.accepts(rd.x, rd.y, rd.a, rd.b);
  };

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(rounds, 1));
  if (workers == 1) {
    for (std::size_t r = 0; r < rounds; ++r) play(r);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t r = w; r < rounds; r += workers) play(r);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (const auto& rd : t.rounds) {
    if (rd.declined) {
      ++t.declines;
    } else if (rd.ok) {
      ++t.accepted;
    }
  }
  const std::size_t answered = rounds - t.declines;
  t.value = answered ? static_cast<double>(t.accepted) / static_cast<double>(answered) : 0.0;
  if (with_exact && policy.honest) {
    try {
      t.exact_value = exact_value(g, provers);
    } catch (const Error&) {
      // no exact distribution available
    }
  }
  return t;
}

}  // namespace zkgame
