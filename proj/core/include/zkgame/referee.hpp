#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zkgame/game.hpp"
#include "zkgame/zk_sim.hpp"

namespace zkgame {

struct Round {
  int x = 0, y = 0;
  Answer a, b;
  bool declined = false;
  bool ok = false;
};

struct Transcript {
  std::uint64_t seed = 0;
  std::string game;
  std::vector<Round> rounds;
  std::size_t accepted = 0, declines = 0;
  double value = 0;  // accepted / answered rounds
  std::optional<Rational> exact_value;
};

// Honest: (x, y) ~ mu. Dishonest: any distribution over X x Y.
struct VerifierPolicy {
  bool honest = true;
  std::vector<MuEntry> dist;

  static VerifierPolicy Honest() { return {}; }
  static VerifierPolicy Dishonest(std::vector<MuEntry> d) { return {false, std::move(d)}; }
  // Uniform over every question pair, support or not.
  static VerifierPolicy UniformAll(const NonlocalGame& g);
};

// Round r draws from Rng::substream(seed, "round", r), so the transcript
// does not depend on `jobs`. Declined rounds are kept and left out of the
// empirical value. with_exact also fills exact_value (honest policy, when
// the provers expose exact distributions).
Transcript run_protocol(const NonlocalGame& g, const AnswerSampler& provers,
                        const VerifierPolicy& policy, std::size_t rounds, std::uint64_t seed,
                        int jobs = 1, bool with_exact = false);

}  // namespace zkgame
