#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zkgame/game.hpp"

namespace zkgame {

struct OracularizeOptions {
  // Adds an A-B edge (Alice asked x in role A, Bob asked y in role B).
  bool include_ab_edge = false;
};

// Question layout of the result (both sides): ORACLE questions, one per
// support pair of g, then role-A questions (one per x), then role-B
// questions (one per y). An edge is drawn uniformly, then (x,y) ~ mu. On
// the mixed edges Alice holds the single question and Bob the oracle, so
// Bob's pair fixes Alice's answer.
NonlocalGame oracularize(const NonlocalGame& g, const OracularizeOptions& opts = {});

inline constexpr double kRepeatGuard = 1e6;
NonlocalGame parallel_repeat(const NonlocalGame& g, int k, double guard = kRepeatGuard);

// Sampling-only handle for repetitions too large to tabulate.
class RepeatedGame {
 public:
  RepeatedGame(std::shared_ptr<const NonlocalGame> base, int k);
  int k() const { return k_; }
  const NonlocalGame& base() const { return *base_; }
  std::pair<std::vector<int>, std::vector<int>> sample(Rng& rng) const;
  bool accepts(const std::vector<int>& xs, const std::vector<int>& ys,
               const std::vector<Answer>& as, const std::vector<Answer>& bs) const;

 private:
  std::shared_ptr<const NonlocalGame> base_;
  int k_;
};

struct TransformReport {
  std::string pass;
  nlohmann::json params = nlohmann::json::object();
  std::size_t x_before = 0, y_before = 0, x_after = 0, y_after = 0;
  int question_bits_before = 0, question_bits_after = 0;
  int answer_bits_before = 0, answer_bits_after = 0;
  std::size_t support_before = 0, support_after = 0;
};

TransformReport report(const NonlocalGame& before, const NonlocalGame& after,
                       const std::string& pass, nlohmann::json params = nlohmann::json::object());
int max_question_bits(const NonlocalGame& g);
int max_answer_bits(const NonlocalGame& g);
nlohmann::json to_json(const TransformReport& r);

}  // namespace zkgame
