#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "zkgame/bcs.hpp"
#include "zkgame/rational.hpp"
#include "zkgame/rng.hpp"

namespace zkgame {

using Answer = std::vector<Sign>;

struct PlainQ {};
struct ConstraintQ {
  int i = 0;
};
// Variable question; j indexes effective_groups() of the source BCS.
struct VariableQ {
  int j = 0;
};
// Oracularized questions. ORACLE carries a base pair; a role question
// carries one base question (role 0 = A asks an x, role 1 = B asks a y).
struct OracleQ {
  int x = 0, y = 0;
};
struct RoleQ {
  int role = 0;
  int q = 0;
};
struct ProductQ {
  std::vector<int> parts;
};
using QuestionTag = std::variant<PlainQ, ConstraintQ, VariableQ, OracleQ, RoleQ, ProductQ>;

struct Question {
  std::string label;
  QuestionTag tag;
  int question_bits = 0;  // length of the question's encoding
  int answer_bits = 0;
  // Explicit answer set; nullopt when too large to list (the predicate
  // still decides every answer).
  std::optional<std::vector<Answer>> answers;
};

struct MuEntry {
  int x = 0, y = 0;
  Rational p;
};

using Predicate = std::function<bool(int x, int y, const Answer& a, const Answer& b)>;

enum class GameKind { kPlain, kCC, kCV, kOracularized, kRepeated };

class NonlocalGame {
 public:
  NonlocalGame() = default;
  // Merges duplicate support entries, drops zeros, checks Σμ = 1.
  NonlocalGame(std::string name, std::vector<Question> xs, std::vector<Question> ys,
               std::vector<MuEntry> mu, Predicate predicate);

  const std::string& name() const { return name_; }
  const std::vector<Question>& x_set() const { return xs_; }
  const std::vector<Question>& y_set() const { return ys_; }
  const std::vector<MuEntry>& mu() const { return mu_; }
  Rational prob(int x, int y) const;
  bool in_support(int x, int y) const { return index_.count({x, y}) != 0; }
  bool accepts(int x, int y, const Answer& a, const Answer& b) const {
    return predicate_(x, y, a, b);
  }
  const Predicate& predicate() const { return predicate_; }
  std::pair<int, int> sample_pair(Rng& rng) const;

  // Provenance used by transforms, samplers and serialization.
  GameKind kind = GameKind::kPlain;
  std::shared_ptr<const Bcs> bcs;             // cc / cv source
  std::shared_ptr<const NonlocalGame> base;   // oracularized / repeated source
  int repeat_k = 1;
  int oracle_edges = 5;
  nlohmann::json builder = nlohmann::json::object();

 private:
  std::string name_;
  std::vector<Question> xs_, ys_;
  std::vector<MuEntry> mu_;
  Predicate predicate_;
  std::map<std::pair<int, int>, std::size_t> index_;
  std::vector<BigInt> cumulative_;  // integer weights over a common denominator
  BigInt total_;
};

// Answers listed in full only up to this many bits.
inline constexpr int kExplicitAnswerBits = 20;

int bits_for(std::size_t count);

NonlocalGame cc_game(const Bcs& b);
NonlocalGame cv_game(const Bcs& b);

Rational synchronicity_alpha(const NonlocalGame& g);

// Deterministic strategy: one answer per question on each side.
struct DeterministicStrategy {
  std::vector<Answer> alice, bob;
};

inline constexpr double kClassicalGuard = 1e7;
struct ClassicalResult {
  Rational value;
  DeterministicStrategy strategy;
};
// Exact branch and bound over the side with fewer deterministic strategies.
ClassicalResult classical_value_with_strategy(const NonlocalGame& g,
                                              double guard = kClassicalGuard);
Rational classical_value(const NonlocalGame& g, double guard = kClassicalGuard);
// Constraint search for a deterministic strategy winning with certainty.
std::optional<DeterministicStrategy> perfect_classical_strategy(const NonlocalGame& g);
Rational evaluate_deterministic(const NonlocalGame& g, const DeterministicStrategy& s);

template <class P>
struct Outcome {
  Answer a, b;
  P p;
};
template <class P>
using BasicCorrelation = std::map<std::pair<int, int>, std::vector<Outcome<P>>>;
using Correlation = BasicCorrelation<double>;
using ExactCorrelation = BasicCorrelation<Rational>;

double value_of_correlation(const NonlocalGame& g, const Correlation& p);
Rational value_of_correlation(const NonlocalGame& g, const ExactCorrelation& p);
ExactCorrelation correlation_of(const NonlocalGame& g, const DeterministicStrategy& s);

bool is_projection(const NonlocalGame& g);

}  // namespace zkgame
