#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zkgame/game.hpp"
#include "zkgame/quantum.hpp"
#include "zkgame/tableau.hpp"
#include "zkgame/tableau_oracle.hpp"

namespace zkgame {

using AnswerPair = std::pair<Answer, Answer>;
using PairDistribution = std::map<AnswerPair, Rational>;

// Total variation distance; SpaceMismatch when answer widths differ.
Rational statistical_distance(const PairDistribution& p, const PairDistribution& q);
std::optional<AnswerPair> sample_from(const PairDistribution& d, Rng& rng);
// Value of the correlation given by exact_distribution on every support pair.
Rational exact_value(const NonlocalGame& g, const class AnswerSampler& s);

// Answers one question pair per call. nullopt from sample() is a Decline
// (the sampler has no rule for that pair).
class AnswerSampler {
 public:
  virtual ~AnswerSampler() = default;
  virtual std::optional<AnswerPair> sample(int x, int y, Rng& rng) const = 0;
  virtual std::optional<PairDistribution> exact_distribution(int /*x*/, int /*y*/) const {
    return std::nullopt;
  }
};

// Samples a fixed correlation table.
class CorrelationSampler : public AnswerSampler {
 public:
  explicit CorrelationSampler(ExactCorrelation table);
  static CorrelationSampler from_strategy(const NonlocalGame& g, const Strategy& s);
  static CorrelationSampler from_deterministic(const NonlocalGame& g, const DeterministicStrategy& d);
  std::optional<AnswerPair> sample(int x, int y, Rng& rng) const override;
  std::optional<PairDistribution> exact_distribution(int x, int y) const override;

 private:
  std::map<std::pair<int, int>, PairDistribution> table_;
};

// Measures the strategy on any pair it has measurements for (support or
// not); UnsupportedQuestion otherwise.
class StrategySampler : public AnswerSampler {
 public:
  explicit StrategySampler(Strategy s) : s_(std::move(s)) {}
  std::optional<AnswerPair> sample(int x, int y, Rng& rng) const override;
  std::optional<PairDistribution> exact_distribution(int x, int y) const override;

 private:
  Strategy s_;
};

// CV simulator from a CC sampler. On (i, k) it draws j uniform in [m],
// queries base(i, j) and answers i with Alice's answer and k with its k
// coordinate. A variable asked alone is read from the first constraint
// containing it.
std::shared_ptr<AnswerSampler> sim_cv(std::shared_ptr<const AnswerSampler> base, const Bcs& b);
// Simulator for an oracularized game `og` (og.base is the game `base`
// answers). Oracle questions get one base call's joint answer; a role
// question x gets base(x, y') with y' ~ mu(.|x). Questions whose answers
// the referee compares share one base call, all others are independent.
std::shared_ptr<AnswerSampler> sim_oracularized(std::shared_ptr<const AnswerSampler> base,
                                                const NonlocalGame& og);
// Independent base call per coordinate of a parallel_repeat game.
std::shared_ptr<AnswerSampler> sim_parallel(std::shared_ptr<const AnswerSampler> base,
                                            const NonlocalGame& rg);

// Tableau CV game helpers. Question q < #clauses is clause q, otherwise
// group q - #clauses. Groups are listed in answer-bit order.
std::vector<int> question_groups(const TableauBcs& t, int question);
AnswerPair answers_from_values(const TableauBcs& t, int x, int y, const std::vector<int>& groups,
                               const std::vector<int>& values);

// Honest prover for cv_game(t.bcs): one latent per round, answers are
// restrictions of it.
class HonestTableauSampler : public AnswerSampler {
 public:
  HonestTableauSampler(std::shared_ptr<const TableauBcs> t, std::vector<Sign> w);
  std::optional<AnswerPair> sample(int x, int y, Rng& rng) const override;
  std::optional<PairDistribution> exact_distribution(int x, int y) const override;
  const TableauBcs& tableau() const { return *t_; }
  const std::vector<Sign>& witness() const { return w_; }

 private:
  std::shared_ptr<const TableauBcs> t_;
  std::vector<Sign> w_;
};

// Witness-free answer distribution of a single tableau question:
// pins draw all copies uniformly; propagation at p >= 2 draws T(p,q) and
// the randomizers uniformly, at p = 1 T(1,q) is uniform on {pi_+1, pi_-1};
// products are uniform among tuples multiplying to sigma; lone variables
// are uniform except row-1 cells (two-point) and d = 1 cells (sigma).
GroupDistribution sim_tableau_question(const TableauBcs& t, int question);
std::vector<int> sample_tableau_question(const TableauBcs& t, int question, Rng& rng);

// Simulator prover for cv_game(t.bcs). Same-question pairs are
// duplicated, a clause with one of its variables is read off one sample;
// other pairs are declined.
class TableauSimulator : public AnswerSampler {
 public:
  explicit TableauSimulator(std::shared_ptr<const TableauBcs> t);
  std::optional<AnswerPair> sample(int x, int y, Rng& rng) const override;
  std::optional<PairDistribution> exact_distribution(int x, int y) const override;

 private:
  std::shared_ptr<const TableauBcs> t_;
};

struct UniformityVerdict {
  bool applicable = true;  // false when |S| >= k
  bool uniform = false;
  Rational distance = 0;   // exact mode
  double p_value = 1.0;    // sampling mode
  std::string note;
};
// Copy groups only; NotOblivious otherwise. Exact mode enumerates the
// honest marginal; sampling mode runs a chi-square test at 1e-4.
UniformityVerdict uniformity_test(const TableauBcs& t, const std::vector<Sign>& w,
                                  const std::vector<int>& copy_groups, bool exact = true,
                                  int samples = 100000, std::uint64_t seed = 0);

struct ProbeOptions {
  int max_subset = 8;
  bool allow_below_threshold = false;
  std::size_t exhaustive_limit = 100000;
};
struct ProbeViolation {
  std::vector<int> questions;
  std::vector<int> groups;
  Rational distance;
};
struct ProbeReport {
  std::size_t probes = 0;
  std::size_t subsets_checked = 0;
  bool exhaustive = true;  // false when only per-variable subsets were checked
  std::vector<ProbeViolation> violations;
};
// Each probe lists the CV questions a dishonest verifier sees across its
// two oracle questions. Every subset of at most max_subset oblivious
// copies in their union must have a uniform honest marginal.
ProbeReport dishonest_probe(const TableauBcs& t, const std::vector<Sign>& w,
                            const std::vector<std::vector<int>>& probes,
                            const ProbeOptions& opts = {});

}  // namespace zkgame
