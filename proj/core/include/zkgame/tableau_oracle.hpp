#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "zkgame/rational.hpp"
#include "zkgame/tableau.hpp"

namespace zkgame {

using Count = unsigned __int128;

// Exact distribution over the joint values of a list of tableau groups,
// stored as integer counts over a common total. A copy group contributes
// one bit (1 = +1), a permutation group seven bits (its S5 code), packed
// in list order from the least significant end.
struct GroupDistribution {
  std::vector<int> groups;
  std::unordered_map<std::uint64_t, Count> counts;
  Count total = 0;

  Rational prob(std::uint64_t key) const;
};

int group_width(const TableauBcs& t, int group);
std::uint64_t pack_values(const TableauBcs& t, const std::vector<int>& groups,
                          const std::vector<int>& values);
std::vector<int> unpack_values(const TableauBcs& t, const std::vector<int>& groups,
                               std::uint64_t key);
// Value of a group as a sign list (copy) or a 7-bit code block.
std::vector<Sign> value_bits(const TableauBcs& t, int group, int value);
int bits_value(const TableauBcs& t, int group, std::span<const Sign> bits);

// Exact marginal of the honest latent (copies uniform given products w,
// randomizers uniform, cells completed) on `groups`. Independent parts of
// the latent are enumerated separately and multiplied; every block is
// enumerated exhaustively. Throws TooLarge when a block would exceed
// `guard` joint states.
GroupDistribution honest_marginal(const TableauBcs& t, const std::vector<Sign>& w,
                                  const std::vector<int>& groups, double guard = 5e7);

GroupDistribution marginalize(const TableauBcs& t, const GroupDistribution& d,
                              const std::vector<int>& keep);
// Uniform over every value combination of the groups (2 or 120 values each).
GroupDistribution uniform_distribution(const TableauBcs& t, const std::vector<int>& groups);
// Total variation distance; SpaceMismatch when the group lists differ.
Rational statistical_distance(const GroupDistribution& p, const GroupDistribution& q);

}  // namespace zkgame
