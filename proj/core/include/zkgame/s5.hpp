#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace zkgame {

inline constexpr int kS5Order = 120;
inline constexpr int kS5Bits = 7;

// Images of 0..4 under a permutation.
using Perm5 = std::array<std::uint8_t, 5>;

// Element of the symmetric group on five points, stored as the
// lexicographic rank of its image list (identity = 0). Products are
// function composition: (a * b)(i) = a(b(i)).
class S5Element {
 public:
  constexpr S5Element() = default;

  static S5Element from_code(int code);
  static S5Element from_perm(const Perm5& perm);
  static S5Element identity() { return S5Element(); }
  // The 5-cycle (1 2 3 4 5), i.e. i -> i+1 mod 5 on 0-based points.
  static S5Element standard_cycle();

  int code() const { return code_; }
  Perm5 perm() const;
  S5Element inverse() const;
  bool is_identity() const { return code_ == 0; }
  bool is_five_cycle() const;
  // Cycle notation over 1..5, e.g. "(1 2 3 4 5)"; "e" for the identity.
  std::string to_string() const;

  S5Element operator*(S5Element rhs) const;
  friend bool operator==(S5Element, S5Element) = default;
  friend auto operator<=>(S5Element, S5Element) = default;

 private:
  explicit constexpr S5Element(std::uint8_t code) : code_(code) {}
  std::uint8_t code_ = 0;
};

// Rank <-> permutation, independent of the multiplication table.
int perm_rank(const Perm5& perm);
Perm5 perm_unrank(int code);

// Seven sign-valued bits for a code (bit j, LSB first, is +1 when set).
std::array<std::int8_t, kS5Bits> encode7(S5Element g);
// Raw 7-bit code 0..127 of a sign block.
int raw_code7(std::span<const std::int8_t> bits);
// nullopt for the eight invalid codes 120..127.
std::optional<S5Element> decode7(std::span<const std::int8_t> bits);

// Smallest-code 5-cycle b such that the commutator a b a^-1 b^-1 of the
// given 5-cycle a is again a 5-cycle.
S5Element commutator_partner(S5Element five_cycle);
// Some g with g a g^-1 == b, for 5-cycles a and b.
S5Element conjugator(S5Element a, S5Element b);

}  // namespace zkgame
