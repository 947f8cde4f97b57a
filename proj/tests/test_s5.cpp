#include <doctest.h>

#include <set>

#include "zkgame/s5.hpp"

using namespace zkgame;

namespace {

// Composition straight from the image lists, independent of the table.
Perm5 compose(const Perm5& a, const Perm5& b) {
  Perm5 out{};
  for (int i = 0; i < 5; ++i) out[i] = a[b[i]];
  return out;
}

int cycle_type_len(const Perm5& p) {
  int longest = 0;
  for (int s = 0; s < 5; ++s) {
    int len = 1, x = p[s];
    while (x != s) {
      x = p[x];
      ++len;
    }
    longest = std::max(longest, len);
  }
  return longest;
}

}  // namespace

TEST_CASE("rank and unrank are inverse bijections") {
  std::set<Perm5> seen;
  for (int c = 0; c < kS5Order; ++c) {
    const auto p = perm_unrank(c);
    CHECK(perm_rank(p) == c);
    seen.insert(p);
  }
  CHECK(seen.size() == 120);
  CHECK(S5Element::identity().code() == 0);
  CHECK(perm_unrank(0) == Perm5{0, 1, 2, 3, 4});
}

TEST_CASE("multiplication table matches direct composition") {
  for (int a = 0; a < kS5Order; ++a) {
    for (int b = 0; b < kS5Order; ++b) {
      const auto x = S5Element::from_code(a), y = S5Element::from_code(b);
      REQUIRE((x * y).perm() == compose(perm_unrank(a), perm_unrank(b)));
    }
  }
}

TEST_CASE("group axioms hold exhaustively") {
  const auto e = S5Element::identity();
  for (int a = 0; a < kS5Order; ++a) {
    const auto x = S5Element::from_code(a);
    CHECK(x * x.inverse() == e);
    CHECK(x.inverse() * x == e);
    CHECK(x * e == x);
    for (int b = 0; b < kS5Order; ++b) {
      const auto y = S5Element::from_code(b);
      for (int c = 0; c < kS5Order; ++c) {
        const auto z = S5Element::from_code(c);
        if ((x * y) * z != x * (y * z)) FAIL("associativity fails at " << a << "," << b << "," << c);
      }
    }
  }
}

TEST_CASE("five-cycles") {
  int count = 0;
  for (int c = 0; c < kS5Order; ++c) {
    const auto x = S5Element::from_code(c);
    CHECK(x.is_five_cycle() == (cycle_type_len(x.perm()) == 5));
    count += x.is_five_cycle();
  }
  CHECK(count == 24);
  const auto s = S5Element::standard_cycle();
  CHECK(s.is_five_cycle());
  CHECK(s.perm() == Perm5{1, 2, 3, 4, 0});
  CHECK(s.to_string() == "(1 2 3 4 5)");
  CHECK(S5Element::identity().to_string() == "e");
}

TEST_CASE("commutator partner and conjugator") {
  for (int c = 0; c < kS5Order; ++c) {
    const auto a = S5Element::from_code(c);
    if (!a.is_five_cycle()) continue;
    const auto b = commutator_partner(a);
    CHECK(b.is_five_cycle());
    CHECK((a * b * a.inverse() * b.inverse()).is_five_cycle());
    for (int d = 0; d < kS5Order; ++d) {
      const auto t = S5Element::from_code(d);
      if (!t.is_five_cycle()) continue;
      const auto g = conjugator(a, t);
      CHECK(g * a * g.inverse() == t);
    }
  }
}

TEST_CASE("seven-bit encoding") {
  for (int c = 0; c < kS5Order; ++c) {
    const auto x = S5Element::from_code(c);
    const auto bits = encode7(x);
    CHECK(raw_code7(bits) == c);
    const auto back = decode7(bits);
    REQUIRE(back.has_value());
    CHECK(*back == x);
  }
  for (int c = 120; c < 128; ++c) {
    std::array<std::int8_t, kS5Bits> bits{};
    for (int j = 0; j < kS5Bits; ++j) bits[j] = (c >> j & 1) ? 1 : -1;
    CHECK_FALSE(decode7(bits).has_value());
  }
  // bit j set <=> +1
  const auto one = encode7(S5Element::from_code(1));
  CHECK(one[0] == 1);
  CHECK(one[1] == -1);
}
