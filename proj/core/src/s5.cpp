#include "zkgame/s5.hpp"

#include <algorithm>

#include "zkgame/error.hpp"

namespace zkgame {
namespace {

struct Tables {
  std::array<std::array<std::uint8_t, kS5Order>, kS5Order> mul{};
  std::array<std::uint8_t, kS5Order> inv{};
  std::array<bool, kS5Order> five_cycle{};

  Tables() {
    std::array<Perm5, kS5Order> perms;
    for (int c = 0; c < kS5Order; ++c) perms[c] = perm_unrank(c);
    for (int a = 0; a < kS5Order; ++a) {
      for (int b = 0; b < kS5Order; ++b) {
        Perm5 ab;
        for (int i = 0; i < 5; ++i) ab[i] = perms[a][perms[b][i]];
        mul[a][b] = static_cast<std::uint8_t>(perm_rank(ab));
      }
      Perm5 ia;
      for (int i = 0; i < 5; ++i) ia[perms[a][i]] = static_cast<std::uint8_t>(i);
      inv[a] = static_cast<std::uint8_t>(perm_rank(ia));
      // A 5-cycle moves 0 through all five points before returning.
      int x = 0, steps = 0;
      do {
        x = perms[a][x];
        ++steps;
      } while (x != 0);
      five_cycle[a] = steps == 5;
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

int perm_rank(const Perm5& perm) {
  int rank = 0;
  for (int i = 0; i < 5; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < 5; ++j) smaller += perm[j] < perm[i];
    static constexpr int kFact[5] = {24, 6, 2, 1, 1};
    rank += smaller * kFact[i];
  }
  return rank;
}

Perm5 perm_unrank(int code) {
  if (code < 0 || code >= kS5Order) {
    throw Error(Errc::kInvalidArgument, "S5 code out of range: " + std::to_string(code));
  }
  std::array<std::uint8_t, 5> pool = {0, 1, 2, 3, 4};
  int n = 5;
  Perm5 out{};
  static constexpr int kFact[5] = {24, 6, 2, 1, 1};
  for (int i = 0; i < 5; ++i) {
    const int idx = code / kFact[i];
    code %= kFact[i];
    out[i] = pool[idx];
    std::copy(pool.begin() + idx + 1, pool.begin() + n, pool.begin() + idx);
    --n;
  }
  return out;
}

S5Element S5Element::from_code(int code) {
  if (code < 0 || code >= kS5Order) {
    throw Error(Errc::kInvalidArgument, "S5 code out of range: " + std::to_string(code));
  }
  return S5Element(static_cast<std::uint8_t>(code));
}

S5Element S5Element::from_perm(const Perm5& perm) {
  std::array<bool, 5> seen{};
  for (auto v : perm) {
    if (v >= 5 || seen[v]) throw Error(Errc::kInvalidArgument, "not a permutation of 0..4");
    seen[v] = true;
  }
  return S5Element(static_cast<std::uint8_t>(perm_rank(perm)));
}

S5Element S5Element::standard_cycle() { return from_perm({1, 2, 3, 4, 0}); }

Perm5 S5Element::perm() const { return perm_unrank(code_); }

S5Element S5Element::inverse() const { return S5Element(tables().inv[code_]); }

bool S5Element::is_five_cycle() const { return tables().five_cycle[code_]; }

S5Element S5Element::operator*(S5Element rhs) const {
  return S5Element(tables().mul[code_][rhs.code_]);
}

std::string S5Element::to_string() const {
  if (is_identity()) return "e";
  const Perm5 p = perm();
  std::array<bool, 5> done{};
  std::string out;
  for (int start = 0; start < 5; ++start) {
    if (done[start] || p[start] == start) continue;
    out += "(";
    int x = start;
    bool first = true;
    while (!done[x]) {
      done[x] = true;
      if (!first) out += " ";
      out += std::to_string(x + 1);
      first = false;
      x = p[x];
    }
    out += ")";
  }
  return out;
}

std::array<std::int8_t, kS5Bits> encode7(S5Element g) {
  std::array<std::int8_t, kS5Bits> bits{};
  for (int j = 0; j < kS5Bits; ++j) bits[j] = ((g.code() >> j) & 1) ? 1 : -1;
  return bits;
}

int raw_code7(std::span<const std::int8_t> bits) {
  if (bits.size() != kS5Bits) {
    throw Error(Errc::kInvalidArgument, "S5 block must have 7 bits");
  }
  int code = 0;
  for (int j = 0; j < kS5Bits; ++j) code |= (bits[j] > 0 ? 1 : 0) << j;
  return code;
}

std::optional<S5Element> decode7(std::span<const std::int8_t> bits) {
  const int code = raw_code7(bits);
  if (code >= kS5Order) return std::nullopt;
  return S5Element::from_code(code);
}

S5Element commutator_partner(S5Element a) {
  for (int c = 0; c < kS5Order; ++c) {
    const auto b = S5Element::from_code(c);
    if (!b.is_five_cycle()) continue;
    if ((a * b * a.inverse() * b.inverse()).is_five_cycle()) return b;
  }
  throw Error(Errc::kInvalidArgument, "argument is not a 5-cycle");
}

S5Element conjugator(S5Element a, S5Element b) {
  for (int c = 0; c < kS5Order; ++c) {
    const auto g = S5Element::from_code(c);
    if (g * a * g.inverse() == b) return g;
  }
  throw Error(Errc::kInvalidArgument, "elements are not conjugate");
}

}  // namespace zkgame
