#include "zkgame/tableau_oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "zkgame/error.hpp"

namespace zkgame {
namespace {

Count gcd128(Count a, Count b) {
  while (b != 0) {
    const Count r = a % b;
    a = b;
    b = r;
  }
  return a;
}

BigInt to_big(Count c) {
  BigInt hi = static_cast<std::uint64_t>(c >> 64);
  return (hi << 64) | BigInt(static_cast<std::uint64_t>(c));
}

// Latent quantities: a copy (v,t), a prefix product L_p(j) = r(1,j)...r(p-1,j)
// of constraint i, or a randomizer r(p,j) of constraint i.
struct Quantity {
  enum Kind { kCopy, kPrefix, kRandomizer } kind;
  int a, b, c;
  auto operator<=>(const Quantity&) const = default;
};

struct Factor {
  std::vector<int> coords;  // global quantity indices
  std::vector<std::pair<std::vector<int>, Count>> entries;
};

void normalize(Factor& f) {
  Count g = 0;
  for (const auto& e : f.entries) g = gcd128(g, e.second);
  if (g > 1) {
    for (auto& e : f.entries) e.second /= g;
  }
}

Factor from_map(std::vector<int> coords, const std::map<std::vector<int>, Count>& m) {
  Factor f{std::move(coords), {m.begin(), m.end()}};
  normalize(f);
  return f;
}

// Peels off coordinates whose marginal is independent of the rest; the
// test is exact (product form of counts and support).
std::vector<Factor> split_independent(Factor f) {
  std::vector<Factor> out;
  bool progress = true;
  while (progress && f.coords.size() > 1) {
    progress = false;
    for (std::size_t c = 0; c < f.coords.size(); ++c) {
      std::map<int, Count> mc;
      std::map<std::vector<int>, Count> mr;
      Count total = 0;
      for (const auto& [vals, cnt] : f.entries) {
        std::vector<int> rest = vals;
        rest.erase(rest.begin() + c);
        mc[vals[c]] += cnt;
        mr[rest] += cnt;
        total += cnt;
      }
      if (mc.size() * mr.size() != f.entries.size()) continue;
      bool product = true;
      for (const auto& [vals, cnt] : f.entries) {
        std::vector<int> rest = vals;
        rest.erase(rest.begin() + c);
        if (to_big(cnt) * to_big(total) != to_big(mc[vals[c]]) * to_big(mr[rest])) {
          product = false;
          break;
        }
      }
      if (!product) continue;
      std::map<std::vector<int>, Count> single;
      for (const auto& [v, cnt] : mc) single[{v}] = cnt;
      out.push_back(from_map({f.coords[c]}, single));
      std::vector<int> rest_coords = f.coords;
      rest_coords.erase(rest_coords.begin() + c);
      f = from_map(std::move(rest_coords), mr);
      progress = true;
      break;
    }
  }
  out.push_back(std::move(f));
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Rational GroupDistribution::prob(std::uint64_t key) const {
  const auto it = counts.find(key);
  if (it == counts.end()) return 0;
  return Rational(to_big(it->second), to_big(total));
}

int group_width(const TableauBcs& t, int group) {
  return t.group_info.at(group).kind == GroupInfo::kCopy ? 1 : kS5Bits;
}

std::uint64_t pack_values(const TableauBcs& t, const std::vector<int>& groups,
                          const std::vector<int>& values) {
  std::uint64_t key = 0;
  int shift = 0;
  for (std::size_t j = 0; j < groups.size(); ++j) {
    key |= static_cast<std::uint64_t>(values[j]) << shift;
    shift += group_width(t, groups[j]);
  }
  if (shift > 64) throw Error(Errc::kTooLarge, "group values exceed 64 packed bits");
  return key;
}

std::vector<int> unpack_values(const TableauBcs& t, const std::vector<int>& groups,
                               std::uint64_t key) {
  std::vector<int> out;
  for (int g : groups) {
    const int w = group_width(t, g);
    out.push_back(static_cast<int>(key & ((std::uint64_t{1} << w) - 1)));
    key >>= w;
  }
  return out;
}

std::vector<Sign> value_bits(const TableauBcs& t, int group, int value) {
  if (group_width(t, group) == 1) return {static_cast<Sign>(value ? 1 : -1)};
  const auto e = encode7(S5Element::from_code(value));
  return {e.begin(), e.end()};
}

int bits_value(const TableauBcs& t, int group, std::span<const Sign> bits) {
  if (group_width(t, group) == 1) return bits[0] > 0 ? 1 : 0;
  return raw_code7(bits);
}

GroupDistribution honest_marginal(const TableauBcs& t, const std::vector<Sign>& w,
                                  const std::vector<int>& groups, double guard) {
  const Bcs& base = t.obl.base;
  const int k = t.k();
  check_witness(base, w);
  {
    std::set<int> uniq(groups.begin(), groups.end());
    if (uniq.size() != groups.size()) throw Error(Errc::kInvalidArgument, "repeated group");
    for (int g : groups) {
      if (g < 0 || g >= static_cast<int>(t.group_info.size())) {
        throw Error(Errc::kInvalidArgument, "group out of range");
      }
    }
  }
  const std::set<int> requested(groups.begin(), groups.end());
  auto has = [&](int g) { return g < 0 || requested.count(g) != 0; };  // -1: boundary constant

  // A cell is derived from the cell above and its two randomizers when
  // all of them are requested too (the propagation rule of the latent).
  std::vector<char> derived(groups.size(), 0);
  for (std::size_t o = 0; o < groups.size(); ++o) {
    const auto& gi = t.group_info[groups[o]];
    if (gi.kind != GroupInfo::kCell || gi.b < 2) continue;
    const int i = gi.a, p = gi.b, q = gi.c;
    derived[o] = has(t.cell_group(i, p - 1, q)) && has(t.randomizer_group(i, p - 1, q - 1)) &&
                 has(t.randomizer_group(i, p - 1, q));
  }

  // Quantities needed by the non-derived outputs.
  std::map<Quantity, int> qindex;
  std::vector<Quantity> quantities;
  auto need = [&](Quantity q) {
    auto [it, fresh] = qindex.emplace(q, static_cast<int>(quantities.size()));
    if (fresh) quantities.push_back(q);
    return it->second;
  };
  std::vector<std::vector<int>> output_deps(groups.size());
  for (std::size_t o = 0; o < groups.size(); ++o) {
    if (derived[o]) continue;
    const auto& gi = t.group_info[groups[o]];
    if (gi.kind == GroupInfo::kCopy) {
      output_deps[o].push_back(need({Quantity::kCopy, gi.a, gi.b, 0}));
    } else if (gi.kind == GroupInfo::kRandomizer) {
      output_deps[o].push_back(need({Quantity::kRandomizer, gi.a, gi.b, gi.c}));
    } else {
      const int i = gi.a, p = gi.b, q = gi.c, d = t.d(i);
      for (int j : {q - 1, q}) {
        if (p >= 2 && j >= 1 && j <= d - 1) output_deps[o].push_back(need({Quantity::kPrefix, i, p, j}));
      }
    }
  }

  // Independent factors of the latent.
  std::vector<Factor> factors;
  std::map<int, std::vector<int>> copies_of;  // v -> requested t's
  std::map<std::pair<int, int>, std::vector<Quantity>> boundary_of;
  for (const auto& q : quantities) {
    if (q.kind == Quantity::kCopy) {
      copies_of[q.a].push_back(q.b);
    } else {
      boundary_of[{q.a, q.c}].push_back(q);
    }
  }
  for (const auto& [v, ts] : copies_of) {
    std::map<std::vector<int>, Count> m;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (k - 1)); ++mask) {
      std::vector<int> all(k + 1);
      int prod = 1;
      for (int tt = 1; tt < k; ++tt) {
        all[tt] = ((mask >> (tt - 1)) & 1) ? 1 : -1;
        prod *= all[tt];
      }
      all[k] = prod * w[v];
      std::vector<int> proj;
      for (int tt : ts) proj.push_back(all[tt]);
      m[proj] += 1;
    }
    std::vector<int> coords;
    for (int tt : ts) coords.push_back(qindex.at({Quantity::kCopy, v, tt, 0}));
    factors.push_back(from_map(std::move(coords), m));
  }
  for (const auto& [key, qs] : boundary_of) {
    const auto [i, j] = key;
    int last = 0;
    std::set<int> prefix_rows, rand_rows;
    for (const auto& q : qs) {
      (q.kind == Quantity::kPrefix ? prefix_rows : rand_rows).insert(q.b);
      last = std::max(last, q.kind == Quantity::kPrefix ? q.b - 1 : q.b);
    }
    // State: current prefix product, then recorded values in row order.
    std::map<std::vector<int>, Count> states{{{0}, 1}};
    std::vector<int> coords;
    for (int p = 1; p <= last + 1; ++p) {
      if (prefix_rows.count(p)) {
        std::map<std::vector<int>, Count> next;
        for (const auto& [s, c] : states) {
          auto s2 = s;
          s2.push_back(s[0]);
          next[s2] += c;
        }
        states.swap(next);
        coords.push_back(qindex.at({Quantity::kPrefix, i, p, j}));
      }
      if (p > last) break;
      const bool record = rand_rows.count(p) != 0;
      std::map<std::vector<int>, Count> next;
      for (const auto& [s, c] : states) {
        const auto cur = S5Element::from_code(s[0]);
        for (int r = 0; r < kS5Order; ++r) {
          auto s2 = s;
          s2[0] = (cur * S5Element::from_code(r)).code();
          if (record) s2.push_back(r);
          next[s2] += c;
        }
      }
      states.swap(next);
      if (record) coords.push_back(qindex.at({Quantity::kRandomizer, i, p, j}));
    }
    std::map<std::vector<int>, Count> recs;
    for (const auto& [s, c] : states) recs[std::vector<int>(s.begin() + 1, s.end())] += c;
    for (auto& f : split_independent(from_map(std::move(coords), recs))) factors.push_back(std::move(f));
  }

  std::vector<int> factor_of(quantities.size(), -1);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    for (int q : factors[f].coords) factor_of[q] = static_cast<int>(f);
  }

  // Blocks: outputs joined through shared factors.
  UnionFind uf(static_cast<int>(factors.size()));
  for (const auto& deps : output_deps) {
    for (std::size_t a = 1; a < deps.size(); ++a) uf.unite(factor_of[deps[0]], factor_of[deps[a]]);
  }
  std::map<int, std::vector<int>> block_outputs, block_factors;
  std::vector<int> constant_outputs;
  for (std::size_t o = 0; o < groups.size(); ++o) {
    if (derived[o]) continue;
    if (output_deps[o].empty()) {
      constant_outputs.push_back(static_cast<int>(o));
    } else {
      block_outputs[uf.find(factor_of[output_deps[o][0]])].push_back(static_cast<int>(o));
    }
  }
  for (std::size_t f = 0; f < factors.size(); ++f) block_factors[uf.find(static_cast<int>(f))].push_back(static_cast<int>(f));

  std::vector<int> qvalue(quantities.size(), 0);
  auto output_value = [&](int o) -> int {
    const auto& gi = t.group_info[groups[o]];
    if (gi.kind == GroupInfo::kCopy) return qvalue[qindex.at({Quantity::kCopy, gi.a, gi.b, 0})] > 0;
    if (gi.kind == GroupInfo::kRandomizer) return qvalue[qindex.at({Quantity::kRandomizer, gi.a, gi.b, gi.c})];
    const int i = gi.a, p = gi.b, q = gi.c, d = t.d(i);
    auto prefix = [&](int jj) {
      if (p < 2 || jj < 1 || jj > d - 1) return S5Element();
      return S5Element::from_code(qvalue[qindex.at({Quantity::kPrefix, i, p, jj})]);
    };
    const auto& ins = t.programs[i].instructions[q - 1];
    const auto first = w[ins.var] > 0 ? ins.on_plus : ins.on_minus;
    return (prefix(q - 1).inverse() * first * prefix(q)).code();
  };

  struct Block {
    std::vector<int> outputs;
    std::vector<std::pair<std::vector<int>, Count>> entries;
  };
  std::vector<Block> blocks;
  for (const auto& [root, outs] : block_outputs) {
    const auto& fs = block_factors[root];
    double size = 1;
    for (int f : fs) size *= static_cast<double>(factors[f].entries.size());
    if (size > guard) throw Error(Errc::kTooLarge, "marginal block exceeds the enumeration guard");
    if (outs.size() * kS5Bits > 64) throw Error(Errc::kTooLarge, "too many outputs in one block");
    std::unordered_map<std::uint64_t, Count> acc;
    std::vector<std::size_t> idx(fs.size(), 0);
    for (;;) {
      Count c = 1;
      for (std::size_t a = 0; a < fs.size(); ++a) {
        const auto& e = factors[fs[a]].entries[idx[a]];
        c *= e.second;
        for (std::size_t z = 0; z < e.first.size(); ++z) qvalue[factors[fs[a]].coords[z]] = e.first[z];
      }
      std::uint64_t key = 0;
      for (std::size_t z = 0; z < outs.size(); ++z) {
        key |= static_cast<std::uint64_t>(output_value(outs[z])) << (kS5Bits * z);
      }
      acc[key] += c;
      std::size_t a = 0;
      while (a < fs.size() && ++idx[a] == factors[fs[a]].entries.size()) idx[a++] = 0;
      if (a == fs.size()) break;
    }
    Block b{outs, {}};
    for (const auto& [key, c] : acc) {
      std::vector<int> vals;
      for (std::size_t z = 0; z < outs.size(); ++z) vals.push_back(static_cast<int>((key >> (kS5Bits * z)) & 127));
      b.entries.emplace_back(std::move(vals), c);
    }
    Count g = 0;
    for (const auto& e : b.entries) g = gcd128(g, e.second);
    for (auto& e : b.entries) e.second /= g;
    blocks.push_back(std::move(b));
  }

  GroupDistribution out;
  out.groups = groups;
  double size = 1;
  for (const auto& b : blocks) size *= static_cast<double>(b.entries.size());
  if (size > guard) throw Error(Errc::kTooLarge, "joint marginal exceeds the enumeration guard");
  std::vector<int> values(groups.size(), 0);
  for (int o : constant_outputs) values[o] = output_value(o);
  std::vector<int> pos_of(t.group_info.size(), -1);
  for (std::size_t o = 0; o < groups.size(); ++o) pos_of[groups[o]] = static_cast<int>(o);
  // Derived cells, top row first.
  std::vector<int> derived_order;
  for (std::size_t o = 0; o < groups.size(); ++o) {
    if (derived[o]) derived_order.push_back(static_cast<int>(o));
  }
  std::sort(derived_order.begin(), derived_order.end(), [&](int a, int b) {
    return t.group_info[groups[a]].b < t.group_info[groups[b]].b;
  });
  std::vector<std::size_t> idx(blocks.size(), 0);
  for (;;) {
    Count c = 1;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& e = blocks[b].entries[idx[b]];
      c *= e.second;
      for (std::size_t z = 0; z < blocks[b].outputs.size(); ++z) values[blocks[b].outputs[z]] = e.first[z];
    }
    for (int o : derived_order) {
      const auto& gi = t.group_info[groups[o]];
      const int i = gi.a, p = gi.b, q = gi.c;
      auto rand = [&](int jj) {
        const int g = t.randomizer_group(i, p - 1, jj);
        return g < 0 ? S5Element() : S5Element::from_code(values[pos_of[g]]);
      };
      const auto above = S5Element::from_code(values[pos_of[t.cell_group(i, p - 1, q)]]);
      values[o] = (rand(q - 1).inverse() * above * rand(q)).code();
    }
    out.counts[pack_values(t, groups, values)] += c;
    out.total += c;
    std::size_t b = 0;
    while (b < blocks.size() && ++idx[b] == blocks[b].entries.size()) idx[b++] = 0;
    if (b == blocks.size()) break;
  }
  return out;
}

GroupDistribution marginalize(const TableauBcs& t, const GroupDistribution& d,
                              const std::vector<int>& keep) {
  std::vector<int> pos;
  for (int g : keep) {
    const auto it = std::find(d.groups.begin(), d.groups.end(), g);
    if (it == d.groups.end()) throw Error(Errc::kSpaceMismatch, "group not in distribution");
    pos.push_back(static_cast<int>(it - d.groups.begin()));
  }
  GroupDistribution out;
  out.groups = keep;
  out.total = d.total;
  for (const auto& [key, c] : d.counts) {
    const auto vals = unpack_values(t, d.groups, key);
    std::vector<int> kept;
    for (int p : pos) kept.push_back(vals[p]);
    out.counts[pack_values(t, keep, kept)] += c;
  }
  return out;
}

GroupDistribution uniform_distribution(const TableauBcs& t, const std::vector<int>& groups) {
  GroupDistribution out;
  out.groups = groups;
  std::vector<int> values(groups.size(), 0);
  for (;;) {
    out.counts[pack_values(t, groups, values)] = 1;
    out.total += 1;
    std::size_t j = 0;
    while (j < groups.size() && ++values[j] == (group_width(t, groups[j]) == 1 ? 2 : kS5Order)) values[j++] = 0;
    if (j == groups.size()) break;
  }
  return out;
}

Rational statistical_distance(const GroupDistribution& p, const GroupDistribution& q) {
  if (p.groups != q.groups) throw Error(Errc::kSpaceMismatch, "distributions over different groups");
  // Common denominator in 128 bits when it fits; BigInt otherwise.
  {
    const Count g = gcd128(p.total, q.total);
    const Count sp = q.total / g, sq = p.total / g;
    Count common = 0, sum = 0;
    bool fits = !__builtin_mul_overflow(p.total, sp, &common);
    for (auto it = p.counts.begin(); fits && it != p.counts.end(); ++it) {
      const auto jt = q.counts.find(it->first);
      Count a = 0, b = 0;
      fits = !__builtin_mul_overflow(it->second, sp, &a) &&
             !__builtin_mul_overflow(jt == q.counts.end() ? Count{0} : jt->second, sq, &b) &&
             !__builtin_add_overflow(sum, a > b ? a - b : b - a, &sum);
    }
    for (auto it = q.counts.begin(); fits && it != q.counts.end(); ++it) {
      if (p.counts.count(it->first)) continue;
      Count b = 0;
      fits = !__builtin_mul_overflow(it->second, sq, &b) && !__builtin_add_overflow(sum, b, &sum);
    }
    if (fits) return Rational(to_big(sum), 2 * to_big(common));
  }
  const BigInt np = to_big(p.total), nq = to_big(q.total);
  BigInt sum = 0;
  for (const auto& [key, c] : p.counts) {
    const auto it = q.counts.find(key);
    const BigInt diff = to_big(c) * nq - (it == q.counts.end() ? BigInt(0) : to_big(it->second) * np);
    sum += diff < 0 ? BigInt(-diff) : diff;
  }
  for (const auto& [key, c] : q.counts) {
    if (!p.counts.count(key)) sum += to_big(c) * np;
  }
  return Rational(sum, 2 * np * nq);
}

}  // namespace zkgame
