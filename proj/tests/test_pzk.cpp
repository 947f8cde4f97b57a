#include <doctest.h>

#include "helpers.hpp"
#include "zkgame/branching_program.hpp"
#include "zkgame/error.hpp"
#include "zkgame/obliviation.hpp"
#include "zkgame/tableau.hpp"

using namespace zkgame;
using namespace zkgame::testing;

namespace {

// Product by explicit cycle-following on image arrays; no table lookups.
Perm5 fold(const std::vector<Perm5>& ps) {
  Perm5 acc{0, 1, 2, 3, 4};
  for (const auto& p : ps) {
    Perm5 next{};
    for (int i = 0; i < 5; ++i) next[i] = acc[p[i]];
    acc = next;
  }
  return acc;
}

std::vector<Sign> code_bits(int code) {
  std::vector<Sign> out(kS5Bits);
  for (int j = 0; j < kS5Bits; ++j) out[j] = (code >> j & 1) ? 1 : -1;
  return out;
}

void put_group(const Bcs& b, int group, const std::vector<Sign>& bits, Assignment& a) {
  const auto& vars = b.groups[group].vars;
  for (std::size_t j = 0; j < vars.size(); ++j) a[vars[j]] = bits[j];
}

bool all_clauses_hold(const TableauBcs& t, const std::vector<Sign>& bits) {
  LocalAssignment local;
  for (const auto& c : t.bcs.constraints) {
    local.clear();
    for (int v : c.scope) local.push_back(bits[v]);
    if (!eval_local(c, local)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("obliviate: single literal, k=2") {
  const auto ob = obliviate(literal_bcs(), 2);
  CHECK(ob.flat.n == 2);
  const auto sat = satisfying_set(ob.flat.constraints[0]);
  CHECK(sat == std::vector<LocalAssignment>{{-1, -1}, {1, 1}});
  CHECK(var_name(ob.flat, ob.copy_var(0, 2)) == "x[0][2]");
}

TEST_CASE("obliviate: fiber sizes and satisfiability") {
  Rng rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(4));
    const auto b = random_table_bcs(rng, n, 1 + static_cast<int>(rng.below(3)));
    for (int k : {1, 2, 3}) {
      const auto ob = obliviate(b, k);
      for (int i = 0; i < b.m(); ++i) {
        const auto base_count = satisfying_set(b.constraints[i]).size();
        const auto width = b.constraints[i].scope.size();
        CHECK(satisfying_set(ob.flat.constraints[i]).size() == base_count << ((k - 1) * width));
      }
      CHECK(brute_force_satisfiable(ob.flat).has_value() == brute_force_satisfiable(b).has_value());
    }
  }
}

TEST_CASE("obliviate: induced map is 2^((k-1)n)-to-1") {
  const int n = 3, k = 2;
  Bcs b;
  b.n = n;
  b.constraints.push_back(Constraint::table({0, 1, 2}, {{1, 1, 1}}));
  const auto ob = obliviate(b, k);
  std::map<std::vector<Sign>, int> fibers;
  for (int mask = 0; mask < (1 << (n * k)); ++mask) {
    std::vector<Sign> copies(n * k);
    for (int v = 0; v < n * k; ++v) copies[v] = (mask >> v & 1) ? 1 : -1;
    ++fibers[induced_assignment(ob, copies)];
  }
  CHECK(fibers.size() == 8);
  for (const auto& [psi, count] : fibers) CHECK(count == 1 << ((k - 1) * n));
}

TEST_CASE("Barrington: literals, AND, constants") {
  const auto lit = compile_branching_program(Circuit::var(0), {0});
  CHECK(lit.depth() == 1);
  CHECK(lit.instructions[0].on_plus == S5Element::standard_cycle());
  CHECK(lit.instructions[0].on_minus == S5Element::identity());
  CHECK(run_pbp(lit, {{0, -1}}) == S5Element::identity());
  CHECK(run_pbp(lit, {{0, 1}}) == lit.sigma);

  const auto and_c = and_bcs().constraints[0];
  const auto p = compile_branching_program(and_c);
  CHECK(p.depth() == 4);
  CHECK(recognizes(p, and_c));

  const auto never = Constraint::circuit({0}, Circuit::constant(false));
  const auto pf = compile_branching_program(never);
  CHECK(recognizes(pf, never));
  CHECK(run_pbp(pf, {{0, 1}}) == S5Element::identity());
  CHECK(run_pbp(pf, {{0, -1}}) == S5Element::identity());

  PermutationBranchingProgram empty;
  CHECK(run_pbp(empty, {}) == S5Element::identity());
  CHECK_THROWS_AS(run_pbp(lit, {}), Error);

  const auto x = Circuit::lxor(Circuit::var(0), Circuit::var(1));
  CHECK_THROWS_AS(compile_branching_program(x, {0, 1}), Error);
  CHECK_THROWS_AS(compile_branching_program(Circuit::constant(true), {}), Error);
}

TEST_CASE("Barrington: depth 2 circuits and negation") {
  const auto v = [](int i) { return Circuit::var(i); };
  const auto c = Circuit::lor(Circuit::land(v(0), Circuit::negate(v(1))), Circuit::negate(Circuit::land(v(1), v(2))));
  const auto con = Constraint::circuit({0, 1, 2}, c);
  const auto p = compile_branching_program(con);
  CHECK(p.depth() == 16);
  CHECK(recognizes(p, con));
}

TEST_CASE("run_pbp agrees with an independent fold") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    PermutationBranchingProgram p;
    p.vars = {0, 1, 2};
    for (int i = 0; i < 6; ++i) {
      p.instructions.push_back({static_cast<int>(rng.below(3)),
                                S5Element::from_code(static_cast<int>(rng.below(kS5Order))),
                                S5Element::from_code(static_cast<int>(rng.below(kS5Order)))});
    }
    Assignment a{{0, Sign(rng.coin() ? 1 : -1)}, {1, Sign(rng.coin() ? 1 : -1)}, {2, Sign(rng.coin() ? 1 : -1)}};
    std::vector<Perm5> chosen;
    for (const auto& ins : p.instructions) chosen.push_back((a[ins.var] > 0 ? ins.on_plus : ins.on_minus).perm());
    CHECK(run_pbp(p, a).perm() == fold(chosen));
  }
}

TEST_CASE("tableau counts") {
  const auto t = tableau(and_bcs(), 4);
  CHECK(t.d(0) == 4);
  CHECK(t.clauses_of(0) == 17);
  CHECK(t.bcs.m() == 17);
  CHECK(t.permutation_vars_of(0) == 4 * 4 + 3 * 3);
  // groups: 2 copies, 16 cells, 9 randomizers
  CHECK(t.bcs.groups.size() == 2 + 16 + 9);
  CHECK(t.bcs.n == 2 + 25 * kS5Bits);
  CHECK(var_name(t.bcs, t.first_bit(t.cell_group(0, 2, 3))).rfind("T[0][2][3]", 0) == 0);
  CHECK(var_name(t.bcs, t.first_bit(t.randomizer_group(0, 1, 1))).rfind("r[0][1][1]", 0) == 0);
  CHECK(t.randomizer_group(0, 1, 0) == -1);
  CHECK(t.randomizer_group(0, 1, 4) == -1);

  int pins = 0, props = 0, prods = 0;
  for (const auto& c : t.clauses) {
    pins += c.kind == ClauseKind::kPin;
    props += c.kind == ClauseKind::kPropagate;
    prods += c.kind == ClauseKind::kProduct;
  }
  CHECK(pins == 4);
  CHECK(props == 12);
  CHECK(prods == 1);

  const auto t1 = tableau(literal_bcs(), 8);
  CHECK(t1.permutation_vars_of(0) == 8);
  for (const auto& gi : t1.group_info) CHECK(gi.kind != GroupInfo::kRandomizer);

  CHECK_THROWS_AS(tableau(and_bcs(), 3), Error);
  CHECK_THROWS_AS(pzk_transform(and_bcs(), 8, 4), Error);
  CHECK(pzk_transform(literal_bcs(), 4, 5).warnings.size() == 1);
  CHECK(pzk_transform(literal_bcs(), 8, 9).warnings.empty());
}

TEST_CASE("witness extension on a capped randomizer grid") {
  for (int ell : {4, 8}) {
    for (const auto& [b, w] : {std::pair{and_bcs(), std::vector<Sign>{1, 1}},
                               std::pair{literal_bcs(), std::vector<Sign>{1}},
                               std::pair{tiny_3sat(), std::vector<Sign>{1, 1, 1}}}) {
      const auto t = pzk_transform(b, ell, 5);
      Rng rng(ell);
      auto latent = sample_latent(t, w, rng);
      // each randomizer slot takes every S5 value once, the others held at a random fill
      for (int i = 0; i < t.m(); ++i) {
        for (std::size_t slot = 0; slot < latent.randomizers[i].size(); ++slot) {
          const auto keep = latent.randomizers[i][slot];
          for (int c = 0; c < kS5Order; ++c) {
            latent.randomizers[i][slot] = S5Element::from_code(c);
            complete_cells(t, latent);
            REQUIRE(all_clauses_hold(t, latent_bits(t, latent)));
          }
          latent.randomizers[i][slot] = keep;
        }
      }
      for (int r = 0; r < 20; ++r) CHECK(all_clauses_hold(t, latent_bits(t, sample_latent(t, w, rng))));
    }
  }
}

TEST_CASE("tableau of a satisfiable base is satisfiable") {
  const auto t = tableau(literal_bcs(), 4);
  Rng rng(2);
  const auto bits = latent_bits(t, sample_latent(t, {1}, rng));
  Assignment a;
  for (int v = 0; v < t.bcs.n; ++v) a[v] = bits[v];
  for (const auto& c : t.bcs.constraints) CHECK(eval_constraint(c, a));
  CHECK_THROWS_AS(sample_latent(t, {-1}, rng), Error);
}

TEST_CASE("unsatisfiable base gives an unsatisfiable tableau") {
  // x = +1 and x = -1: depth-1 programs, no randomizers
  Bcs b;
  b.n = 1;
  b.constraints.push_back(Constraint::circuit({0}, Circuit::var(0)));
  b.constraints.push_back(Constraint::circuit({0}, Circuit::negate(Circuit::var(0))));
  const int ell = 4;
  const auto t = tableau(b, ell);
  // Row by row over all 128 codes per cell. Each clause only reads the
  // copy and cells already fixed, so the search covers every assignment.
  for (Sign x : {Sign(-1), Sign(1)}) {
    int satisfied_constraints = 0;
    for (int i = 0; i < t.m(); ++i) {
      int completions = 0;
      Assignment a{{0, x}};
      std::function<void(int)> row = [&](int p) {
        for (int code = 0; code < 128; ++code) {
          put_group(t.bcs, t.cell_group(i, p, 1), code_bits(code), a);
          bool ok = true;
          for (int c = 0; c < t.bcs.m() && ok; ++c) {
            const auto& info = t.clauses[c];
            if (info.constraint != i) continue;
            const bool ready = info.kind == ClauseKind::kPin       ? p == 1
                               : info.kind == ClauseKind::kPropagate ? info.p + 1 == p
                                                                     : p == ell;
            if (ready) ok = eval_constraint(t.bcs.constraints[c], a);
          }
          if (!ok) continue;
          if (p == ell)
            ++completions;
          else
            row(p + 1);
        }
      };
      row(1);
      satisfied_constraints += completions > 0;
    }
    CHECK(satisfied_constraints < t.m());
  }
}
