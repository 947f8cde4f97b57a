#include <doctest.h>

#include "helpers.hpp"
#include "zkgame/error.hpp"
#include "zkgame/json_io.hpp"

using namespace zkgame;
using namespace zkgame::testing;

namespace {

int error_line(std::string_view text) {
  try {
    parse_dimacs(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

Errc error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::kInvalidArgument;
}

// Naive CNF check over a bitmask assignment (bit v set <=> variable v true).
bool naive_cnf(const Cnf& cnf, unsigned mask) {
  for (const auto& clause : cnf.clauses) {
    bool sat = false;
    for (int lit : clause) {
      const bool val = mask >> (std::abs(lit) - 1) & 1;
      sat = sat || (lit > 0 ? val : !val);
    }
    if (!sat) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("eval_constraint") {
  const auto ms = magic_square();
  CHECK(eval_constraint(ms.constraints[5], {{2, 1}, {5, 1}, {8, -1}}));
  CHECK_FALSE(eval_constraint(ms.constraints[5], {{2, 1}, {5, 1}, {8, 1}}));

  const auto vacuous = Constraint::table({}, {LocalAssignment{}});
  CHECK(eval_constraint(vacuous, {}));

  CHECK(error_code([&] { eval_constraint(ms.constraints[0], {{0, 1}}); }) == Errc::kMissingVariable);
}

TEST_CASE("parity circuit agrees with its table") {
  const auto x = Circuit::var(0), y = Circuit::var(1), z = Circuit::var(2);
  const auto c = Constraint::circuit({0, 1, 2}, Circuit::lxor(Circuit::lxor(x, y), z));
  std::vector<LocalAssignment> rows;
  for (int idx = 0; idx < 8; ++idx) {
    LocalAssignment a{Sign((idx & 1) ? 1 : -1), Sign((idx & 2) ? 1 : -1), Sign((idx & 4) ? 1 : -1)};
    // xor of three trues-as-+1: odd number of +1
    if (__builtin_popcount(idx) % 2 == 1) rows.push_back(a);
  }
  const auto t = Constraint::table({0, 1, 2}, rows);
  for (int idx = 0; idx < 8; ++idx) {
    const LocalAssignment a{Sign((idx & 1) ? 1 : -1), Sign((idx & 2) ? 1 : -1), Sign((idx & 4) ? 1 : -1)};
    CHECK(eval_local(c, a) == eval_local(t, a));
  }
}

TEST_CASE("satisfying_set") {
  const auto lit = Constraint::circuit({0}, Circuit::var(0));
  CHECK(satisfying_set(lit) == std::vector<LocalAssignment>{{1}});

  const auto ms = magic_square();
  for (const auto& c : ms.constraints) CHECK(satisfying_set(c).size() == 4);

  CHECK(satisfying_set(Constraint::table({0, 1}, {})).empty());

  std::vector<int> wide(21);
  std::iota(wide.begin(), wide.end(), 0);
  CHECK(error_code([&] { satisfying_set(Constraint::table(wide, {})); }) == Errc::kScopeTooLarge);
}

TEST_CASE("magic square") {
  const auto ms = magic_square();
  CHECK(ms.n == 9);
  CHECK(ms.m() == 6);
  CHECK_FALSE(brute_force_satisfiable(ms).has_value());

  // products (+,+,+,+,+,-): check on the all-plus assignment
  Assignment plus;
  for (int v = 0; v < 9; ++v) plus[v] = 1;
  for (int i = 0; i < 5; ++i) CHECK(eval_constraint(ms.constraints[i], plus));
  CHECK_FALSE(eval_constraint(ms.constraints[5], plus));

  auto flipped = ms;
  flipped.constraints[5] = parity_constraint(ms.constraints[5].scope, 1);
  const auto w = brute_force_satisfiable(flipped);
  REQUIRE(w.has_value());
  for (const auto& c : flipped.constraints) CHECK(eval_constraint(c, *w));
}

TEST_CASE("brute_force_satisfiable") {
  Bcs one;
  one.n = 1;
  one.constraints.push_back(Constraint::circuit({0}, Circuit::var(0)));
  const auto w = brute_force_satisfiable(one);
  REQUIRE(w.has_value());
  CHECK(w->at(0) == 1);

  Bcs big;
  big.n = 25;
  big.constraints.push_back(Constraint::circuit({0}, Circuit::var(0)));
  CHECK(error_code([&] { brute_force_satisfiable(big); }) == Errc::kTooLarge);
}

TEST_CASE("DIMACS parsing") {
  const auto b1 = bcs_from_cnf(std::string_view("p cnf 1 1\n1 0\n"));
  CHECK(b1.n == 1);
  CHECK(b1.m() == 1);
  CHECK(satisfying_set(b1.constraints[0]) == std::vector<LocalAssignment>{{1}});

  const auto b2 = bcs_from_cnf(std::string_view("p cnf 2 1\n1 -2 0\n"));
  CHECK(satisfying_set(b2.constraints[0]).size() == 3);

  CnfOptions narrow;
  narrow.c_max = 3;
  CHECK(error_code([&] { bcs_from_cnf(std::string_view("p cnf 4 1\n1 2 3 4 0\n"), narrow); }) ==
        Errc::kScopeTooLarge);

  // comments, split clauses and the "%" trailer
  const auto cnf = parse_dimacs("c hello\np cnf 3 2\n1 -3\n0 2 0\n%\n0\n");
  CHECK(cnf.clauses == std::vector<std::vector<int>>{{1, -3}, {2}});
}

TEST_CASE("DIMACS errors carry line numbers") {
  CHECK(error_line("p cnf 2 1\n1 x 0\n") == 2);
  CHECK(error_line("c only\n1 2 0\n") == 2);
  CHECK(error_line("p cnf 2 1\n1 3 0\n") == 2);
  CHECK(error_line("p cnf 2 1\np cnf 2 1\n") == 2);
  CHECK(error_line("p cnf 2\n") == 1);
  CHECK(error_line("p cnf 2 2\n1 0\n") == 1);
  CHECK(error_line("p cnf 2 1\n1 2\n") == 2);
  CHECK(error_line("") == 1);
}

TEST_CASE("CNF ingestion agrees with a naive evaluator") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(12));
    const int m = 1 + static_cast<int>(rng.below(6));
    std::string text = "p cnf " + std::to_string(n) + " " + std::to_string(m) + "\n";
    for (int i = 0; i < m; ++i) {
      const int w = 1 + static_cast<int>(rng.below(3));
      for (int j = 0; j < w; ++j) {
        const int v = 1 + static_cast<int>(rng.below(n));
        text += std::to_string(rng.coin() ? v : -v) + " ";
      }
      text += "0\n";
    }
    const auto cnf = parse_dimacs(text);
    const auto b = bcs_from_cnf(cnf);
    bool any = false;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      Assignment a;
      for (int v = 0; v < n; ++v) a[v] = (mask >> v & 1) ? 1 : -1;
      bool all = true;
      for (const auto& c : b.constraints) all = all && eval_constraint(c, a);
      REQUIRE(all == naive_cnf(cnf, mask));
      CHECK(cnf_satisfied(cnf, a) == all);
      any = any || all;
    }
    CHECK(brute_force_satisfiable(b).has_value() == any);
  }
}

TEST_CASE("validate rejects broken systems") {
  Bcs b;
  b.n = 2;
  b.constraints.push_back(Constraint::table({0, 2}, {}));
  CHECK_THROWS_AS(b.validate(), Error);
  Bcs c;
  c.n = 1;
  c.constraints.push_back(Constraint::table({0}, {{1, 1}}));
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("BCS JSON round trip") {
  for (const auto& b : {magic_square(), tiny_3sat(), and_bcs()}) {
    const auto j = bcs_to_json(b);
    CHECK(j.at("schema_version") == kSchemaVersion);
    const auto back = bcs_from_json(j);
    CHECK(bcs_to_json(back) == j);
    CHECK(back.m() == b.m());
    for (int i = 0; i < b.m(); ++i) CHECK(satisfying_set(back.constraints[i]) == satisfying_set(b.constraints[i]));
  }
  CHECK_THROWS_AS(bcs_from_json(json{{"n", 1}}), ParseError);
  CHECK_THROWS_AS(bcs_from_json(json::parse(R"({"n":1,"constraints":[{"vars":[0]}]})")), ParseError);
}
