#include <benchmark/benchmark.h>

#include "zkgame/branching_program.hpp"
#include "zkgame/game.hpp"
#include "zkgame/quantum.hpp"
#include "zkgame/tableau.hpp"
#include "zkgame/zk_sim.hpp"

using namespace zkgame;

namespace {

Bcs and_system() {
  Bcs b;
  b.n = 2;
  b.constraints.push_back(Constraint::circuit({0, 1}, Circuit::land(Circuit::var(0), Circuit::var(1))));
  return b;
}

void BM_S5Multiply(benchmark::State& state) {
  S5Element a = S5Element::from_code(17), b = S5Element::from_code(93);
  for (auto _ : state) {
    a = a * b;
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_S5Multiply);

void BM_CompileDepth2(benchmark::State& state) {
  const auto v = [](int i) { return Circuit::var(i); };
  const auto c = Constraint::circuit(
      {0, 1, 2}, Circuit::lor(Circuit::land(v(0), Circuit::negate(v(1))), Circuit::negate(Circuit::land(v(1), v(2)))));
  for (auto _ : state) benchmark::DoNotOptimize(compile_branching_program(c));
}
BENCHMARK(BM_CompileDepth2);

void BM_HonestMarginal(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto t = pzk_transform(and_system(), 4, k);
  std::vector<int> groups;
  for (int j = 1; j < k; ++j) groups.push_back(t.copy_group(0, j));
  for (auto _ : state) benchmark::DoNotOptimize(honest_marginal(t, {1, 1}, groups));
}
BENCHMARK(BM_HonestMarginal)->Arg(5)->Arg(9);

void BM_ClassicalValueMagicSquare(benchmark::State& state) {
  const auto g = cv_game(magic_square());
  for (auto _ : state) benchmark::DoNotOptimize(classical_value(g));
}
BENCHMARK(BM_ClassicalValueMagicSquare);

void BM_StrategyValueMagicSquare(benchmark::State& state) {
  const auto g = cv_game(magic_square());
  const auto s = magic_square_strategy();
  for (auto _ : state) benchmark::DoNotOptimize(strategy_value(g, s));
}
BENCHMARK(BM_StrategyValueMagicSquare);

}  // namespace

BENCHMARK_MAIN();
