#include <benchmark/benchmark.h>

#include "zombie/simulator.hpp"
#include "zombie/table.hpp"

using namespace zombie;

namespace {

const Engine& engine() {
  static const Engine e;
  return e;
}

Execution exec_of(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_TurnModel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(TurnModel<double>(exec_of(state)).size());
}

void BM_RecursiveTable(benchmark::State& state) {
  shared_model<double>();  // built once per process
  for (auto _ : state) {
    TurnSolver solver({DecisionMode::recursive});
    benchmark::DoNotOptimize(generate_table(solver, exec_of(state)).combinations());
  }
}

void BM_Tournament(benchmark::State& state) {
  TournamentConfig cfg;
  cfg.players = {PolicyKind::parse("optimal"), PolicyKind::parse("simple")};
  cfg.games = 5000;
  cfg.exec = exec_of(state);
  engine();
  for (auto _ : state) benchmark::DoNotOptimize(run_tournament(engine(), cfg).policies[0].tally.wins);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.games));
}

}  // namespace

// argument 0 runs the serial reference, 1 the OpenMP kernel
BENCHMARK(BM_TurnModel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RecursiveTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Tournament)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
