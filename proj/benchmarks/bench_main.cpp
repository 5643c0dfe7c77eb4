#include <benchmark/benchmark.h>

#include "mlvn/board.hpp"
#include "mlvn/mcts.hpp"
#include "mlvn/playout.hpp"
#include "mlvn/selfplay.hpp"
#include "mlvn/valuefn.hpp"

using namespace mlvn;

static void BM_Rollout9x9(benchmark::State& state) {
  Rng rng(1);
  const Board empty(9, 7.5);
  for (auto _ : state) benchmark::DoNotOptimize(rollout(empty, rng, 243));
}
BENCHMARK(BM_Rollout9x9);

static void BM_SelfPlayGame9x9(benchmark::State& state) {
  const Policy policy = light_policy();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_game(policy, 9, ++seed).territory_diff);
}
BENCHMARK(BM_SelfPlayGame9x9);

static void BM_EncodeFeatures(benchmark::State& state) {
  const GameRecord g = generate_game(light_policy(), 9, 5);
  const Board b = g.position_at(g.moves.size() / 2);
  for (auto _ : state) benchmark::DoNotOptimize(encode_features(b));
}
BENCHMARK(BM_EncodeFeatures);

static void BM_ForwardBatch(benchmark::State& state) {
  const NetworkParams p = init_params(ArchConfig{}, 1);
  const GameRecord g = generate_game(light_policy(), 9, 7);
  std::vector<FeatureTensor> feats;
  for (int i = 0; i < state.range(0); ++i) feats.push_back(encode_features(g.position_at(i % g.moves.size())));
  for (auto _ : state) benchmark::DoNotOptimize(forward_batch(p, feats));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ForwardBatch)->Arg(1)->Arg(16)->Arg(64);

static void BM_TrainStep(benchmark::State& state) {
  const ArchConfig arch;
  const NetworkParams p = init_params(arch, 1);
  Rng rng(3);
  std::vector<TrainingRecord> batch;
  for (int i = 0; i < 32; ++i) {
    auto r = sample_positions(generate_game(light_policy(), 9, 100 + i), 1, arch.grid, rng);
    batch.push_back(r.front());
  }
  std::vector<float> grad;
  for (auto _ : state) benchmark::DoNotOptimize(loss_and_grad<float>(p, batch, &grad).total);
}
BENCHMARK(BM_TrainStep);

static void BM_Search(benchmark::State& state) {
  NetworkEvaluator eval(init_params(ArchConfig{}, 1));
  SearchConfig cfg;
  cfg.playouts = static_cast<int>(state.range(0));
  const Board empty(9, 7.5);
  for (auto _ : state) benchmark::DoNotOptimize(search(empty, cfg, eval, 7.5).best);
}
BENCHMARK(BM_Search)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
