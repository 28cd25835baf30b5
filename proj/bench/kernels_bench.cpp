// Serial reference vs OpenMP kernels, plus a whole forward pass under each policy.
#include <benchmark/benchmark.h>

#include <vector>

#include "wdp/gnn.hpp"
#include "wdp/graph.hpp"
#include "wdp/instgen.hpp"
#include "wdp/kernels.hpp"
#include "wdp/rng.hpp"

using namespace wdp;
using namespace wdp::kernels;

namespace {

std::vector<double> random_buffer(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform() - 0.5;
  return v;
}

template <auto Affine>
void BM_affine(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const std::size_t in = 48, out = 16;
  const auto x = random_buffer(rows * in, 1);
  const auto w = random_buffer(out * in, 2);
  const auto b = random_buffer(out, 3);
  std::vector<double> y(rows * out);
  for (auto _ : state) {
    Affine(ConstView{x.data(), rows, in}, ConstView{w.data(), out, in}, b, MutView{y.data(), rows, out});
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(rows));
}

template <auto SegmentSum>
void BM_segment_sum(benchmark::State& state) {
  const auto edges = static_cast<std::size_t>(state.range(0));
  const std::size_t groups = edges / 8 + 1, q = 16;
  const auto src = random_buffer(edges * q, 4);
  std::vector<std::size_t> offset(groups + 1), index(edges);
  for (std::size_t g = 0; g <= groups; ++g) offset[g] = std::min(edges, g * 8);
  offset[groups] = edges;
  for (std::size_t e = 0; e < edges; ++e) index[e] = e;
  std::vector<double> dst(groups * q);
  for (auto _ : state) {
    SegmentSum(ConstView{src.data(), edges, q}, 0, Segments{offset, index}, MutView{dst.data(), groups, q},
               false);
    benchmark::DoNotOptimize(dst.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(edges));
}

void BM_forward(benchmark::State& state, ExecPolicy policy) {
  SynthConfig cfg;
  cfg.num_bids = static_cast<int>(state.range(0));
  cfg.num_items = cfg.num_bids / 10;
  cfg.max_units = 10;
  cfg.seed = 1;
  const auto graph = normalize_features(build_graph(gen_synthetic(cfg)));
  const auto model = init_model(16, 1);
  for (auto _ : state) benchmark::DoNotOptimize(forward(model, graph, policy));
}

}  // namespace

BENCHMARK(BM_affine<serial::affine>)->Name("affine/serial")->RangeMultiplier(4)->Range(256, 65536);
BENCHMARK(BM_affine<parallel::affine>)->Name("affine/parallel")->RangeMultiplier(4)->Range(256, 65536);
BENCHMARK(BM_segment_sum<serial::segment_sum>)->Name("segment_sum/serial")->RangeMultiplier(4)->Range(1024, 262144);
BENCHMARK(BM_segment_sum<parallel::segment_sum>)->Name("segment_sum/parallel")->RangeMultiplier(4)->Range(1024, 262144);
BENCHMARK_CAPTURE(BM_forward, serial, ExecPolicy::serial)->Arg(500)->Arg(2000);
BENCHMARK_CAPTURE(BM_forward, parallel, ExecPolicy::parallel)->Arg(500)->Arg(2000);

BENCHMARK_MAIN();
