// Serial reference vs OpenMP kernels. Run with --benchmark_filter to pick
// one family; thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "sifter/capacity.hpp"
#include "sifter/eval.hpp"
#include "sifter/kernels.hpp"
#include "sifter/purifier.hpp"
#include "sifter/rng.hpp"

using namespace sifter;

namespace {

std::vector<Spin> random_spins(std::size_t n, Rng& rng) {
  const auto p = random_pattern(n, rng);
  return {p.spins().begin(), p.spins().end()};
}

template <auto Kernel>
void hebbian(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const auto pattern = random_spins(n, rng);
  std::vector<std::int64_t> weights(n * n, 0);
  for (auto _ : state) {
    Kernel(weights, n, pattern);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}

template <auto Kernel>
void fields(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  std::vector<std::int64_t> weights(n * n, 0);
  for (int k = 0; k < 10; ++k) kernels::serial::hebbian_accumulate(weights, n, random_spins(n, rng));
  const auto s = random_spins(n, rng);
  std::vector<std::int64_t> out(n);
  for (auto _ : state) {
    Kernel(weights, n, s, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}

template <auto Kernel>
void box(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  Rng rng(3);
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(side) * side);
  for (auto& p : pixels) p = static_cast<std::uint8_t>(rng.uniform_index(256));
  std::vector<double> out(pixels.size());
  for (auto _ : state) {
    Kernel(pixels, side, side, k, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * side * side);
}

struct PurifyFixture {
  TrainedPurifier purifier;
  std::vector<Image> images;
};

const PurifyFixture& purify_fixture() {
  static const PurifyFixture fixture = [] {
    SyntheticOptions opt;
    opt.test_per_class = 10;
    const auto bench = make_synthetic_benchmark(opt);
    auto cfg = PurifierConfig::defaults_for(28, 28, 1);
    PurifyFixture f{train_purifier(bench.seeds, cfg), {}};
    for (const auto& it : bench.test.items) f.images.push_back(it.image);
    return f;
  }();
  return fixture;
}

template <bool Parallel>
void purify_images(benchmark::State& state) {
  const auto& f = purify_fixture();
  for (auto _ : state) {
    auto out = Parallel ? purify_batch(f.purifier, f.images) : purify_batch_serial(f.purifier, f.images);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * f.images.size()));
}

}  // namespace

BENCHMARK(hebbian<kernels::serial::hebbian_accumulate>)->Name("hebbian/serial")->Arg(784)->Arg(3072);
BENCHMARK(hebbian<kernels::parallel::hebbian_accumulate>)->Name("hebbian/parallel")->Arg(784)->Arg(3072);
BENCHMARK(fields<kernels::serial::local_fields>)->Name("local_fields/serial")->Arg(1024)->Arg(4096);
BENCHMARK(fields<kernels::parallel::local_fields>)->Name("local_fields/parallel")->Arg(1024)->Arg(4096);
BENCHMARK(box<kernels::serial::box_mean>)->Name("box_mean/serial")->Args({256, 5})->Args({256, 21});
BENCHMARK(box<kernels::parallel::box_mean>)->Name("box_mean/parallel")->Args({256, 5})->Args({256, 21});
BENCHMARK(purify_images<false>)->Name("purify_batch/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(purify_images<true>)->Name("purify_batch/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
