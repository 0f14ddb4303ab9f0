#include <benchmark/benchmark.h>

#include <numbers>

#include "zakharov/bilinear.hpp"
#include "zakharov/estimates.hpp"
#include "zakharov/littlewood_paley.hpp"
#include "zakharov/normal_form.hpp"
#include "zakharov/sampling.hpp"
#include "zakharov/zakharov.hpp"

using namespace zakharov;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField field(const GridPtr& g, std::uint64_t seed, double norm = 1.0) {
  FieldProfile p;
  p.seed = seed;
  return random_field(g, p, {TargetKind::sobolev, {1.0}}, norm);
}

GridPtr grid_for(const benchmark::State& state) {
  return make_grid(static_cast<int>(state.range(0)), 2 * kPi / 8, static_cast<int>(state.range(1)));
}

void BM_Transform(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto f = field(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(f.physical());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g->size()));
}
BENCHMARK(BM_Transform)->Args({2, 64})->Args({2, 256})->Args({3, 32})->Args({3, 64});

void BM_Product(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto f = field(g, 1), h = field(g, 2);
  for (auto _ : state) benchmark::DoNotOptimize(product(f, h));
}
BENCHMARK(BM_Product)->Args({2, 64})->Args({2, 256})->Args({3, 32});

void BM_ShellProjection(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto f = field(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(project(f, 4, Projection::shell));
}
BENCHMARK(BM_ShellProjection)->Args({2, 128})->Args({3, 32});

void BM_BesovNorm(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto f = field(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(besov_norm(f, {1.0, 4.0, 2.0}));
}
BENCHMARK(BM_BesovNorm)->Args({2, 128})->Args({3, 32});

void BM_Omega(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto f = field(g, 1), h = field(g, 2);
  const auto params = DecompositionParams::make(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(omega(f, h, params));
}
BENCHMARK(BM_Omega)->Args({2, 64})->Args({2, 128})->Args({3, 32});

void BM_OmegaTilde(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto f = field(g, 1), h = field(g, 2).real_part();
  const auto params = DecompositionParams::make(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(omega_tilde(f, h, params));
}
BENCHMARK(BM_OmegaTilde)->Args({2, 64})->Args({3, 32});

void BM_ReferenceStep(benchmark::State& state) {
  const auto g = grid_for(state);
  const ZakharovState s0{field(g, 1), field(g, 2, 0.1), 0.0, 1.0, Nonlinearity::simplified};
  for (auto _ : state) benchmark::DoNotOptimize(reference_solve(s0, 1e-3, 1e-3));
}
BENCHMARK(BM_ReferenceStep)->Args({2, 64})->Args({2, 256})->Args({3, 32});

void BM_PicardIteration(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto u0 = field(g, 1, 0.05), N0 = field(g, 2, 0.05);
  const auto params = DecompositionParams::make(1.0);
  const auto lin = linear_flow(u0, N0, 0.1, 17, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(picard_map(lin, u0, N0, params));
}
BENCHMARK(BM_PicardIteration)->Args({2, 32})->Args({2, 64})->Unit(benchmark::kMillisecond);

void BM_EstimateRatio(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto& spec = find_estimate("quadratic-low-high/d" + std::to_string(state.range(0)));
  const RegularityPoint pt{Rational(1), Rational(0), static_cast<int>(state.range(0))};
  EstimateOptions o;
  o.samples = 4;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_ratio(spec, std::span(&pt, 1), g, o));
}
BENCHMARK(BM_EstimateRatio)->Args({2, 64})->Args({3, 16})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
