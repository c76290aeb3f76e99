#include <benchmark/benchmark.h>

#include "marcink/fields.hpp"
#include "marcink/maximal.hpp"
#include "marcink/multiplier.hpp"
#include "marcink/norms.hpp"

using namespace marcink;

namespace {

const double kPi = 3.14159265358979323846;

fields::Field random_field(int n) {
  return fields::random_gaussian(fields::make_grid(2, n, kPi), 7);
}

void BM_TransformForward(benchmark::State& state) {
  const fields::Field f = random_field(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(fields::transform_forward(f));
}
BENCHMARK(BM_TransformForward)->Arg(64)->Arg(256)->Arg(1024);

void BM_ApplyTk(benchmark::State& state) {
  const fields::Field f = random_field(static_cast<int>(state.range(0)));
  const auto h = multiplier::BoundaryData::power_oscillation(1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(multiplier::apply_Tk(f, h, {0, -1}));
}
BENCHMARK(BM_ApplyTk)->Arg(64)->Arg(256);

void BM_HlMaximalAxis(benchmark::State& state) {
  const maximal::WeightField w =
      maximal::abs_weight(random_field(static_cast<int>(state.range(0))));
  for (auto _ : state)
    benchmark::DoNotOptimize(maximal::hl_maximal_axis(w, 1));
}
BENCHMARK(BM_HlMaximalAxis)->Arg(64)->Arg(256)->Arg(1024);

void BM_DirectionalMaximal(benchmark::State& state) {
  const maximal::WeightField w =
      maximal::abs_weight(random_field(static_cast<int>(state.range(0))));
  for (auto _ : state)
    benchmark::DoNotOptimize(maximal::directional_maximal(w, 1, 1.3));
}
BENCHMARK(BM_DirectionalMaximal)->Arg(64)->Arg(256)->Arg(1024);

void BM_StrongMaximal(benchmark::State& state) {
  const maximal::WeightField w =
      maximal::abs_weight(random_field(static_cast<int>(state.range(0))));
  for (auto _ : state)
    benchmark::DoNotOptimize(maximal::strong_maximal(w));
}
BENCHMARK(BM_StrongMaximal)->Arg(64)->Arg(256);

void BM_SmoothedProjection(benchmark::State& state) {
  const fields::Field f = random_field(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(maximal::smoothed_projection(
        f, 0, 1.0, 0, maximal::ProjectionPart::All));
}
BENCHMARK(BM_SmoothedProjection)->Arg(64)->Arg(256);

void BM_VqNorm(benchmark::State& state) {
  const auto h = multiplier::BoundaryData::lacunary_steps(
      -4, {1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0});
  for (auto _ : state)
    benchmark::DoNotOptimize(
        norms::vq_norm(h, 2.0, 0.05, 2.0,
                       static_cast<int>(state.range(0))));
}
BENCHMARK(BM_VqNorm)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
