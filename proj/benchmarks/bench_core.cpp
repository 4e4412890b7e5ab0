#include <random>

#include <benchmark/benchmark.h>

#include "sasaki/delzant.hpp"
#include "sasaki/lattice.hpp"
#include "sasaki/reallink.hpp"
#include "sasaki/reeb.hpp"
#include "sasaki/verifier.hpp"

namespace {

using namespace sasaki;

void BM_SmithNormalForm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long long> dist(-50, 50);
  lattice::IntMatrix m(n, n + 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n + 2; ++j) m(i, j) = dist(rng);
  for (auto _ : state) benchmark::DoNotOptimize(lattice::smith_normal_form(m));
}
BENCHMARK(BM_SmithNormalForm)->Arg(3)->Arg(6)->Arg(10);

void BM_DelzantYpq(benchmark::State& state) {
  const ConeSpec cone = ypq_cone(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_delzant(cone));
}
BENCHMARK(BM_DelzantYpq)->Arg(2)->Arg(7)->Arg(31);

void BM_Volume(benchmark::State& state) {
  const VolumeProfile profile = make_volume_profile(ypq_cone(5, 2));
  const std::vector<double> xi{3.0, 2.5, 2.5};
  for (auto _ : state) benchmark::DoNotOptimize(volume(profile, xi));
}
BENCHMARK(BM_Volume);

void BM_MinimizeVolume(benchmark::State& state) {
  const ConeSpec cone = ypq_cone(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(minimize_volume(cone));
}
BENCHMARK(BM_MinimizeVolume)->Arg(2)->Arg(5);

void BM_Sample(benchmark::State& state) {
  const DelzantData data = build_delzant(ypq_cone(2, 1));
  const QuadricSystem system = build_system(data, reeb_coefficients(data, ypq_reeb(2, 1).xi));
  SampleOptions opts;
  opts.workers = static_cast<std::size_t>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(sample(system, static_cast<std::size_t>(state.range(0)), 0, opts));
}
BENCHMARK(BM_Sample)->Args({500, 1})->Args({500, 4})->Args({5000, 4});

void BM_VerifyLink(benchmark::State& state) {
  const DelzantData data = build_delzant(ypq_cone(2, 1));
  const ReebCoefficients coeffs = reeb_coefficients(data, ypq_reeb(2, 1).xi);
  const QuadricSystem system = build_system(data, coeffs);
  const SampleSet samples = sample(system, 500, 0);
  const ContactData ctx(coeffs, data.kernel);
  for (auto _ : state) benchmark::DoNotOptimize(verify_link(system, ctx, samples));
}
BENCHMARK(BM_VerifyLink);

}  // namespace
BENCHMARK_MAIN();
