#include <random>

#include <benchmark/benchmark.h>

#include "proxyzoo/rotation.hpp"

namespace {

proxyzoo::SkewParams params(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto p = proxyzoo::SkewParams::zero(n);
  for (Eigen::Index k = 0; k < p.theta.size(); ++k) p.theta(k) = normal(rng);
  return p;
}

void BM_ExpSkew(benchmark::State& state) {
  const auto p = params(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(proxyzoo::exp_skew(p).matrix.data());
}
BENCHMARK(BM_ExpSkew)->DenseRange(2, 7);

void BM_LogRotation(benchmark::State& state) {
  const auto o = proxyzoo::random_rotation(static_cast<int>(state.range(0)), 2).matrix;
  for (auto _ : state) benchmark::DoNotOptimize(proxyzoo::log_rotation(o).theta.data());
}
BENCHMARK(BM_LogRotation)->DenseRange(2, 7);

void BM_ExpSkewGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto p = params(n, 3);
  const Eigen::MatrixXd weight = Eigen::MatrixXd::Ones(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(proxyzoo::exp_skew_gradient(p, weight).data());
}
BENCHMARK(BM_ExpSkewGradient)->DenseRange(2, 7);

void BM_RandomRotation(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(proxyzoo::random_rotation(n, rng).matrix.data());
}
BENCHMARK(BM_RandomRotation)->DenseRange(2, 7);

}  // namespace

BENCHMARK_MAIN();
