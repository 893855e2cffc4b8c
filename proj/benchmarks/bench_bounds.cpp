#include <cmath>

#include <benchmark/benchmark.h>

#include "proxyzoo/quality_bound.hpp"
#include "proxyzoo/set_identification.hpp"
#include "proxyzoo/synthetic_dgp.hpp"

namespace {

proxyzoo::ReducedForm make_reduced_form(int n, int k, int horizon) {
  proxyzoo::DgpSpec spec;
  spec.n = n;
  spec.T = 600;
  spec.seed = 11;
  Eigen::MatrixXd a = 0.4 * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) a(i, j) = 0.03 * std::sin(1.0 + i + 2.0 * j);
      if (i > j) b(i, j) = 0.3 * std::cos(0.5 + i * j);
    }
  }
  spec.A = {a};
  spec.B0 = b;
  for (int l = 0; l < k; ++l) {
    std::vector<double> c(static_cast<std::size_t>(n), 0.0);
    c[0] = 0.5;
    for (int j = 1; j < n; ++j) c[static_cast<std::size_t>(j)] = 0.06 * std::sin(1.7 * l + 0.9 * j);
    spec.proxies.push_back({"m" + std::to_string(l + 1), c, std::nullopt});
  }
  const auto sim = proxyzoo::simulate(spec);
  std::vector<proxyzoo::ProxySeries> aligned;
  for (const auto& p : sim.proxies) aligned.push_back(proxyzoo::align_proxy(p, sim.panel, proxyzoo::MissingPolicy::zero));
  proxyzoo::VarSpec var;
  var.lag_order = 1;
  var.horizon = horizon;
  return proxyzoo::assemble_reduced_form(sim.panel, aligned, var, proxyzoo::MissingPolicy::zero);
}

void BM_SolveBound(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto rf = make_reduced_form(n, 4, 4);
  const auto sign = proxyzoo::compile_sign(proxyzoo::SignRestrictionSpec{}, rf);
  const auto grr = proxyzoo::compile_grr(rf.proxy_moments, 1.0, n);
  const auto problem = proxyzoo::make_bound_problem(rf, sign, grr, 0, 2, proxyzoo::Sense::min);
  proxyzoo::SolverConfig cfg;
  cfg.jobs = 1;
  const auto starts = proxyzoo::default_starts(n, cfg.restarts, cfg.seed);
  for (auto _ : state) benchmark::DoNotOptimize(proxyzoo::solve_bound(problem, starts, cfg).value);
}
BENCHMARK(BM_SolveBound)->DenseRange(3, 7, 2)->Unit(benchmark::kMillisecond);

void BM_SweepOneVariable(benchmark::State& state) {
  const int horizon = static_cast<int>(state.range(0));
  const auto rf = make_reduced_form(5, 4, horizon);
  const auto sign = proxyzoo::compile_sign(proxyzoo::SignRestrictionSpec{}, rf);
  std::vector<int> horizons;
  for (int h = 0; h <= horizon; ++h) horizons.push_back(h);
  proxyzoo::SolverConfig cfg;
  cfg.jobs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(proxyzoo::sweep(rf, sign, {1.0}, {0}, horizons, cfg).cells.size());
}
BENCHMARK(BM_SweepOneVariable)->Arg(6)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Cstar(benchmark::State& state) {
  const auto rf = make_reduced_form(7, static_cast<int>(state.range(0)), 1);
  const auto sign = proxyzoo::compile_sign(proxyzoo::SignRestrictionSpec{}, rf);
  proxyzoo::SolverConfig cfg;
  cfg.jobs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(proxyzoo::solve_cstar(rf.proxy_moments, sign, cfg).c_star);
}
BENCHMARK(BM_Cstar)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
