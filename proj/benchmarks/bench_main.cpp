// Microbenchmarks for the hot paths: the three integration engines, the
// rescaled-family closed form, tree medians, and the decomposition pipeline.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "toricqs/basespace.hpp"
#include "toricqs/decompose.hpp"
#include "toricqs/funcspace.hpp"
#include "toricqs/measure.hpp"
#include "toricqs/quasistate.hpp"

namespace {

toricqs::SmoothFunction test_polynomial(int n) {
  std::vector<toricqs::SmoothFunction> terms;
  std::vector<int> e1(n, 0), e2(n, 0), e3(n, 0);
  e1[0] = 3;
  e2[n - 1] = 2;
  if (n > 1) e3[1] = 1;
  e3[0] += 1;
  terms.push_back(toricqs::fn::monomial(e1, 1.25));
  terms.push_back(toricqs::fn::monomial(e2, -0.5));
  terms.push_back(toricqs::fn::monomial(e3, 2.0));
  return toricqs::fn::sum(terms);
}

void bm_integrate_exact(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  toricqs::QuasiStateModel m =
      toricqs::standard_model(toricqs::BaseSpace(toricqs::make_simplex(n)));
  toricqs::SmoothFunction f = test_polynomial(n);
  for (auto _ : state)
    benchmark::DoNotOptimize(toricqs::integrate_exact(m.dh, f));
}
BENCHMARK(bm_integrate_exact)->Arg(2)->Arg(4)->Arg(6);

void bm_integrate_quadrature(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  toricqs::QuasiStateModel m =
      toricqs::standard_model(toricqs::BaseSpace(toricqs::make_simplex(n)));
  toricqs::SmoothFunction f = test_polynomial(n);
  toricqs::QuadEngine e{8, 0};
  for (auto _ : state)
    benchmark::DoNotOptimize(toricqs::integrate_quadrature(m.dh, f, e));
}
BENCHMARK(bm_integrate_quadrature)->Arg(2)->Arg(4)->Arg(6);

void bm_integrate_monte_carlo(benchmark::State& state) {
  toricqs::QuasiStateModel m =
      toricqs::standard_model(toricqs::BaseSpace(toricqs::make_simplex(3)));
  toricqs::SmoothFunction f = test_polynomial(3);
  toricqs::McEngine e{state.range(0), 42};
  for (auto _ : state)
    benchmark::DoNotOptimize(toricqs::integrate_monte_carlo(m.dh, f, e));
}
BENCHMARK(bm_integrate_monte_carlo)->Arg(10000)->Arg(100000);

void bm_mu_delta_closed_form(benchmark::State& state) {
  toricqs::SmoothFunction profile = toricqs::fn::bump({0.55}, 0.1);
  for (auto _ : state)
    benchmark::DoNotOptimize(toricqs::mu_delta_closed_form(2, 0.9, profile));
}
BENCHMARK(bm_mu_delta_closed_form);

void bm_mu_delta_via_pullback(benchmark::State& state) {
  toricqs::SmoothFunction profile = toricqs::fn::bump({0.55}, 0.1);
  for (auto _ : state)
    benchmark::DoNotOptimize(toricqs::mu_delta_via_pullback(2, 0.9, profile));
}
BENCHMARK(bm_mu_delta_via_pullback);

void bm_tree_median(benchmark::State& state) {
  int edges_count = static_cast<int>(state.range(0));
  std::vector<toricqs::EdgeSpec> edges;
  for (int i = 0; i < edges_count; ++i) {
    toricqs::EdgeSpec e;
    e.u = "v" + std::to_string(i);
    e.v = "v" + std::to_string(i + 1);
    e.length = 1.0 + 0.01 * i;
    e.density = toricqs::fn::box(0.0, e.length, 1.0 + (i % 3));
    edges.push_back(std::move(e));
  }
  toricqs::MeasuredTree t = toricqs::tree_from_edges(edges);
  for (auto _ : state)
    benchmark::DoNotOptimize(toricqs::tree_median(t));
}
BENCHMARK(bm_tree_median)->Arg(8)->Arg(64);

void bm_partition_and_evaluate(benchmark::State& state) {
  toricqs::QuasiStateModel m =
      toricqs::standard_model(toricqs::BaseSpace(toricqs::make_simplex(2)));
  toricqs::SmoothFunction f = toricqs::fn::monomial({2, 0}, 1.0);
  double gamma = state.range(0) / 100.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        toricqs::partition_and_evaluate(m, f, gamma, toricqs::QuadEngine{16, 0}));
}
BENCHMARK(bm_partition_and_evaluate)->Arg(20)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
