// Serial reference kernels against their OpenMP twins.
#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "bsq/kernels.hpp"
#include "bsq/poisson.hpp"
#include "bsq/solver.hpp"

using namespace bsq;

namespace {

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N;
  std::vector<double> v(n);
  for (auto& x : v) x = N(rng);
  return v;
}

TriFactor laplacian_factor(int n) {
  std::vector<double> a(n, -1.0), b(n, 2.5), c(n, -1.0);
  return tri_factor(a, b, c);
}

void BM_TriSolveColumns(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const bool par = st.range(1) != 0;
  const auto f = laplacian_factor(n);
  const auto rhs = gaussian(static_cast<std::size_t>(n) * n, 1);
  auto x = rhs;
  for (auto _ : st) {
    x = rhs;
    if (par)
      tri_solve_columns(f, x.data(), n, Exec::Parallel);
    else
      tri_solve_columns_serial(f, x.data(), n);
    benchmark::DoNotOptimize(x.data());
  }
  st.SetItemsProcessed(st.iterations() * n * n);
}

void BM_MultiplyInplace(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const bool par = st.range(1) != 0;
  const auto m = gaussian(n, 2);
  std::vector<std::complex<double>> c(n, {1.0, 0.5});
  for (auto _ : st) {
    if (par)
      multiply_inplace(c.data(), m.data(), n, Exec::Parallel);
    else
      multiply_inplace_serial(c.data(), m.data(), n);
    benchmark::DoNotOptimize(c.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(n));
}

void BM_Advection(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const bool par = st.range(1) != 0;
  auto g = make_grid(n, n, 8.0, 16.0);
  ScalarField2D om(g, Parity::Odd), f(g, Parity::Even);
  om.v = gaussian(om.v.size(), 3);
  f.v = gaussian(f.v.size(), 4);
  const auto u = velocity_from_streamfunction(solve_streamfunction(om));
  for (auto _ : st) {
    auto a = par ? advection(u, f, true, Exec::Parallel) : advection_serial(u, f, true);
    benchmark::DoNotOptimize(a.v.data());
  }
  st.SetItemsProcessed(st.iterations() * n * n);
}

}  // namespace

BENCHMARK(BM_TriSolveColumns)->ArgsProduct({{128, 512}, {0, 1}})->ArgNames({"n", "parallel"});
BENCHMARK(BM_MultiplyInplace)->ArgsProduct({{1 << 18, 1 << 21}, {0, 1}})->ArgNames({"n", "parallel"});
BENCHMARK(BM_Advection)->ArgsProduct({{128, 256}, {0, 1}})->ArgNames({"n", "parallel"});

BENCHMARK_MAIN();
