#include <benchmark/benchmark.h>

#include <memory>

#include "blab/bergman.hpp"
#include "blab/capacity.hpp"
#include "blab/dynamics.hpp"
#include "blab/potential.hpp"

using namespace blab;

static void BM_ExtremalSolve(benchmark::State& st) {
  auto g = std::make_shared<const GridDomain>(rasterize(DomainSpec::unit_disc(), 1.0 / st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(extremal_numeric(g, BallSpec{0.0, 0.25}, 1e-8));
  st.counters["cells"] = static_cast<double>(g->count());
}
BENCHMARK(BM_ExtremalSolve)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_GreenSolve(benchmark::State& st) {
  auto g = std::make_shared<const GridDomain>(rasterize(DomainSpec::slit_disc(), 1.0 / st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(green_numeric(g, cplx(-0.5, 0.1), 1e-10));
}
BENCHMARK(BM_GreenSolve)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_FittedGram(benchmark::State& st) {
  auto spec = DomainSpec::unit_disc();
  QuadratureRule q = fitted_quadrature(spec);
  for (auto _ : st) benchmark::DoNotOptimize(gram(q, static_cast<int>(st.range(0)), spec));
  st.counters["nodes"] = static_cast<double>(q.size());
}
BENCHMARK(BM_FittedGram)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_KernelEval(benchmark::State& st) {
  auto spec = DomainSpec::unit_disc();
  OrthoBasis b = gram(fitted_quadrature(spec), 40, spec);
  cplx z(0.3, 0.1);
  for (auto _ : st) {
    benchmark::DoNotOptimize(b.K(z, cplx(-0.2, 0.4)));
    z += 1e-9;
  }
}
BENCHMARK(BM_KernelEval);

static void BM_Fekete(benchmark::State& st) {
  FeketeOptions o;
  o.restarts = 1;
  for (auto _ : st)
    benchmark::DoNotOptimize(fekete_points(CompactSetSpec(Interval{-1, 1}), static_cast<int>(st.range(0)), o));
}
BENCHMARK(BM_Fekete)->Arg(32)->Arg(64)->UseRealTime()->Unit(benchmark::kMillisecond);

static void BM_EscapeGreen(benchmark::State& st) {
  PolynomialMap q({-1, 0, 1});
  cplx w(0.1, 1.2);
  for (auto _ : st) {
    benchmark::DoNotOptimize(escape_green(q, w));
    w += 1e-9;
  }
}
BENCHMARK(BM_EscapeGreen);

BENCHMARK_MAIN();
