#include <benchmark/benchmark.h>

#include <cmath>

#include "momentlab/determinant.hpp"
#include "momentlab/distributions.hpp"
#include "momentlab/divisibility.hpp"
#include "momentlab/moment_algebra.hpp"
#include "momentlab/quadrature.hpp"
#include "momentlab/simulator.hpp"
#include "momentlab/stieltjes.hpp"

using namespace momentlab;
using Q = BigRational;

namespace {

std::vector<Q> lattice(std::size_t n) { return distributions::lattice_lognormal_moments(2, Q(1, 3), n).exact_values(); }

}  // namespace

static void BM_HankelDetExact(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const auto a = lattice(2 * size);
  for (auto _ : state) benchmark::DoNotOptimize(stieltjes::hankel_det(std::span<const Q>(a), {0, size}));
}
BENCHMARK(BM_HankelDetExact)->DenseRange(2, 10, 2);

static void BM_HankelDetReal(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  PrecisionScope scope(256);
  std::vector<Real> a;
  for (const auto& v : lattice(2 * size)) a.push_back(to_real(v));
  for (auto _ : state) benchmark::DoNotOptimize(stieltjes::hankel_det(std::span<const Real>(a), {0, size}));
}
BENCHMARK(BM_HankelDetReal)->DenseRange(2, 10, 2);

static void BM_Fekete(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  const auto a = lattice(2 * size);
  for (auto _ : state) benchmark::DoNotOptimize(stieltjes::fekete_total_positivity(std::span<const Q>(a), {0, size}));
}
BENCHMARK(BM_Fekete)->DenseRange(2, 6, 1);

static void BM_MbComposeT(benchmark::State& state) {
  const auto upto = static_cast<std::size_t>(state.range(0));
  const auto m = MomentSequence::exact(lattice(upto));
  for (auto _ : state) benchmark::DoNotOptimize(algebra::mb_compose_t(m, upto));
}
BENCHMARK(BM_MbComposeT)->DenseRange(4, 16, 4);

static void BM_KattiMixedPoisson(benchmark::State& state) {
  const Precision p{128, 1e-20};
  PrecisionScope scope(p.bits);
  distributions::MixedPoissonSpec s;
  s.log_b = Q(-7, 5);
  s.N = 10;
  for (auto _ : state) {
    const auto pmf = distributions::mixed_poisson_pmf(s, 17, p);
    benchmark::DoNotOptimize(divisibility::katti_r(pmf, 16));
  }
}
BENCHMARK(BM_KattiMixedPoisson)->Unit(benchmark::kMillisecond);

static void BM_TanhSinh(benchmark::State& state) {
  PrecisionScope scope(static_cast<unsigned>(state.range(0)));
  const Real tol = ldexp(Real(1), -static_cast<int>(state.range(0)) + 16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quadrature::tanh_sinh([](const Real& x) { return exp(-x) * cos(3 * x); }, Real(0), Real(2), tol));
  }
}
BENCHMARK(BM_TanhSinh)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Simulator(benchmark::State& state) {
  simulator::JumpSpec spec;
  spec.rate = 2;
  spec.law = simulator::LognormalLaw{0, 1};
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulator::sample_compound_poisson(spec, 1, 42, trials));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(trials));
}
BENCHMARK(BM_Simulator)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
