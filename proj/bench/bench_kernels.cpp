#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <random>

#include "chdg/benchmarks.hpp"
#include "chdg/hybrid_chdg.hpp"
#include "chdg/hybrid_hdg.hpp"

using namespace chdg;

namespace {

// Plane wave benchmark on an n x n grid, degree 3.
struct Fixture {
  Discretization disc;
  ProblemConfig cfg;
  ChdgOperator op;
  Vector g;

  explicit Fixture(int n)
      : disc(generate_structured_unit_square(n, SideTags{}), 3),
        cfg(make_benchmark(BenchmarkId::plane_wave).problem()),
        op(disc, cfg),
        g(op.size()) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> d;
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = Complex(d(rng), d(rng));
  }
};

Fixture& fixture(int n) {
  static std::map<int, std::unique_ptr<Fixture>> cache;
  auto& f = cache[n];
  if (!f) f = std::make_unique<Fixture>(n);
  return *f;
}

template <Vector (ChdgOperator::*Apply)(const Vector&) const>
void scattering(benchmark::State& state) {
  Fixture& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize((f.op.*Apply)(f.g));
  state.counters["dofs"] = static_cast<double>(f.op.size());
}

void chdg_factorization(benchmark::State& state) {
  Fixture& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ChdgOperator(f.disc, f.cfg).size());
}

void hdg_factorization(benchmark::State& state) {
  Fixture& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(HdgFactorization(f.disc, f.cfg).size());
}

}  // namespace

BENCHMARK(scattering<&ChdgOperator::scattering_apply>)->Name("scattering/parallel")->Arg(16)->Arg(32);
BENCHMARK(scattering<&ChdgOperator::scattering_apply_reference>)->Name("scattering/reference")->Arg(16)->Arg(32);
BENCHMARK(scattering<&ChdgOperator::scattering_adjoint_apply>)->Name("scattering_adjoint/parallel")->Arg(16)->Arg(32);
BENCHMARK(scattering<&ChdgOperator::scattering_adjoint_apply_reference>)
    ->Name("scattering_adjoint/reference")
    ->Arg(16)
    ->Arg(32);
BENCHMARK(chdg_factorization)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(hdg_factorization)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
