#include <benchmark/benchmark.h>

#include "bresse/characteristic.hpp"
#include "bresse/discretization.hpp"
#include "bresse/simulator.hpp"
#include "bresse/spectral.hpp"

using namespace bresse;

namespace {

PhysicalParams poly_one() {
  PhysicalParams p;
  p.ell = 1.0;
  p.k2 = 2.0;
  return p;
}

GeneratorMatrix build(int nx, int ns) {
  KernelSpec k(0.5, 1.0);
  return assemble_generator(poly_one(), k, BoundaryCondition::DDD, make_grid(1.0, nx),
                            build_memory_grid(k, ns, 1e-8));
}

} // namespace

static void BM_Assembly(benchmark::State &st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(build((int)st.range(0), 32));
}
BENCHMARK(BM_Assembly)->Arg(40)->Arg(160)->Arg(640)->Unit(benchmark::kMillisecond);

static void BM_MidpointStep(benchmark::State &st) {
  auto G = build((int)st.range(0), 32);
  MidpointStepper S(G.A, 0.05);
  Vec u = build_initial_state(G, InitialCondition{});
  for (auto _ : st) {
    u = S.step(u);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_MidpointStep)->Arg(40)->Arg(160)->Arg(640)->Unit(benchmark::kMicrosecond);

static void BM_ResolventNorm(benchmark::State &st) {
  auto G = build((int)st.range(0), 32);
  EnergyFactor C(G.B);
  for (auto _ : st)
    benchmark::DoNotOptimize(resolvent_norm(G, C, 31.4));
}
BENCHMARK(BM_ResolventNorm)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_CharPoint(benchmark::State &st) {
  PhysicalParams p;
  p.timoshenko = true;
  p.k2 = 2.0;
  KernelSpec k(0.5, 1.0);
  cplx lam(-0.1, 40.0);
  for (auto _ : st)
    benchmark::DoNotOptimize(char_point(p, k, lam));
}
BENCHMARK(BM_CharPoint);
BENCHMARK_MAIN();
