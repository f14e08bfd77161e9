#include <benchmark/benchmark.h>

#include <tangentlab/evolve.hpp>
#include <tangentlab/projection.hpp>
#include <tangentlab/random_matrix.hpp>
#include <tangentlab/systems.hpp>
#include <tangentlab/tangent.hpp>

using namespace tangentlab;

namespace {

FieldChart two_site_chart() {
  FieldChart c;
  c.phi_c = RVector::Zero(2);
  c.pi_c = RVector::Zero(2);
  c.kernel = RMatrix::Identity(2, 2);
  return c;
}

ProductChart coupled_chart() {
  ProductChart pc;
  pc.particle = {0.3, 0.0, 0.3, 1.0};
  pc.field.phi_c = RVector::Constant(1, 0.1);
  pc.field.pi_c = RVector::Zero(1);
  pc.field.kernel = RMatrix::Identity(1, 1);
  pc.g = 0.2;
  return pc;
}

void BM_ParticleStateBuild(benchmark::State& state) {
  const ParticleChart c{0.0, 0.5, 0.5, 1.0};
  auto g = particle_grid(c, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(particle_state(c, g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ParticleStateBuild)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_FieldStateBuild2D(benchmark::State& state) {
  const FieldChart c = two_site_chart();
  auto g = field_grid(c, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(field_state(c, g));
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_FieldStateBuild2D)->RangeMultiplier(2)->Range(32, 128)->Complexity();

void BM_ApplyHamiltonian2D(benchmark::State& state) {
  const FieldChart c = two_site_chart();
  auto g = field_grid(c, static_cast<int>(state.range(0)));
  const HamiltonianSpec h = field_hamiltonian(g, c);
  const QuantumState psi = field_state(c, g);
  for (auto _ : state) benchmark::DoNotOptimize(apply_hamiltonian(h, psi));
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_ApplyHamiltonian2D)->RangeMultiplier(2)->Range(32, 128)->Complexity();

void BM_ProjectFlowCoupled(benchmark::State& state) {
  const ProductChart pc = coupled_chart();
  auto g = product_grid(pc, static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) / 2, 1.0);
  const HamiltonianSpec h = coupled_hamiltonian(g, pc, Polynomial{0.0, 0.0, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(project_flow(pc, h, 0.0, g));
}
BENCHMARK(BM_ProjectFlowCoupled)->Arg(64)->Arg(128)->Arg(192);

void BM_CrankNicolsonStep(benchmark::State& state) {
  const ParticleChart c{0.5, 0.0, std::sqrt(0.5), 1.0};
  auto g = make_grid({symmetric_axis("x", 8.0, static_cast<int>(state.range(0)))});
  const HamiltonianSpec h = particle_hamiltonian(g, 1.0, Polynomial{0.0, 0.0, 0.5});
  CrankNicolson cn(h, 1e-3);
  QuantumState psi = particle_state(c, g);
  int step = 0;
  for (auto _ : state) {
    psi = cn.step(psi, step * 1e-3, step);
    ++step;
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CrankNicolsonStep)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

void BM_GueKick(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ParticleChart c{0.0, 0.0, 0.5, 1.0};
  auto g = particle_grid(c, n);
  QuantumState psi = particle_state(c, g);
  Rng rng(7);
  for (auto _ : state) {
    psi = kick(psi, sample_gue(n, 1.0, rng), 0.0025, 1.0);
    benchmark::DoNotOptimize(psi);
  }
}
BENCHMARK(BM_GueKick)->Arg(32)->Arg(64)->Arg(128);

void BM_Retract(benchmark::State& state) {
  const ParticleChart c{0.4, 0.7, 0.5, 1.0};
  auto g = particle_grid(c, static_cast<int>(state.range(0)), 1.0);
  const QuantumState psi = particle_state(c, g);
  for (auto _ : state) benchmark::DoNotOptimize(retract(psi, c));
}
BENCHMARK(BM_Retract)->Arg(256)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
