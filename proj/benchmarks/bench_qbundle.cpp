// Throughput reference points for the hot paths: configuration graph
// construction, bundle assembly, holonomy audits, Hamiltonian spectra,
// equivalence solving, and trajectory integration.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "qbundle/bohm.hpp"
#include "qbundle/bundle.hpp"
#include "qbundle/confspace.hpp"
#include "qbundle/iso.hpp"
#include "qbundle/loops.hpp"
#include "qbundle/params.hpp"
#include "qbundle/rng.hpp"
#include "qbundle/triple.hpp"

namespace {

using namespace qbundle;

LatticeBox square_box(int side) {
  LatticeBox box;
  box.dim = 2;
  box.sides = {side, side};
  return box;
}

const ConfigGraphPair& shared_pair(int side, int particles) {
  static std::map<std::pair<int, int>, ConfigGraphPair> cache;
  auto key = std::make_pair(side, particles);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, build_config_pair(square_box(side), particles)).first;
  return it->second;
}

void BM_BuildConfigPair(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const int particles = static_cast<int>(state.range(1));
  for (auto _ : state) {
    auto pair = build_config_pair(square_box(side), particles);
    benchmark::DoNotOptimize(pair.quotient.num_vertices);
  }
}
BENCHMARK(BM_BuildConfigPair)->Args({3, 2})->Args({4, 2})->Args({4, 3});

void BM_FermionicBundle(benchmark::State& state) {
  const auto& pair = shared_pair(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) {
    auto bundle = bundle_from_character(pair, SnCharacter::alternating);
    benchmark::DoNotOptimize(bundle.unitaries.size());
  }
}
BENCHMARK(BM_FermionicBundle)->Arg(3)->Arg(4);

void BM_HolonomyAudit(benchmark::State& state) {
  const auto& pair = shared_pair(4, 2);
  const auto bundle = bundle_from_character(pair, SnCharacter::alternating);
  Rng rng(42);
  for (auto _ : state) {
    const int base = rng.index(pair.quotient.num_vertices);
    const auto loop = random_loop(pair, base, 24, rng);
    benchmark::DoNotOptimize(holonomy(bundle, loop)(0, 0));
  }
}
BENCHMARK(BM_HolonomyAudit);

void BM_ConnectionSpectrum(benchmark::State& state) {
  const auto& pair = shared_pair(static_cast<int>(state.range(0)), 2);
  const auto bundle = bundle_from_character(pair, SnCharacter::alternating);
  const auto potential = potential_on_quotient(pair, PotentialKind::onsite_random, 7, 0.5);
  const PhysicalParams params;
  const auto h = connection_laplacian(bundle, potential, params);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(h).sum());
}
BENCHMARK(BM_ConnectionSpectrum)->Arg(3)->Arg(4);

void BM_SolveEquivalence(benchmark::State& state) {
  const auto& pair = shared_pair(static_cast<int>(state.range(0)), 2);
  const PhysicalParams params;
  const auto bundle = bundle_from_character(pair, SnCharacter::alternating);
  const auto t1 = make_bundle_triple(
      bundle, potential_on_quotient(pair, PotentialKind::onsite_random, 7, 0.5), params);
  const auto t2 = make_subspace_triple(
      pair, potential_on_ordered(pair, PotentialKind::onsite_random, 7, 0.5), params,
      Symmetry::anti);
  for (auto _ : state) {
    auto report = solve_equivalence(t1, t2, 1e-10);
    benchmark::DoNotOptimize(report.status);
  }
}
BENCHMARK(BM_SolveEquivalence)->Arg(3)->Arg(4);

void BM_LiftUnitary(benchmark::State& state) {
  const auto& pair = shared_pair(4, 2);
  const auto bundle = bundle_from_character(pair, SnCharacter::alternating);
  for (auto _ : state) {
    const auto pf = canonical_pullback_frame(bundle, pair);
    const auto basis = symmetric_subspace_basis(pair, Symmetry::anti);
    const auto witness = triple_unitary(basis.B, lift_matrix(pf.bundle, pf.frame, pair));
    benchmark::DoNotOptimize(witness.norm());
  }
}
BENCHMARK(BM_LiftUnitary);

void BM_TrajectoryIntegration(benchmark::State& state) {
  const PhysicalParams params;
  Eigen::VectorXd c1(1), c2(1), p1(1), p2(1), start(2);
  c1 << -1.2;
  c2 << 1.0;
  p1 << 0.5;
  p2 << -0.4;
  start << -1.0, 1.2;
  SlaterState slater({Orbital::free_packet(c1, p1, 0.8), Orbital::free_packet(c2, p2, 0.8)},
                     params);
  for (auto _ : state) {
    auto tr = integrate(slater, start, 0.5, 1e-9, 11);
    benchmark::DoNotOptimize(tr.points.back());
  }
}
BENCHMARK(BM_TrajectoryIntegration);

}  // namespace

BENCHMARK_MAIN();
