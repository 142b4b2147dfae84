#include "qdemon/process.hpp"
#include "qdemon/thermo.hpp"
#include "qdemon/trajectory.hpp"

#include <benchmark/benchmark.h>

using namespace qdemon;

namespace {

MeasurementRecord reference_record(const SimParams& p) {
  StreamRng rng(1, 0, 0);
  return synthesize_record_final(p, DensityMatrix::ground(), rng).record;
}

void BM_FilterStep(benchmark::State& state) {
  const SimParams p;
  const MeasurementRecord record = reference_record(p);
  for (auto _ : state) {
    StateFilter f(p, DensityMatrix::ground());
    for (double r : record.samples) f.step(r);
    benchmark::DoNotOptimize(f.state());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(record.size()));
}
BENCHMARK(BM_FilterStep);

void BM_ChiStep(benchmark::State& state) {
  const SimParams p;
  const MeasurementRecord record = reference_record(p);
  for (auto _ : state) {
    ProcessIntegrator chi(p);
    for (double r : record.samples) chi.step(r);
    benchmark::DoNotOptimize(chi.process().chi);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(record.size()));
}
BENCHMARK(BM_ChiStep);

void BM_Synthesize(benchmark::State& state) {
  const SimParams p;
  std::uint64_t shot = 0;
  for (auto _ : state) {
    StreamRng rng(1, 0, shot++);
    benchmark::DoNotOptimize(synthesize_record_final(p, DensityMatrix::ground(), rng));
  }
}
BENCHMARK(BM_Synthesize);

void BM_TpmShot(benchmark::State& state) {
  SimParams p;
  p.duration = 0.5e-6;
  const FeedbackPolicy policy{static_cast<PolicyKind>(state.range(0)), 20, true};
  std::uint64_t shot = 0;
  for (auto _ : state) {
    StreamRng rng(1, 0, shot++);
    benchmark::DoNotOptimize(tpm_shot(p, 2.5, policy, rng));
  }
  state.SetLabel(std::string(to_string(policy.kind)));
}
BENCHMARK(BM_TpmShot)->DenseRange(0, 2);

}  // namespace
BENCHMARK_MAIN();
