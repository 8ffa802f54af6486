#include "fasthcs/pipeline.hpp"
#include "fasthcs/simharness.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace fasthcs;

DataMatrix contaminated(Index n, Index p) {
  sim::ContaminationSpec spec;
  spec.n = n;
  spec.p = p;
  spec.q = 5;
  spec.epsilon = 0.2;
  spec.nu = 6.0;
  spec.config = sim::Contamination::Shift;
  spec.seed = 7;
  return sim::generate(spec).data;
}

void BM_FitFastHCS(benchmark::State& state) {
  const auto data = contaminated(200, state.range(0));
  FitOptions opt;
  opt.q = 5;
  opt.clean_count = 120;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_fasthcs(data, opt));
  }
}
BENCHMARK(BM_FitFastHCS)->Arg(20)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_PPOutlyingness(benchmark::State& state) {
  const auto data = contaminated(200, state.range(0));
  PPConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pp_outlyingness(data.values, cfg));
  }
}
BENCHMARK(BM_PPOutlyingness)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Search(benchmark::State& state) {
  const auto data = contaminated(200, 100);
  const auto reduced = center_and_reduce(data);
  SearchConfig cfg;
  cfg.q = 5;
  cfg.clean_count = 120;
  for (auto _ : state) {
    benchmark::DoNotOptimize(search(data.values, reduced, cfg));
  }
}
BENCHMARK(BM_Search)->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State& state) {
  sim::ContaminationSpec spec;
  spec.epsilon = 0.4;
  spec.nu = 6.0;
  spec.config = sim::Contamination::PointMass;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::generate(spec));
  }
}
BENCHMARK(BM_Generate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
