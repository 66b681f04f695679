// Serial reference path vs OpenMP kernels on the same inputs.

#include <benchmark/benchmark.h>

#include "kripke/fo.hpp"
#include "kripke/mimic.hpp"
#include "kripke/prop.hpp"
#include "kripke/reference.hpp"

using namespace kripke;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_FrameValidates(benchmark::State& st) {
  Formula f = parse("((~~p -> p) -> p | ~p) -> ~~p | ~p", Language::Prop);
  auto frames = rooted_frames(5);
  for (auto _ : st) {
    int n = 0;
    for (auto& fr : frames) n += frame_validates(fr, f, exec_of(st));
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_FrameValidates)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FOTable(benchmark::State& st) {
  FOModel m = iqc_countermodel("CD");
  m = pad_domains(m, 40).model;
  Formula f = parse("forall x exists y ((P(x) -> P(y)) | (P(y) -> q))", Language::FO);
  for (auto _ : st) {
    FOForcer fz(m, exec_of(st));
    benchmark::DoNotOptimize(fz.forces(0, f));
  }
}
BENCHMARK(BM_FOTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FOReference(benchmark::State& st) {
  FOModel m = pad_domains(iqc_countermodel("CD"), 40).model;
  Formula f = parse("forall x exists y ((P(x) -> P(y)) | (P(y) -> q))", Language::FO);
  for (auto _ : st) benchmark::DoNotOptimize(reference::force_fo(m, 0, f));
}
BENCHMARK(BM_FOReference)->Unit(benchmark::kMillisecond);

void BM_MimicSweep(benchmark::State& st) {
  Mimic mm = mimic_build(iqc_countermodel("DNS"));
  auto fs = enumerate_formulas(signature_of(mm.coded.original), {"x", "y"}, 2);
  for (auto _ : st) benchmark::DoNotOptimize(mimic_check(mm, fs, exec_of(st)).checked);
}
BENCHMARK(BM_MimicSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
