#include <benchmark/benchmark.h>

#include "rslab/fourier.hpp"
#include "rslab/gf.hpp"
#include "rslab/randmodel.hpp"
#include "rslab/recovery.hpp"
#include "rslab/rscode.hpp"

namespace {

using rslab::gf::Elem;
using rslab::gf::Field;

void BM_FieldMul(benchmark::State& state) {
  const Field f = Field::parse(std::to_string(state.range(0)));
  const std::uint32_t q = f.order();
  std::uint32_t a = 1;
  for (auto _ : state) {
    for (std::uint32_t b = 1; b < q; ++b) a = f.mul(Elem(a), Elem(b)).index() | 1u;
    benchmark::DoNotOptimize(a);
  }
  state.SetItemsProcessed(state.iterations() * (q - 1));
}
BENCHMARK(BM_FieldMul)->Arg(16)->Arg(256)->Arg(1024)->Arg(65536);

void BM_Decide(benchmark::State& state) {
  const Field f = Field::parse("16");
  const auto code = rslab::rs::RsCode::full(f, 8);
  const double p = static_cast<double>(state.range(0)) / 100.0;
  std::uint64_t t = 0;
  for (auto _ : state) {
    const auto inst = rslab::randmodel::sample_instance(f, 16, rslab::randmodel::Iid{p}, {0xA5EED, t++});
    benchmark::DoNotOptimize(rslab::recovery::decide(code, inst));
  }
}
BENCHMARK(BM_Decide)->Arg(15)->Arg(25)->Arg(50);

void BM_WeightDistributionFormula(benchmark::State& state) {
  const auto q = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rslab::rs::mds_weight_distribution(q, q, q / 2));
}
BENCHMARK(BM_WeightDistributionFormula)->Arg(16)->Arg(64)->Arg(256);

void BM_WeightDistributionBrute(benchmark::State& state) {
  const auto code = rslab::rs::RsCode::full(Field::parse("16"), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rslab::rs::weight_distribution_brute_force(code));
}
BENCHMARK(BM_WeightDistributionBrute)->Arg(2)->Arg(3);

void BM_IndicatorSpectrum(benchmark::State& state) {
  const Field f = Field::parse(std::to_string(state.range(0)));
  const rslab::fourier::CharacterTable table(f);
  std::vector<Elem> subset;
  for (std::uint32_t x = 0; x < f.order(); x += 2) subset.emplace_back(x);
  for (auto _ : state) benchmark::DoNotOptimize(rslab::fourier::indicator_spectrum(table, subset));
}
BENCHMARK(BM_IndicatorSpectrum)->Arg(16)->Arg(64)->Arg(256);

void BM_FourierDecompose(benchmark::State& state) {
  const Field f = Field::parse("7");
  const auto code = rslab::rs::RsCode::full(f, 4);
  const rslab::fourier::FourierCounter counter(code);
  std::uint64_t t = 0;
  for (auto _ : state) {
    const auto inst = rslab::randmodel::sample_instance(f, 7, rslab::randmodel::Iid{0.6}, {1, t++});
    benchmark::DoNotOptimize(counter.decompose(inst));
  }
}
BENCHMARK(BM_FourierDecompose);

}  // namespace
BENCHMARK_MAIN();
