#include <benchmark/benchmark.h>

#include "finslerlab/catalog.hpp"
#include "finslerlab/manifold_spec.hpp"
#include "finslerlab/scurvature.hpp"

using namespace finslerlab;

namespace {

RandersSpace space(const char* name) { return build_space(catalog_spec(name)); }

const std::vector<double> kX2{0.5, 0.3}, kV2{1.0, 1.0};
const std::vector<double> kX3{0.3, -0.4, 0.2}, kV3{0.6, 0.0, 0.8};

void BM_ParseExpression(benchmark::State& state) {
  const std::vector<std::string> coords{"x1", "x2", "x3"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ScalarField::parse("1.2*(x1*x3 - x2)/(1 + x1^2 + x2^2 + x3^2)^2", coords));
  }
}
BENCHMARK(BM_ParseExpression);

void BM_FundamentalTensor(benchmark::State& state) {
  const auto F = space("sphere-hopf").finsler();
  for (auto _ : state) benchmark::DoNotOptimize(fundamental_tensor(F, kX3, kV3));
}
BENCHMARK(BM_FundamentalTensor);

void BM_SprayGeneric(benchmark::State& state) {
  const auto F = space(state.range(0) == 2 ? "rotational-killing" : "sphere-hopf").finsler();
  const auto& x = state.range(0) == 2 ? kX2 : kX3;
  const auto& v = state.range(0) == 2 ? kV2 : kV3;
  for (auto _ : state) benchmark::DoNotOptimize(spray(F, x, v));
}
BENCHMARK(BM_SprayGeneric)->Arg(2)->Arg(3);

void BM_SprayClosedForm(benchmark::State& state) {
  const auto s = space("sphere-hopf");
  for (auto _ : state) benchmark::DoNotOptimize(spray_closed_form(s, kX3, kV3));
}
BENCHMARK(BM_SprayClosedForm);

void BM_SCurvature(benchmark::State& state) {
  const auto s = space("sphere-hopf");
  const auto F = s.finsler();
  const auto m = Measure::busemann_hausdorff(s);
  for (auto _ : state) benchmark::DoNotOptimize(s_curvature(F, m, kX3, kV3));
}
BENCHMARK(BM_SCurvature);

void BM_SCurvatureTransport(benchmark::State& state) {
  const auto s = space("flat-nonkilling");
  const auto F = s.finsler();
  const auto m = Measure::busemann_hausdorff(s);
  for (auto _ : state) benchmark::DoNotOptimize(s_curvature_transport(F, m, kX2, kV2));
}
BENCHMARK(BM_SCurvatureTransport)->Unit(benchmark::kMillisecond);

void BM_Geodesic(benchmark::State& state) {
  const auto F = space("polar-riemannian").finsler();
  const std::vector<double> x{1.0, 0.0}, v{0.3, 0.8};
  for (auto _ : state) benchmark::DoNotOptimize(geodesic(F, x, v, 1.0, static_cast<int>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Geodesic)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_MonteCarloDensity(benchmark::State& state) {
  const auto s = space("flat-const");
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        bh_density_monte_carlo(s, kX2, static_cast<std::uint64_t>(state.range(0)), kDefaultSeed, 4));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloDensity)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_TheoremVerdict(benchmark::State& state) {
  const auto s = space("sphere-hopf");
  const auto probes = make_probes(s.chart(), kDefaultProbeCount, kDefaultSeed, true);
  for (auto _ : state) benchmark::DoNotOptimize(theorem_verdict(s, probes));
}
BENCHMARK(BM_TheoremVerdict)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
