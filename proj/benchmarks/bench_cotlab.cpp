#include <benchmark/benchmark.h>

#include "cotlab/quiverlift.hpp"

namespace {

using namespace cotlab;

bqa::AlgebraPtr algebra(const char* json) { return bqa::parse_algebra(bqa::Json::parse(json)); }

bqa::AlgebraPtr truncated(int k) {
  bqa::Json path = bqa::Json::array();
  for (int i = 0; i < k; ++i) path.push_back("x");
  bqa::Json j = bqa::Json::parse(R"({"field":2,"vertices":["1"],"arrows":[{"id":"x","src":"1","tgt":"1"}]})");
  j["relations"] = bqa::Json::array({bqa::Json::array({bqa::Json{{"path", path}}})});
  return bqa::parse_algebra(j);
}

bqa::AlgebraPtr a3() {
  return algebra(R"({"field":2,"vertices":["1","2","3"],
    "arrows":[{"id":"a","src":"1","tgt":"2"},{"id":"b","src":"2","tgt":"3"}],"relations":[]})");
}

universe::UniversePtr enumerate(const bqa::AlgebraPtr& alg, std::size_t cap) {
  universe::EnumerateOptions o;
  o.cache_dir = "";
  o.threads = 1;
  return universe::Universe::enumerate(alg, cap, o);
}

void BM_EnumerateTruncated(benchmark::State& state) {
  const auto alg = truncated(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate(alg, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_EnumerateTruncated)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_EnumerateA3(benchmark::State& state) {
  const auto alg = a3();
  for (auto _ : state) benchmark::DoNotOptimize(enumerate(alg, 3));
}
BENCHMARK(BM_EnumerateA3)->Unit(benchmark::kMillisecond);

void BM_ExtTable(benchmark::State& state) {
  const auto u = enumerate(a3(), 3);
  for (auto _ : state) {
    homalg::Resolver r(u->algebra());
    std::size_t total = 0;
    for (const auto& m : u->indecs()) {
      for (const auto& n : u->indecs()) total += r.ext_dim(m, n, 1) + r.ext_dim_injective(m, n, 1);
    }
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_ExtTable)->Unit(benchmark::kMillisecond);

void BM_VerifyTriple(benchmark::State& state) {
  const auto u = enumerate(truncated(3), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hovey::verify_triple(universe::ObjectClass::all(u), universe::ObjectClass::projectives(u),
                                                  universe::ObjectClass::all(u)));
  }
}
BENCHMARK(BM_VerifyTriple)->Unit(benchmark::kMillisecond);

void BM_LiftTriple(benchmark::State& state) {
  const auto u = enumerate(truncated(3), 3);
  const auto t = hovey::certify_extendable(
      hovey::verify_triple(universe::ObjectClass::all(u), universe::ObjectClass::projectives(u),
                           universe::ObjectClass::all(u)),
      3, cotorsion::Side::left);
  for (auto _ : state) benchmark::DoNotOptimize(hovey::lift_triple(t, 3, cotorsion::Side::left));
}
BENCHMARK(BM_LiftTriple)->Unit(benchmark::kMillisecond);

void BM_RepresentationUniverse(benchmark::State& state) {
  const quiverlift::RepSetting s(
      quiverlift::ShapeQuiver::from_json(
          bqa::Json::parse(R"({"vertices":["p","q"],"arrows":[{"id":"s","src":"p","tgt":"q"}]})")),
      truncated(2));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate(s.tensor_algebra(), quiverlift::kDefaultRepCap));
}
BENCHMARK(BM_RepresentationUniverse)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
