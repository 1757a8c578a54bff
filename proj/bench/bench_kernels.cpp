// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "sts/classify.hpp"
#include "sts/decomp.hpp"
#include "sts/exact_cover.hpp"
#include "sts/graph_gen.hpp"

using namespace sts;

namespace {

CoverInstance complete_graph_triangles(int v) {
  CoverInstance inst;
  std::vector<std::vector<int>> id(v, std::vector<int>(v, -1));
  for (int a = 0; a < v; ++a)
    for (int b = a + 1; b < v; ++b) id[a][b] = inst.universe_size++;
  for (int a = 0; a < v; ++a)
    for (int b = a + 1; b < v; ++b)
      for (int c = b + 1; c < v; ++c) inst.candidates.push_back({id[a][b], id[a][c], id[b][c]});
  inst.validate();
  return inst;
}

DenseGraph sample(const char* seq, std::uint64_t seed) { return sample_random(DegreeSequence::parse(seq), -1, seed); }

void BM_CoverSerial(benchmark::State& state) {
  auto inst = complete_graph_triangles(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(count_covers(inst));
}

void BM_CoverParallel(benchmark::State& state) {
  auto inst = complete_graph_triangles(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(count_covers_parallel(inst));
}

void BM_TrianglesSerial(benchmark::State& state) {
  DenseGraph g = sample("1^2 5^14", 7);
  for (auto _ : state) benchmark::DoNotOptimize(count_triangle_decompositions(g));
}

void BM_TrianglesParallel(benchmark::State& state) {
  DenseGraph g = sample("1^2 5^14", 7);
  for (auto _ : state) benchmark::DoNotOptimize(count_triangle_decompositions_parallel(g));
}

std::vector<std::vector<MatchingCollection>> matching_workload(DenseGraph& g) {
  g = sample("3^4 5^12", 3);
  std::vector<std::vector<MatchingCollection>> out;
  for (const auto& a : enumerate_w_multisets(g, DefiningSet::parse(5, "012,034")).assignments)
    out.push_back(build_collections(g, a, {.skip_forced = true}));
  return out;
}

void BM_MatchingsSerial(benchmark::State& state) {
  DenseGraph g;
  auto work = matching_workload(g);
  for (auto _ : state)
    for (const auto& cols : work) benchmark::DoNotOptimize(count_matching_decompositions(g, cols));
}

void BM_MatchingsParallel(benchmark::State& state) {
  DenseGraph g;
  auto work = matching_workload(g);
  MatchingCountOptions opt;
  opt.parallel = true;
  for (auto _ : state)
    for (const auto& cols : work) benchmark::DoNotOptimize(count_matching_decompositions(g, cols, opt));
}

void BM_DirectCount(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(labeled_count_direct(static_cast<int>(state.range(0))));
}

}  // namespace

BENCHMARK(BM_CoverSerial)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoverParallel)->Arg(9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrianglesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrianglesParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatchingsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatchingsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DirectCount)->Arg(13)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
