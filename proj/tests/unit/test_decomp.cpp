#include <random>

#include "doctest.h"

#include "oracles.hpp"
#include "sts/decomp.hpp"
#include "sts/graph_gen.hpp"

using namespace sts;

namespace {

std::vector<MatchingCollection> collections_for(const oracle::MatchingInstance& inst, bool skip_forced = false) {
  return build_collections(inst.graph, WAssignment{inst.w_sets, 1}, {.skip_forced = skip_forced});
}

}  // namespace

TEST_SUITE("decomp") {

TEST_CASE("triangle decompositions against backtracking") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 3 + static_cast<int>(rng() % 10);
    DenseGraph g = oracle::random_triangle_instance(n, rng, trial % 4 == 0);
    BigInt expect = oracle::triangle_decompositions(g);
    CHECK(count_triangle_decompositions(g) == expect);
    CHECK(count_triangle_decompositions_parallel(g, 2) == expect);
  }
}

TEST_CASE("complete graph complement") {
  CHECK(count_triangle_decompositions(DenseGraph(7)) == 30);
  CHECK(count_triangle_decompositions(DenseGraph(9)) == 840);
  CHECK(count_triangle_decompositions(DenseGraph(8)) == 0);
}

TEST_CASE("perfect matchings") {
  DenseGraph k4(4);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) k4.add_edge(a, b);
  EdgeIndex idx(k4);
  auto all = perfect_matchings(k4, idx, 0b1111);
  CHECK(all.size() == 3);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(perfect_matchings(k4, idx, 0).size() == 1);
  CHECK(perfect_matchings(k4, idx, 0b0111).empty());
}

TEST_CASE("matching decompositions against the oracle, all search options") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 150; ++trial) {
    int n = 4 + static_cast<int>(rng() % 7);
    int w = 3 + static_cast<int>(rng() % 4);
    bool paired = trial % 3 == 0 && w % 2 == 0;
    auto inst = oracle::random_matching_instance(n, w, rng, paired);
    BigInt expect = oracle::matching_decompositions(inst.graph, inst.w_sets);
    CAPTURE(inst.w_sets);
    auto full = collections_for(inst);
    auto skipped = collections_for(inst, true);
    CHECK(count_matching_decompositions(inst.graph, full, {false, false, false}) == expect);
    CHECK(count_matching_decompositions(inst.graph, full) == expect);
    CHECK(count_matching_decompositions(inst.graph, skipped) == expect);
    CHECK(count_matching_decompositions(inst.graph, full, {true, true, true, true, 2}) == expect);
    CHECK(count_matching_decompositions_exact_cover(inst.graph, full) == expect);
  }
}

TEST_CASE("collections merge equal deficiency sets") {
  DenseGraph g = sample_random(DegreeSequence::parse("3^4 5^12"), -1, 3);
  auto cat = enumerate_w_multisets(g, DefiningSet::parse(5, "012,034"));
  REQUIRE_FALSE(cat.assignments.empty());
  for (const auto& a : cat.assignments) {
    auto cols = build_collections(g, a);
    int points = 0;
    for (const auto& c : cols) {
      points += c.multiplicity;
      CHECK(c.saturated == (g.all_vertices() & ~c.w_set));
    }
    CHECK(points == 5);
  }
}

}
