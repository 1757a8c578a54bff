#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"

#include "oracles.hpp"
#include "sts/canon.hpp"
#include "sts/graph_gen.hpp"

using namespace sts;

namespace {

std::vector<std::uint64_t> rows_of(const DenseGraph& g) {
  std::vector<std::uint64_t> r(g.order());
  for (int v = 0; v < g.order(); ++v) r[v] = g.neighbors(v);
  return r;
}

DenseGraph random_graph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  DenseGraph g(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng)) g.add_edge(a, b);
  return g;
}

}  // namespace

TEST_SUITE("canon") {

TEST_CASE("automorphism orders of familiar graphs") {
  DenseGraph k6(6), c9(9), petersen(10);
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) k6.add_edge(a, b);
  for (int i = 0; i < 9; ++i) c9.add_edge(i, (i + 1) % 9);
  for (int i = 0; i < 5; ++i) {
    petersen.add_edge(i, (i + 1) % 5);
    petersen.add_edge(i, i + 5);
    petersen.add_edge(5 + i, 5 + (i + 2) % 5);
  }
  CHECK(canonical_labeling(rows_of(k6)).aut_order() == 720);
  CHECK(canonical_labeling(rows_of(c9)).aut_order() == 18);
  CHECK(canonical_labeling(rows_of(petersen)).aut_order() == 120);
  CHECK(canonical_labeling(rows_of(DenseGraph(7))).aut_order() == 5040);
}

TEST_CASE("colours restrict automorphisms") {
  DenseGraph c6(6);
  for (int i = 0; i < 6; ++i) c6.add_edge(i, (i + 1) % 6);
  std::vector<int> colours = {1, 0, 0, 0, 0, 0};
  CHECK(canonical_labeling(rows_of(c6), colours).aut_order() == 2);
}

TEST_CASE("random graphs: invariance and group order against brute force") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng() % 8);
    DenseGraph g = random_graph(n, 0.2 + 0.1 * (trial % 6), rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    DenseGraph h = g.relabeled(perm);
    auto cg = canonical_labeling(rows_of(g));
    auto ch = canonical_labeling(rows_of(h));
    CHECK(cg.rows == ch.rows);
    CHECK(cg.aut_order() == oracle::automorphism_count(g));
    // The permutation really maps g onto its canonical rows.
    CHECK(rows_of(g.relabeled(cg.perm)) == cg.rows);
    for (const auto& gen : cg.generators) CHECK(g.relabeled(gen) == g);
  }
}

TEST_CASE("larger regular graphs") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    DenseGraph g = sample_random(DegreeSequence::parse("4^20"), -1, rng());
    std::vector<int> perm(20);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto a = canonical_labeling(rows_of(g));
    auto b = canonical_labeling(rows_of(g.relabeled(perm)));
    CHECK(a.rows == b.rows);
    CHECK(a.aut_order() == b.aut_order());
  }
}

}
