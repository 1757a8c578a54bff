#pragma once

// Deliberately naive reference implementations used only by the tests. They
// share nothing with the library's search code beyond the DenseGraph type.

#include <cstdint>
#include <random>
#include <vector>

#include "sts/model.hpp"

namespace oracle {

// Partitions of the edges of the complement of g into triangles, by plain
// backtracking on an adjacency matrix.
std::uint64_t triangle_decompositions(const sts::DenseGraph& g);

// Ways to give every point p a perfect matching of the vertices outside
// w_sets[p] so that the matchings partition E(g); points with equal sets are
// interchangeable, so the ordered count is divided by the factorial of each
// multiplicity (except for sets covering every vertex, which only admit the
// empty matching).
std::uint64_t matching_decompositions(const sts::DenseGraph& g, const std::vector<sts::VertexMask>& w_sets);

// Canonical adjacency rows: colour refinement followed by brute force over
// all orderings consistent with the refined cells.
std::vector<std::uint32_t> canonical_rows(const sts::DenseGraph& g);

// One representative per isomorphism class of graphs on n <= 8 vertices,
// built by adding a vertex to every class on n-1 vertices in every way.
std::vector<sts::DenseGraph> all_graph_classes(int n);

// Number of labelings of g's vertices that preserve adjacency.
std::uint64_t automorphism_count(const sts::DenseGraph& g);

// A random graph whose complement is a union of edge-disjoint triangles (so
// at least one decomposition exists), possibly with extra edges toggled.
sts::DenseGraph random_triangle_instance(int n, std::mt19937_64& rng, bool perturb);

struct MatchingInstance {
  sts::DenseGraph graph;
  std::vector<sts::VertexMask> w_sets;  // one per point, sorted
};

// Random sets W_p and a graph built as the union of one random perfect
// matching of the complement of each W_p (edge-disjoint), so the count is at
// least 1. Sets may cover every vertex. With `paired`, every set occurs
// exactly twice.
MatchingInstance random_matching_instance(int n, int w, std::mt19937_64& rng, bool paired);

}  // namespace oracle
