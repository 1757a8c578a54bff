#pragma once

// Canonical labeling and automorphism group order of vertex-coloured graphs on
// at most 64 vertices, by individualization-refinement with equitable
// partitions and automorphism pruning.

#include <cstdint>
#include <span>
#include <vector>

#include "sts/bigint.hpp"

namespace sts {

inline constexpr int kMaxCanonOrder = 64;

struct CanonResult {
  int n = 0;
  // Vertex v of the input goes to position perm[v] of the canonical graph.
  std::vector<int> perm;
  // Canonical adjacency rows (row i = neighbours of canonical vertex i).
  std::vector<std::uint64_t> rows;
  // Generators of the automorphism group, each as an image array.
  std::vector<std::vector<int>> generators;
  // orbit[v] = smallest vertex in the automorphism orbit of v.
  std::vector<int> orbit;
  // Index of each stabilizer in the previous one along the first search path;
  // their product is |Aut|.
  std::vector<int> stabilizer_indices;

  BigInt aut_order() const;
  // Exact as long as the product fits; throws std::overflow_error otherwise.
  std::uint64_t aut_order_u64() const;
};

// `rows[v]` is the neighbour mask of v (symmetric, no loops). `colours` may be
// empty (all vertices alike); otherwise vertices are only mapped onto vertices
// of equal colour and the canonical order lists colours ascending.
CanonResult canonical_labeling(std::span<const std::uint64_t> rows, std::span<const int> colours = {});

}  // namespace sts
