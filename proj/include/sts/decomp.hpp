#pragma once

// Per-graph counting: decompositions of the complement of G into triangles,
// and decompositions of G into edge-disjoint perfect matchings drawn from the
// collections prescribed by a deficiency multiset.

#include <cstdint>
#include <optional>
#include <vector>

#include "sts/bigint.hpp"
#include "sts/graph_gen.hpp"
#include "sts/model.hpp"

namespace sts {

// Number of partitions of the edges of the complement of g into triangles.
BigInt count_triangle_decompositions(const DenseGraph& g);
// Same count, with the exact-cover search split across OpenMP threads.
BigInt count_triangle_decompositions_parallel(const DenseGraph& g, int threads = 0);

// All perfect matchings of the subgraph induced on `saturated`, as edge masks
// of g, in increasing numeric order.
std::vector<MatchingBitmap> perfect_matchings(const DenseGraph& g, const EdgeIndex& index, VertexMask saturated);

struct MatchingCollection {
  VertexMask w_set = 0;      // the deficiency set W_i shared by the merged points
  VertexMask saturated = 0;  // V(G) minus W_i
  int multiplicity = 1;      // number of points of W sharing this W_i
  bool enumerated = true;    // false when the matchings were deliberately not built
  std::vector<MatchingBitmap> matchings;  // increasing numeric order
};

struct BuildOptions {
  // Leave the matchings of the collection that the counter will treat as
  // forced (largest saturated set among multiplicity-1 collections) unbuilt.
  bool skip_forced = false;
};

std::vector<MatchingCollection> build_collections(const DenseGraph& g, const WAssignment& assignment,
                                                  const BuildOptions& options = {});

struct MatchingCountOptions {
  // Never search the multiplicity-1 collection with the largest saturated
  // set: once everything else is chosen its matching is determined.
  bool forced_last = true;
  // Count, rather than enumerate, the compatible matchings of the last
  // searched multiplicity-1 collection.
  bool count_second_last = true;
  // When a multiplicity-2 collection is the only thing left, add half its
  // number of compatible matchings (used only without a forced collection).
  bool pair_shortcut = true;
  // Split the top level of the search across OpenMP threads.
  bool parallel = false;
  int threads = 0;
};

// Number of ways to choose P_j matchings (as a set) from every collection j so
// that all chosen matchings are pairwise edge-disjoint and together cover
// every edge of g. Collections whose saturated set is empty contribute only
// the empty matching and a factor of 1.
BigInt count_matching_decompositions(const DenseGraph& g, const std::vector<MatchingCollection>& collections,
                                     const MatchingCountOptions& options = {});

// The same count as an exact-cover problem over edges plus one slot per point
// of W; the cover count is divided by the product of P_j!.
BigInt count_matching_decompositions_exact_cover(const DenseGraph& g,
                                                 const std::vector<MatchingCollection>& collections);

// Matchings of `c` edge-disjoint from `used`.
std::uint64_t count_compatible(const MatchingCollection& c, const MatchingBitmap& used);

struct DecompCounts {
  BigInt n_d = 0;
  BigInt n_f = 0;
  double t_d_ms = 0.0;
  double t_f_ms = 0.0;
};

}  // namespace sts
