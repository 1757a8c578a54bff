#pragma once

// Domain types shared by every module: triple systems, dense graphs with a
// lexicographic edge numbering, degree sequences, edge bitmaps and the
// PBD(w,{2,3}) patterns used as defining sets.

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sts {

using Point = int;
using Block = std::array<Point, 3>;

// v = 1 or 3 (mod 6).
bool is_admissible_order(int v);

// A partial or complete Steiner triple system on points 0..v-1. Blocks are
// stored sorted, each block sorted ascending. Construction rejects blocks that
// repeat a pair.
class TripleSystem {
 public:
  TripleSystem() = default;
  TripleSystem(int v, std::vector<Block> blocks);

  int order() const { return v_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }

  bool is_complete() const;
  // Third point of the block through {a,b}, if any.
  std::optional<Point> third_point(Point a, Point b) const;
  // New label of old point p is perm[p].
  TripleSystem relabeled(std::span<const Point> perm) const;

  friend bool operator==(const TripleSystem& a, const TripleSystem& b) {
    return a.v_ == b.v_ && a.blocks_ == b.blocks_;
  }

 private:
  int v_ = 0;
  std::vector<Block> blocks_;
  std::vector<std::int16_t> third_;  // v*v table, -1 when the pair is uncovered
};

inline constexpr int kMaxGraphOrder = 32;
inline constexpr int kMaxEdges = kMaxGraphOrder * (kMaxGraphOrder - 1) / 2;

using VertexMask = std::uint32_t;

struct Edge {
  int u = 0;  // u < v
  int v = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Simple undirected graph on at most 32 vertices, one adjacency word per row.
class DenseGraph {
 public:
  explicit DenseGraph(int n = 0);
  static DenseGraph from_edges(int n, std::span<const Edge> edges);

  int order() const { return n_; }
  int edge_count() const;
  bool has_edge(int a, int b) const { return (rows_[a] >> b) & 1u; }
  void add_edge(int a, int b);
  void remove_edge(int a, int b);
  VertexMask neighbors(int a) const { return rows_[a]; }
  int degree(int a) const { return std::popcount(rows_[a]); }
  VertexMask all_vertices() const { return n_ == 32 ? ~VertexMask{0} : ((VertexMask{1} << n_) - 1); }

  // Lexicographic by (min, max) endpoint.
  std::vector<Edge> edges() const;
  // Vertex i of *this becomes vertex perm[i].
  DenseGraph relabeled(std::span<const int> perm) const;
  // Adds isolated vertices up to order n.
  DenseGraph with_order(int n) const;

  friend bool operator==(const DenseGraph& a, const DenseGraph& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }
  friend std::strong_ordering operator<=>(const DenseGraph& a, const DenseGraph& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.rows_ <=> b.rows_;
  }

 private:
  int n_ = 0;
  std::array<VertexMask, kMaxGraphOrder> rows_{};
};

DenseGraph complement(const DenseGraph& g);

// Fixed-width bitmask over a DenseGraph's edge indices (up to 496 edges).
// Ordering is numeric: the highest set bit dominates.
class EdgeMask {
 public:
  static constexpr int kWords = (kMaxEdges + 63) / 64;

  void set(int i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  bool any() const;
  int count() const;
  bool disjoint(const EdgeMask& o) const;
  const std::array<std::uint64_t, kWords>& words() const { return w_; }

  EdgeMask& operator|=(const EdgeMask& o);
  EdgeMask& operator&=(const EdgeMask& o);
  EdgeMask& operator^=(const EdgeMask& o);
  friend EdgeMask operator|(EdgeMask a, const EdgeMask& b) { return a |= b; }
  friend EdgeMask operator&(EdgeMask a, const EdgeMask& b) { return a &= b; }
  friend EdgeMask operator^(EdgeMask a, const EdgeMask& b) { return a ^= b; }
  friend bool operator==(const EdgeMask&, const EdgeMask&) = default;
  friend std::strong_ordering operator<=>(const EdgeMask& a, const EdgeMask& b);

 private:
  std::array<std::uint64_t, kWords> w_{};
};

using MatchingBitmap = EdgeMask;

// Lexicographic edge numbering of a DenseGraph.
class EdgeIndex {
 public:
  explicit EdgeIndex(const DenseGraph& g);
  int size() const { return static_cast<int>(edges_.size()); }
  int index(int a, int b) const { return table_[a][b]; }  // -1 if not an edge
  const Edge& edge(int i) const { return edges_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }
  EdgeMask mask_of(std::span<const Edge> edges) const;
  std::vector<Edge> edges_of(const EdgeMask& m) const;
  EdgeMask all() const;

 private:
  std::vector<Edge> edges_;
  std::array<std::array<std::int16_t, kMaxGraphOrder>, kMaxGraphOrder> table_{};
};

// Degree multiset written d1^n1 d2^n2 ... with distinct ascending degrees.
class DegreeSequence {
 public:
  using Term = std::pair<int, int>;  // (degree, multiplicity)

  DegreeSequence() = default;
  static DegreeSequence from_degrees(std::span<const int> degrees);
  static DegreeSequence of(const DenseGraph& g);
  // Accepts "1^2 5^14", "1^2,5^14", "1^2_5^14" and "5^{14}".
  static DegreeSequence parse(std::string_view text);

  const std::vector<Term>& terms() const { return terms_; }
  int order() const;
  long degree_sum() const;
  int edge_count() const { return static_cast<int>(degree_sum() / 2); }
  int min_degree() const { return terms_.empty() ? 0 : terms_.front().first; }
  int max_degree() const { return terms_.empty() ? 0 : terms_.back().first; }
  int multiplicity(int degree) const;
  std::vector<int> expanded() const;  // ascending
  bool empty() const { return terms_.empty(); }
  // Erdos-Gallai.
  bool is_graphical() const;
  std::string str() const;

  friend auto operator<=>(const DegreeSequence&, const DegreeSequence&) = default;

 private:
  std::vector<Term> terms_;
};

// A way of completing the size-2 blocks of a defining set with outside points:
// a partition of the pairs into classes, each class sharing one outside point.
// Pairs in a class are point-disjoint.
struct CompletionShape {
  std::vector<std::vector<int>> classes;  // indices into DefiningSet::pairs()
};

// The PBD(w,{2,3}) pattern induced by W = {0..w-1}: its triples B'3 and the
// implied pairs B'2.
class DefiningSet {
 public:
  DefiningSet(int w, std::vector<Block> triples);
  // "012,034" style; an empty pattern string means no triples.
  static DefiningSet parse(int w, std::string_view pattern);

  int size() const { return w_; }
  const std::vector<Block>& triples() const { return triples_; }
  const std::vector<std::array<Point, 2>>& pairs() const { return pairs_; }
  std::string pattern_string() const;
  std::string name() const;  // "w=5 {012,034}"

  // Number of permutations of W mapping the triple set onto itself.
  std::uint64_t automorphism_count() const;
  // Bitmask (over the C(w,3) possible triples) of every labeled copy of the
  // pattern on the w points.
  std::vector<std::uint64_t> labeled_copies() const;
  // Bit of a triple of {0..w-1} in the colex numbering of 3-subsets (w <= 8).
  static std::uint64_t triple_bit(const Block& b);

  std::vector<CompletionShape> shapes() const;
  // Degree sequence of G (order n) forced by a shape: each class of k pairs
  // yields a vertex of degree w-2k, all other vertices have degree w.
  std::optional<DegreeSequence> shape_sequence(const CompletionShape& s, int n) const;
  // Distinct admissible degree sequences of G for |V\W| = n.
  std::vector<DegreeSequence> degree_sequences(int n) const;

  friend bool operator==(const DefiningSet& a, const DefiningSet& b) {
    return a.w_ == b.w_ && a.triples_ == b.triples_;
  }

 private:
  int w_ = 0;
  std::vector<Block> triples_;
  std::vector<std::array<Point, 2>> pairs_;
};

// The PBD induced on a point subset: {B & W : |B & W| >= 2}, blocks sorted.
std::vector<std::vector<Point>> induced_pbd(const TripleSystem& sts, std::span<const Point> subset);

struct BlockSplit {
  std::vector<Block> inner;     // meet W in >= 2 points
  std::vector<Block> single;    // meet W in exactly 1 point
  std::vector<Block> disjoint;  // miss W
};

BlockSplit split_blocks(const TripleSystem& sts, std::span<const Point> w_set);

// Relabel a w-subset so that it induces exactly the pattern triples on
// 0..w-1; position i of the result is the point playing pattern point i.
std::optional<std::vector<Point>> match_pattern(const TripleSystem& sts, std::span<const Point> subset,
                                                const DefiningSet& pattern);

// The graph view of an STS relative to an ordered W: G on V\W built from the
// blocks meeting W once, the colour classes F'_p as edge masks of G, the sets
// W_p and the triangles of D, all in G's vertex labels.
struct SplitView {
  int v = 0;
  std::vector<Point> w_points;   // pattern point i -> original point
  std::vector<Point> g_points;   // G vertex j -> original point (ascending)
  DenseGraph graph;
  std::vector<VertexMask> deficiency_sets;  // W_p
  std::vector<EdgeMask> colour_classes;     // F'_p
  std::vector<std::array<int, 3>> triangles;
  std::vector<Block> inner;  // original labels
};

SplitView split_view(const TripleSystem& sts, std::span<const Point> w_points);
TripleSystem reassemble(const SplitView& view);

}  // namespace sts
