#pragma once

// Isomorph-free generation of graphs with a prescribed degree window, the
// pendant-vertex extension used to reach sequences with degree-1 vertices,
// random graphs with a given degree sequence, and the catalogue of deficiency
// multisets a graph admits for a defining set.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sts/bigint.hpp"
#include "sts/model.hpp"

namespace sts {

struct AutClassifiedGraph {
  DenseGraph graph;  // canonical labeling unless stated otherwise
  BigInt aut_order;
  DegreeSequence degree_sequence;
};

struct Part {
  int residue = 0;
  int modulus = 1;
  // "r/m"
  static Part parse(const std::string& text);
  std::string str() const;
};

struct GenSpec {
  int n = 0;
  int edges = 0;
  int min_degree = 0;
  int max_degree = 0;
  std::optional<DegreeSequence> exact_sequence;
  std::optional<Part> part;

  static GenSpec for_sequence(const DegreeSequence& s);
  // Throws std::invalid_argument when the fields contradict each other.
  void validate() const;
  std::string str() const;
};

// Canonical relabeling and automorphism group order.
AutClassifiedGraph canonical_form(const DenseGraph& g);

struct GenerationStats {
  std::uint64_t emitted = 0;
  std::uint64_t nodes = 0;
  bool infeasible = false;  // the spec admits no graph at all
};

// Visits one canonical representative per isomorphism class of graphs on
// spec.n vertices with spec.edges edges and all degrees in
// [min_degree, max_degree] (and exactly the given sequence, if any). With a
// part r/m only the r-th slice of the search tree is explored; slices are
// disjoint and together cover everything. The visitor may return false to stop.
GenerationStats generate(const GenSpec& spec, const std::function<bool(const AutClassifiedGraph&)>& visitor);

// One way of obtaining all graphs of a sequence S1 with degree-1 vertices from
// graphs of a smaller sequence S2: every S2 vertex of a given degree receives
// the same number of pendant vertices, and `pendant_pairs` isolated edges are
// added.
struct PlanStep {
  DegreeSequence target;  // S1
  DegreeSequence source;  // S2, equal to target for direct generation
  int pendant_pairs = 0;
  std::vector<std::pair<int, int>> attachments;  // (S2 degree, pendants per such vertex)
  bool ignorable = false;  // provably contributes nothing for the pattern
  bool direct() const { return target == source && pendant_pairs == 0 && attachments.empty(); }
  GenSpec spec() const { return GenSpec::for_sequence(source); }
  std::string str() const;
};

// Steps whose union yields every graph of sequence s1 exactly once up to
// isomorphism. Steps that cannot contribute to the pattern's count (two
// pendants sharing a neighbour while a deficiency set avoids every pendant)
// are marked ignorable and dropped unless include_ignorable is set.
std::vector<PlanStep> generation_plan(const DegreeSequence& s1, const DefiningSet& pattern,
                                      bool include_ignorable = false);

// Attach pendants to a graph of the step's source sequence. The returned graph
// is not canonically labeled; aut_order is derived from the source's order.
AutClassifiedGraph extend_with_pendants(const AutClassifiedGraph& source, const PlanStep& step);
// Convenience form: finds the step for (source sequence, target).
AutClassifiedGraph extend_with_pendants(const AutClassifiedGraph& source, const DegreeSequence& target,
                                        const DefiningSet& pattern);

// Havel-Hakimi realization; throws on a non-graphical sequence.
DenseGraph havel_hakimi(const DegreeSequence& seq);

// Havel-Hakimi followed by `switches` attempted double-edge swaps. Negative
// switches uses the default of 20 per edge. Deterministic for a given seed.
DenseGraph sample_random(const DegreeSequence& seq, long switches, std::uint64_t seed);

// A multiset W = {W_p : p in W} of deficiency sets of G's vertices, together
// with the number of completion maps (pairs of the defining set to vertices of
// G) that produce it.
struct WAssignment {
  std::vector<VertexMask> sets;  // sorted ascending; one entry per point of W
  std::uint64_t completions = 0;

  std::string str() const;  // "{},{0,1},{0,1},..."
};

struct WCatalogue {
  std::vector<WAssignment> assignments;
  std::string diagnostic;  // why the list is empty, if it is
  int rejected = 0;        // multisets ruled out by the perfect-matching prefilter
};

WCatalogue enumerate_w_multisets(const DenseGraph& g, const DefiningSet& pattern, bool prefilter = true);

// Abstract version over deficient vertices 0..m-1 with the given degrees; the
// graph itself is not consulted.
std::vector<WAssignment> abstract_w_multisets(const DefiningSet& pattern, const std::vector<int>& degrees);

// True if the subgraph induced on `vertices` has a perfect matching.
bool has_perfect_matching(const DenseGraph& g, VertexMask vertices);

}  // namespace sts
