#pragma once

// Exhaustive classification of Steiner triple systems of small order. This is
// the independent ground truth the counting pipeline is checked against.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sts/bigint.hpp"
#include "sts/census.hpp"
#include "sts/model.hpp"

namespace sts {

inline constexpr int kMaxClassifyOrder = 15;
inline constexpr int kMaxDirectCountOrder = 13;

struct CanonicalSystem {
  TripleSystem system;  // canonically relabeled
  BigInt aut_order;
  std::vector<std::uint64_t> key;  // canonical incidence rows; equal iff isomorphic
};

// Canonical form through the point-block incidence graph, with points coloured
// by the number of Pasch configurations through them.
CanonicalSystem canonical_system(const TripleSystem& sts);

struct ClassifiedCatalogue {
  int v = 0;
  std::vector<TripleSystem> representatives;  // canonical forms, sorted
  std::vector<BigInt> aut_orders;             // parallel to representatives
  AutSpectrum spectrum;
  BigInt labeled_count;
  std::uint64_t completions_examined = 0;
};

// All isomorphism classes of STS(v). Refuses v above kMaxClassifyOrder.
ClassifiedCatalogue classify_all(int v);

// Labeled STS(v) by exact cover over the triangles of K_v. The blocks through
// point 0 are fixed and the count multiplied by the number of such stars,
// (v-2)!!, which is exact because every star extends the same number of ways.
// Refuses v above kMaxDirectCountOrder.
BigInt labeled_count_direct(int v);
// Exact cover over every triangle of K_v with nothing fixed; practical for v <= 9.
BigInt labeled_count_raw(int v);

// A random STS(v) by hill-climbing; deterministic for a given seed.
TripleSystem construct_sts(int v, std::uint64_t seed);

// Catalogue text format: one system per line, "v: a,b,c a,b,c ...".
void write_catalogue(std::ostream& out, const std::vector<TripleSystem>& systems);
std::vector<TripleSystem> read_catalogue(std::istream& in);

}  // namespace sts
