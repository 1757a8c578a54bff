#pragma once

// Exact cover by dancing links: count or enumerate the subcollections of
// candidate sets that partition a finite universe.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "sts/bigint.hpp"

namespace sts {

struct CoverInstance {
  int universe_size = 0;
  std::vector<std::vector<int>> candidates;  // each sorted, distinct, within the universe

  // Throws std::invalid_argument on an empty or out-of-range candidate and
  // normalizes each candidate to sorted order.
  void validate();
  // Duplicate candidates are legal (each copy is a distinct choice) but usually
  // indicate a modelling error, so callers can check for them.
  bool has_duplicates() const;
};

enum class Branching {
  MinRemaining,    // column with the fewest remaining candidates
  FirstUncovered,  // smallest-index uncovered element
};

BigInt count_covers(const CoverInstance& inst, Branching branching = Branching::MinRemaining);

// Same count, with the search tree split into prefixes that are solved in an
// OpenMP parallel loop. `threads` <= 0 uses the OpenMP default.
BigInt count_covers_parallel(const CoverInstance& inst, int threads = 0,
                             Branching branching = Branching::MinRemaining);

struct EnumerationResult {
  std::uint64_t visits = 0;
  bool completed = true;  // false when the visitor stopped the search
};

// Calls `visitor` with the indices of the chosen candidates, sorted ascending,
// once per exact cover. Returning false from the visitor aborts the search.
// Default branching is by smallest uncovered element with candidates tried in
// input order, which fixes the visit order.
EnumerationResult enumerate_covers(const CoverInstance& inst,
                                   const std::function<bool(std::span<const int>)>& visitor,
                                   Branching branching = Branching::FirstUncovered);

// Plain text: "universe_size candidate_count" then one candidate per line.
CoverInstance read_cover_instance(std::istream& in);
void write_cover_instance(std::ostream& out, const CoverInstance& inst);

// Reusable solver for repeated searches on one instance. Not thread-safe; use
// one object per thread.
class DancingLinks {
 public:
  explicit DancingLinks(const CoverInstance& inst);

  std::uint64_t count(Branching branching);
  EnumerationResult enumerate(const std::function<bool(std::span<const int>)>& visitor, Branching branching);

  // Commit candidate `row` as part of every solution; returns false if it
  // conflicts with rows already committed.
  bool commit(int row);
  // Search-tree prefixes: row sequences reached after `depth` branching steps
  // (or earlier, at a solution). Their subtree counts sum to count().
  std::vector<std::vector<int>> prefixes(int depth, Branching branching);

 private:
  int choose_column(Branching branching) const;
  void cover(int c);
  void uncover(int c);
  void select_row(int node);
  void unselect_row(int node);
  std::uint64_t count_rec(Branching branching);
  bool enumerate_rec(const std::function<bool(std::span<const int>)>& visitor, Branching branching,
                     std::uint64_t& visits);
  void prefixes_rec(int depth, Branching branching, std::vector<std::vector<int>>& out);

  int columns_;
  std::vector<int> left_, right_, up_, down_, col_, row_;
  std::vector<int> size_;
  std::vector<int> row_head_;  // first node of each candidate, -1 if empty
  std::vector<char> committed_column_;
  std::vector<int> stack_;
};

}  // namespace sts
