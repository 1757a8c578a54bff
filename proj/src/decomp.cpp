#include "sts/decomp.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

#include <omp.h>

#include "sts/exact_cover.hpp"

namespace sts {

// ---------------------------------------------------------------------------
// Triangle decompositions of the complement

namespace {

std::optional<CoverInstance> triangle_instance(const DenseGraph& g) {
  DenseGraph h = complement(g);
  const int n = h.order();
  for (int v = 0; v < n; ++v)
    if (h.degree(v) % 2 != 0) return std::nullopt;
  if (h.edge_count() % 3 != 0) return std::nullopt;
  EdgeIndex idx(h);
  CoverInstance inst;
  inst.universe_size = idx.size();
  for (int a = 0; a < n; ++a)
    for (VertexMask mb = h.neighbors(a) >> (a + 1) << (a + 1); mb; mb &= mb - 1) {
      int b = std::countr_zero(mb);
      for (VertexMask mc = h.neighbors(a) & h.neighbors(b) & ~((VertexMask{2} << b) - 1); mc; mc &= mc - 1) {
        int c = std::countr_zero(mc);
        inst.candidates.push_back({idx.index(a, b), idx.index(a, c), idx.index(b, c)});
      }
    }
  return inst;
}

}  // namespace

BigInt count_triangle_decompositions(const DenseGraph& g) {
  auto inst = triangle_instance(g);
  if (!inst) return 0;
  return count_covers(*inst);
}

BigInt count_triangle_decompositions_parallel(const DenseGraph& g, int threads) {
  auto inst = triangle_instance(g);
  if (!inst) return 0;
  return count_covers_parallel(*inst, threads);
}

// ---------------------------------------------------------------------------
// Collections of perfect matchings

std::vector<MatchingBitmap> perfect_matchings(const DenseGraph& g, const EdgeIndex& index, VertexMask saturated) {
  std::vector<MatchingBitmap> out;
  if (saturated == 0) {
    out.emplace_back();
    return out;
  }
  if (std::popcount(saturated) % 2 != 0) return out;
  std::array<int, kMaxGraphOrder> slot{};
  std::vector<int> vertices;
  for (VertexMask m = saturated; m; m &= m - 1) {
    slot[std::countr_zero(m)] = static_cast<int>(vertices.size());
    vertices.push_back(std::countr_zero(m));
  }
  CoverInstance inst;
  inst.universe_size = static_cast<int>(vertices.size());
  std::vector<int> edge_of_candidate;
  for (int a : vertices)
    for (VertexMask m = g.neighbors(a) & saturated & ~((VertexMask{2} << a) - 1); m; m &= m - 1) {
      int b = std::countr_zero(m);
      inst.candidates.push_back({slot[a], slot[b]});
      edge_of_candidate.push_back(index.index(a, b));
    }
  enumerate_covers(inst, [&](std::span<const int> chosen) {
    MatchingBitmap mb;
    for (int c : chosen) mb.set(edge_of_candidate[c]);
    out.push_back(mb);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Multiplicity-1 collection with the largest saturated set (first on ties).
int forced_collection(const std::vector<MatchingCollection>& cols) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(cols.size()); ++i) {
    if (cols[i].saturated == 0 || cols[i].multiplicity != 1) continue;
    if (best < 0 || std::popcount(cols[i].saturated) > std::popcount(cols[best].saturated)) best = i;
  }
  return best;
}

}  // namespace

std::vector<MatchingCollection> build_collections(const DenseGraph& g, const WAssignment& assignment,
                                                  const BuildOptions& options) {
  std::vector<VertexMask> sets = assignment.sets;
  std::sort(sets.begin(), sets.end());
  std::vector<MatchingCollection> cols;
  for (std::size_t i = 0; i < sets.size();) {
    std::size_t j = i;
    while (j < sets.size() && sets[j] == sets[i]) ++j;
    MatchingCollection c;
    c.w_set = sets[i];
    c.saturated = g.all_vertices() & ~sets[i];
    c.multiplicity = static_cast<int>(j - i);
    cols.push_back(c);
    i = j;
  }
  const int skip = options.skip_forced ? forced_collection(cols) : -1;
  EdgeIndex index(g);
  for (int i = 0; i < static_cast<int>(cols.size()); ++i) {
    if (i == skip) {
      cols[i].enumerated = false;
      continue;
    }
    cols[i].matchings = perfect_matchings(g, index, cols[i].saturated);
  }
  return cols;
}

std::uint64_t count_compatible(const MatchingCollection& c, const MatchingBitmap& used) {
  std::uint64_t k = 0;
  for (const auto& m : c.matchings)
    if (m.disjoint(used)) ++k;
  return k;
}

// ---------------------------------------------------------------------------
// Matching decompositions: direct search

namespace {

template <int W>
using Bits = std::array<std::uint64_t, W>;

template <int W>
inline bool disjoint(const Bits<W>& a, const Bits<W>& b) {
  for (int i = 0; i < W; ++i)
    if (a[i] & b[i]) return false;
  return true;
}

struct Role {
  int source = 0;  // index into the active collection list
  int picks = 1;
};

template <int W>
class MatchingSearch {
 public:
  // `order` lists the searched collections; `tail` is the counted or pair
  // collection (or -1), `tail_divisor` 1 or 2.
  MatchingSearch(std::vector<std::vector<Bits<W>>> mats, std::vector<Role> order, int tail, int tail_divisor)
      : mats_(std::move(mats)), order_(std::move(order)), tail_(tail), tail_divisor_(tail_divisor) {}

  // Candidate lists for the start of the search.
  std::vector<std::vector<int>> initial_lists() const {
    std::vector<std::vector<int>> lists(mats_.size());
    for (std::size_t c = 0; c < mats_.size(); ++c) {
      lists[c].resize(mats_[c].size());
      std::iota(lists[c].begin(), lists[c].end(), 0);
    }
    return lists;
  }

  std::uint64_t count_from(const std::vector<std::vector<int>>& lists) const {
    std::uint64_t total = 0;
    Bits<W> used{};
    recurse(0, 0, -1, lists, used, total);
    return total;
  }

  // Top-level choices (first pick of the first searched collection), for
  // splitting the search.
  std::vector<int> top_choices(const std::vector<std::vector<int>>& lists) const {
    if (order_.empty()) return {};
    return lists[order_[0].source];
  }

  std::uint64_t count_with_first(const std::vector<std::vector<int>>& lists, int first) const {
    std::uint64_t total = 0;
    Bits<W> used{};
    const Role& r = order_[0];
    const Bits<W>& m = mats_[r.source][first];
    std::vector<std::vector<int>> next;
    if (!filter(lists, m, 0, 0, first, next)) return 0;
    for (int i = 0; i < W; ++i) used[i] |= m[i];
    if (r.picks > 1)
      recurse(0, 1, first, next, used, total);
    else
      recurse(1, 0, -1, next, used, total);
    return total;
  }

  bool searches_anything() const { return !order_.empty(); }

  std::uint64_t leaf_value(const std::vector<std::vector<int>>& lists) const {
    if (tail_ < 0) return 1;
    return lists[tail_].size() / static_cast<std::uint64_t>(tail_divisor_);
  }

 private:
  // Remaining picks needed from collection c after level (pos, pick).
  int still_needed(int c, std::size_t pos, int pick) const {
    if (c == tail_) return tail_divisor_;
    for (std::size_t k = 0; k < order_.size(); ++k)
      if (order_[k].source == c) {
        if (k < pos) return 0;
        if (k == pos) return order_[k].picks - pick - 1;
        return order_[k].picks;
      }
    return 0;
  }

  // Filter every still-relevant list by disjointness from m. For the
  // collection being picked from, also require index > chosen.
  bool filter(const std::vector<std::vector<int>>& lists, const Bits<W>& m, std::size_t pos, int pick, int chosen,
              std::vector<std::vector<int>>& out) const {
    out.assign(lists.size(), {});
    const int current = order_[pos].source;
    for (std::size_t c = 0; c < lists.size(); ++c) {
      int need = still_needed(static_cast<int>(c), pos, pick);
      if (need == 0) continue;
      auto& dst = out[c];
      dst.reserve(lists[c].size());
      for (int idx : lists[c]) {
        if (static_cast<int>(c) == current && idx <= chosen) continue;
        if (disjoint<W>(mats_[c][idx], m)) dst.push_back(idx);
      }
      if (static_cast<int>(dst.size()) < need) return false;
    }
    return true;
  }

  void recurse(std::size_t pos, int pick, int last, const std::vector<std::vector<int>>& lists, Bits<W>& used,
               std::uint64_t& total) const {
    if (pos == order_.size()) {
      total += leaf_value(lists);
      return;
    }
    const Role& r = order_[pos];
    const auto& cand = lists[r.source];
    std::vector<std::vector<int>> next;
    for (int idx : cand) {
      if (idx <= last) continue;
      const Bits<W>& m = mats_[r.source][idx];
      if (!filter(lists, m, pos, pick, idx, next)) continue;
      for (int i = 0; i < W; ++i) used[i] |= m[i];
      if (pick + 1 < r.picks)
        recurse(pos, pick + 1, idx, next, used, total);
      else
        recurse(pos + 1, 0, -1, next, used, total);
      for (int i = 0; i < W; ++i) used[i] &= ~m[i];
    }
  }

  std::vector<std::vector<Bits<W>>> mats_;
  std::vector<Role> order_;
  int tail_;
  int tail_divisor_;
};

struct Prepared {
  std::vector<const MatchingCollection*> active;
  bool impossible = false;
};

Prepared prepare(const DenseGraph& g, const std::vector<MatchingCollection>& collections) {
  Prepared p;
  std::vector<int> cover(g.order(), 0);
  long edge_total = 0;
  for (const auto& c : collections) {
    if (c.multiplicity < 1) throw std::invalid_argument("collection multiplicity must be positive");
    if (c.saturated == 0) continue;
    p.active.push_back(&c);
    for (VertexMask m = c.saturated; m; m &= m - 1) cover[std::countr_zero(m)] += c.multiplicity;
    if (std::popcount(c.saturated) % 2 != 0) p.impossible = true;
    edge_total += static_cast<long>(c.multiplicity) * std::popcount(c.saturated) / 2;
  }
  for (int v = 0; v < g.order(); ++v)
    if (cover[v] != g.degree(v)) p.impossible = true;
  if (edge_total != g.edge_count()) p.impossible = true;
  return p;
}

template <int W>
BigInt run_search(const DenseGraph& g, const std::vector<const MatchingCollection*>& active,
                  const MatchingCountOptions& opt) {
  (void)g;
  const int k = static_cast<int>(active.size());
  int forced = -1;
  if (opt.forced_last) {
    for (int i = 0; i < k; ++i) {
      if (active[i]->multiplicity != 1) continue;
      if (forced < 0 || std::popcount(active[i]->saturated) > std::popcount(active[forced]->saturated)) forced = i;
    }
  }
  for (int i = 0; i < k; ++i)
    if (!active[i]->enumerated && i != forced)
      throw std::invalid_argument("a collection that must be searched was not enumerated");
  // Fail fast on a collection that cannot supply its picks.
  for (int i = 0; i < k; ++i)
    if (i != forced && static_cast<int>(active[i]->matchings.size()) < active[i]->multiplicity) return 0;

  int tail = -1, divisor = 1;
  if (forced >= 0 && opt.count_second_last) {
    for (int i = 0; i < k; ++i) {
      if (i == forced || active[i]->multiplicity != 1) continue;
      if (tail < 0 || std::popcount(active[i]->saturated) > std::popcount(active[tail]->saturated)) tail = i;
    }
  } else if (forced < 0 && opt.pair_shortcut) {
    for (int i = 0; i < k; ++i) {
      if (active[i]->multiplicity != 2) continue;
      if (tail < 0 || std::popcount(active[i]->saturated) > std::popcount(active[tail]->saturated)) tail = i;
    }
    if (tail >= 0) divisor = 2;
  }

  // Compact per-collection matchings into fixed-width words; the forced
  // collection is not needed at all.
  std::vector<std::vector<Bits<W>>> mats(k);
  for (int i = 0; i < k; ++i) {
    if (i == forced) continue;
    for (const auto& m : active[i]->matchings) {
      Bits<W> b{};
      for (int w = 0; w < W; ++w) b[w] = m.words()[w];
      mats[i].push_back(b);
    }
  }
  std::vector<Role> order;
  for (int i = 0; i < k; ++i)
    if (i != forced && i != tail) order.push_back({i, active[i]->multiplicity});
  std::stable_sort(order.begin(), order.end(),
                   [&](const Role& a, const Role& b) { return mats[a.source].size() < mats[b.source].size(); });

  MatchingSearch<W> search(std::move(mats), std::move(order), tail, divisor);
  auto lists = search.initial_lists();
  if (!search.searches_anything()) {
    auto v = search.leaf_value(lists);
    return from_u64(v);
  }
  if (!opt.parallel) return from_u64(search.count_from(lists));

  const std::vector<int> top = search.top_choices(lists);
  std::vector<std::uint64_t> partial(top.size(), 0);
  const long jobs = static_cast<long>(top.size());
  const int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long i = 0; i < jobs; ++i) partial[i] = search.count_with_first(lists, top[i]);
  BigInt total = 0;
  for (auto x : partial) total += from_u64(x);
  return total;
}

}  // namespace

BigInt count_matching_decompositions(const DenseGraph& g, const std::vector<MatchingCollection>& collections,
                                     const MatchingCountOptions& options) {
  Prepared p = prepare(g, collections);
  if (p.impossible) return 0;
  if (p.active.empty()) return g.edge_count() == 0 ? 1 : 0;
  const int words = (g.edge_count() + 63) / 64;
  switch (std::max(words, 1)) {
    case 1: return run_search<1>(g, p.active, options);
    case 2: return run_search<2>(g, p.active, options);
    case 3: return run_search<3>(g, p.active, options);
    case 4: return run_search<4>(g, p.active, options);
    default: return run_search<EdgeMask::kWords>(g, p.active, options);
  }
}

BigInt count_matching_decompositions_exact_cover(const DenseGraph& g,
                                                 const std::vector<MatchingCollection>& collections) {
  Prepared p = prepare(g, collections);
  if (p.impossible) return 0;
  const int e = g.edge_count();
  CoverInstance inst;
  int slot = e;
  BigInt divisor = 1;
  for (const auto* c : p.active) {
    if (!c->enumerated) throw std::invalid_argument("exact-cover route needs every collection enumerated");
    for (int s = 0; s < c->multiplicity; ++s, ++slot)
      for (const auto& m : c->matchings) {
        std::vector<int> set;
        for (int i = 0; i < e; ++i)
          if (m.test(i)) set.push_back(i);
        set.push_back(slot);
        inst.candidates.push_back(std::move(set));
      }
    divisor *= factorial(static_cast<unsigned>(c->multiplicity));
  }
  inst.universe_size = slot;
  BigInt covers = count_covers(inst);
  if (covers % divisor != 0) throw std::logic_error("cover count not divisible by the slot symmetry");
  return covers / divisor;
}

}  // namespace sts
