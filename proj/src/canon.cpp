#include "sts/canon.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <climits>
#include <numeric>
#include <stdexcept>

namespace sts {

namespace {

constexpr int kNone = INT_MAX;

inline std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  std::uint64_t z = h ^ (x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Ordered partition of the vertex set: lab lists the vertices, cells are
// contiguous ranges of lab. start[i] is the first position of the cell holding
// position i; end[s] is one past the last position of the cell starting at s.
struct Partition {
  int n = 0;
  int cells = 0;
  std::array<int, kMaxCanonOrder> lab{};
  std::array<int, kMaxCanonOrder> start{};
  std::array<int, kMaxCanonOrder> end{};

  std::uint64_t mask(int s) const {
    std::uint64_t m = 0;
    for (int i = s; i < end[s]; ++i) m |= std::uint64_t{1} << lab[i];
    return m;
  }
};

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

class Canonizer {
 public:
  Canonizer(std::span<const std::uint64_t> rows, std::span<const int> colours)
      : adj_(rows.begin(), rows.end()), n_(static_cast<int>(rows.size())) {
    if (n_ > kMaxCanonOrder) throw std::invalid_argument("canonical_labeling supports at most 64 vertices");
    if (!colours.empty() && static_cast<int>(colours.size()) != n_)
      throw std::invalid_argument("colour vector length differs from vertex count");
    colours_.assign(colours.begin(), colours.end());
    if (colours_.empty()) colours_.assign(n_, 0);
  }

  CanonResult run() {
    CanonResult res;
    res.n = n_;
    if (n_ == 0) return res;
    Partition root;
    root.n = n_;
    std::iota(root.lab.begin(), root.lab.begin() + n_, 0);
    std::stable_sort(root.lab.begin(), root.lab.begin() + n_,
                     [&](int a, int b) { return colours_[a] < colours_[b]; });
    std::vector<int> queue;
    std::uint64_t h = 0;
    for (int i = 0; i < n_;) {
      int j = i;
      while (j < n_ && colours_[root.lab[j]] == colours_[root.lab[i]]) ++j;
      for (int k = i; k < j; ++k) root.start[k] = i;
      root.end[i] = j;
      ++root.cells;
      queue.push_back(i);
      h = mix(h, static_cast<std::uint64_t>(j - i));
      i = j;
    }
    h = mix(h, refine(root, queue));
    trace_.push_back(h);
    explore(root, 0);

    res.perm.assign(n_, 0);
    for (int i = 0; i < n_; ++i) res.perm[best_lab_[i]] = i;
    res.rows = best_rows_;
    res.generators = generators_;
    res.stabilizer_indices = stabilizer_indices_;
    UnionFind uf(n_);
    for (const auto& g : generators_)
      for (int v = 0; v < n_; ++v) uf.unite(v, g[v]);
    res.orbit.resize(n_);
    for (int v = 0; v < n_; ++v) res.orbit[v] = uf.find(v);
    return res;
  }

 private:
  // Refine to the coarsest equitable partition finer than p, splitting
  // against the cells queued in `queue` first. Returns a hash of the
  // refinement history, which is invariant under isomorphism.
  std::uint64_t refine(Partition& p, std::vector<int> queue) {
    std::array<char, kMaxCanonOrder> queued{};
    for (int s : queue) queued[s] = 1;
    std::uint64_t h = 0;
    std::size_t head = 0;
    std::array<int, kMaxCanonOrder> count{};
    std::array<int, kMaxCanonOrder + 1> bucket{};
    std::array<int, kMaxCanonOrder> scratch{};
    while (head < queue.size() && p.cells < n_) {
      int s = queue[head++];
      queued[s] = 0;
      const std::uint64_t w = p.mask(s);
      h = mix(h, (static_cast<std::uint64_t>(s) << 8) | static_cast<std::uint64_t>(p.end[s] - s));
      for (int c = 0; c < n_;) {
        const int e = p.end[c];
        if (e - c == 1) {
          c = e;
          continue;
        }
        int lo = INT_MAX, hi = -1;
        for (int i = c; i < e; ++i) {
          count[i] = std::popcount(adj_[p.lab[i]] & w);
          lo = std::min(lo, count[i]);
          hi = std::max(hi, count[i]);
        }
        if (lo == hi) {
          h = mix(h, (static_cast<std::uint64_t>(c) << 16) | static_cast<std::uint64_t>(lo));
          c = e;
          continue;
        }
        // Stable counting sort of the cell by neighbour count.
        bucket.fill(0);
        for (int i = c; i < e; ++i) ++bucket[count[i] - lo + 1];
        for (int k = 1; k <= hi - lo + 1; ++k) bucket[k] += bucket[k - 1];
        std::array<int, kMaxCanonOrder> offsets{};
        for (int k = 0; k <= hi - lo; ++k) offsets[k] = bucket[k];
        for (int i = c; i < e; ++i) scratch[c + offsets[count[i] - lo]++] = p.lab[i];
        std::copy(scratch.begin() + c, scratch.begin() + e, p.lab.begin() + c);
        // Fragment boundaries.
        int largest_start = -1, largest_size = 0, fragments = 0;
        std::array<int, kMaxCanonOrder> frag_starts{};
        for (int k = 0; k <= hi - lo; ++k) {
          int fs = c + bucket[k], fe = c + bucket[k + 1];
          if (fs == fe) continue;
          frag_starts[fragments++] = fs;
          for (int i = fs; i < fe; ++i) p.start[i] = fs;
          p.end[fs] = fe;
          h = mix(h, (static_cast<std::uint64_t>(fs) << 24) | (static_cast<std::uint64_t>(k + lo) << 8) |
                         static_cast<std::uint64_t>(fe - fs));
          if (fe - fs > largest_size) {
            largest_size = fe - fs;
            largest_start = fs;
          }
        }
        p.cells += fragments - 1;
        const bool was_queued = queued[c];
        for (int f = 0; f < fragments; ++f) {
          int fs = frag_starts[f];
          if (queued[fs]) continue;
          if (!was_queued && fs == largest_start) continue;
          queued[fs] = 1;
          queue.push_back(fs);
        }
        c = e;
      }
    }
    return mix(h, static_cast<std::uint64_t>(p.cells));
  }

  Partition individualize(const Partition& p, int s, int v) {
    Partition q = p;
    int e = p.end[s];
    int pos = s;
    while (q.lab[pos] != v) ++pos;
    for (int i = pos; i > s; --i) q.lab[i] = q.lab[i - 1];
    q.lab[s] = v;
    q.start[s] = s;
    q.end[s] = s + 1;
    for (int i = s + 1; i < e; ++i) q.start[i] = s + 1;
    q.end[s + 1] = e;
    ++q.cells;
    return q;
  }

  std::vector<std::uint64_t> leaf_rows(const Partition& p) const {
    std::array<int, kMaxCanonOrder> where{};
    for (int i = 0; i < n_; ++i) where[p.lab[i]] = i;
    std::vector<std::uint64_t> rows(n_, 0);
    for (int i = 0; i < n_; ++i) {
      std::uint64_t m = adj_[p.lab[i]], r = 0;
      while (m) {
        int u = std::countr_zero(m);
        m &= m - 1;
        r |= std::uint64_t{1} << where[u];
      }
      rows[i] = r;
    }
    return rows;
  }

  // Lexicographic comparison of the current trace prefix against a recorded
  // one (only the common length is compared).
  static int compare_trace(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::size_t m = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < m; ++i)
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
  }

  void add_generator(const std::array<int, kMaxCanonOrder>& from, const std::array<int, kMaxCanonOrder>& to) {
    std::vector<int> g(n_);
    bool identity = true;
    for (int i = 0; i < n_; ++i) {
      g[from[i]] = to[i];
      identity = identity && from[i] == to[i];
    }
    if (!identity) generators_.push_back(std::move(g));
  }

  // Orbits of the subgroup generated by known generators that fix every
  // vertex of the current prefix.
  UnionFind stabilizer_orbits() const {
    UnionFind uf(n_);
    for (const auto& g : generators_) {
      bool fixes = true;
      for (int v : prefix_)
        if (g[v] != v) {
          fixes = false;
          break;
        }
      if (!fixes) continue;
      for (int v = 0; v < n_; ++v) uf.unite(v, g[v]);
    }
    return uf;
  }

  int common_prefix_with_first() const {
    int d = 0;
    while (d < static_cast<int>(prefix_.size()) && d < static_cast<int>(first_prefix_.size()) &&
           prefix_[d] == first_prefix_[d])
      ++d;
    return d;
  }

  int leaf(const Partition& p) {
    auto rows = leaf_rows(p);
    if (!have_first_) {
      have_first_ = true;
      first_trace_ = best_trace_ = trace_;
      first_lab_ = best_lab_ = p.lab;
      first_rows_ = best_rows_ = rows;
      first_prefix_ = prefix_;
      return kNone;
    }
    if (trace_ == first_trace_ && rows == first_rows_) {
      add_generator(first_lab_, p.lab);
      return common_prefix_with_first();
    }
    int c = compare_trace(trace_, best_trace_);
    if (c == 0 && trace_.size() != best_trace_.size()) c = trace_.size() < best_trace_.size() ? -1 : 1;
    if (c == 0) c = rows < best_rows_ ? -1 : (rows == best_rows_ ? 0 : 1);
    if (c > 0) {
      best_trace_ = trace_;
      best_lab_ = p.lab;
      best_rows_ = std::move(rows);
    } else if (c == 0) {
      add_generator(best_lab_, p.lab);
    }
    return kNone;
  }

  int explore(const Partition& p, int depth) {
    if (have_first_) {
      bool eq_first = compare_trace(trace_, first_trace_) == 0;
      if (!eq_first && compare_trace(trace_, best_trace_) < 0) return kNone;
    }
    if (p.cells == n_) return leaf(p);

    const bool first_path = !have_first_;
    // Target: first smallest non-singleton cell.
    int target = -1, target_size = INT_MAX;
    for (int s = 0; s < n_; s = p.end[s]) {
      int sz = p.end[s] - s;
      if (sz > 1 && sz < target_size) {
        target = s;
        target_size = sz;
      }
    }
    std::vector<int> children(p.lab.begin() + target, p.lab.begin() + p.end[target]);
    std::vector<int> done;
    for (int v : children) {
      if (!done.empty()) {
        UnionFind uf = stabilizer_orbits();
        int rv = uf.find(v);
        bool equivalent = false;
        for (int u : done)
          if (uf.find(u) == rv) {
            equivalent = true;
            break;
          }
        if (equivalent) continue;
      }
      Partition q = individualize(p, target, v);
      std::uint64_t h = mix(static_cast<std::uint64_t>(target), refine(q, {target}));
      trace_.push_back(h);
      prefix_.push_back(v);
      int back = explore(q, depth + 1);
      prefix_.pop_back();
      trace_.pop_back();
      done.push_back(v);
      if (back < depth) return back;
    }
    if (first_path) {
      UnionFind uf = stabilizer_orbits();
      int r = uf.find(children.front());
      int size = 0;
      for (int v = 0; v < n_; ++v)
        if (uf.find(v) == r) ++size;
      stabilizer_indices_.push_back(size);
    }
    return kNone;
  }

  std::vector<std::uint64_t> adj_;
  int n_;
  std::vector<int> colours_;

  std::vector<std::uint64_t> trace_;
  std::vector<int> prefix_;

  bool have_first_ = false;
  std::vector<std::uint64_t> first_trace_, best_trace_;
  std::array<int, kMaxCanonOrder> first_lab_{}, best_lab_{};
  std::vector<std::uint64_t> first_rows_, best_rows_;
  std::vector<int> first_prefix_;

  std::vector<std::vector<int>> generators_;
  std::vector<int> stabilizer_indices_;
};

}  // namespace

BigInt CanonResult::aut_order() const {
  BigInt r = 1;
  for (int x : stabilizer_indices) r *= x;
  return r;
}

std::uint64_t CanonResult::aut_order_u64() const {
  std::uint64_t r = 1;
  for (int x : stabilizer_indices)
    if (__builtin_mul_overflow(r, static_cast<std::uint64_t>(x), &r))
      throw std::overflow_error("automorphism group order exceeds 64 bits");
  return r;
}

CanonResult canonical_labeling(std::span<const std::uint64_t> rows, std::span<const int> colours) {
  Canonizer c(rows, colours);
  return c.run();
}

}  // namespace sts
