#include "sts/model.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>

namespace sts {

bool is_admissible_order(int v) { return v >= 1 && (v % 6 == 1 || v % 6 == 3); }

// ---------------------------------------------------------------------------
// TripleSystem

TripleSystem::TripleSystem(int v, std::vector<Block> blocks) : v_(v), blocks_(std::move(blocks)) {
  if (v < 0) throw std::invalid_argument("negative point count");
  third_.assign(static_cast<std::size_t>(v) * v, -1);
  for (auto& b : blocks_) {
    std::sort(b.begin(), b.end());
    if (b[0] < 0 || b[2] >= v) throw std::invalid_argument("block point out of range");
    if (b[0] == b[1] || b[1] == b[2]) throw std::invalid_argument("block with repeated point");
    for (int i = 0; i < 3; ++i) {
      int x = b[i], y = b[(i + 1) % 3], z = b[(i + 2) % 3];
      auto& slot = third_[static_cast<std::size_t>(x) * v + y];
      if (slot != -1) throw std::invalid_argument("pair covered by two blocks");
      slot = static_cast<std::int16_t>(z);
      third_[static_cast<std::size_t>(y) * v + x] = static_cast<std::int16_t>(z);
    }
  }
  std::sort(blocks_.begin(), blocks_.end());
}

bool TripleSystem::is_complete() const {
  return static_cast<long>(blocks_.size()) * 6 == static_cast<long>(v_) * (v_ - 1);
}

std::optional<Point> TripleSystem::third_point(Point a, Point b) const {
  if (a == b || a < 0 || b < 0 || a >= v_ || b >= v_) return std::nullopt;
  int t = third_[static_cast<std::size_t>(a) * v_ + b];
  if (t < 0) return std::nullopt;
  return t;
}

TripleSystem TripleSystem::relabeled(std::span<const Point> perm) const {
  std::vector<Block> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back({perm[b[0]], perm[b[1]], perm[b[2]]});
  return TripleSystem(v_, std::move(out));
}

// ---------------------------------------------------------------------------
// DenseGraph

DenseGraph::DenseGraph(int n) : n_(n) {
  if (n < 0 || n > kMaxGraphOrder) throw std::invalid_argument("graph order out of range");
}

DenseGraph DenseGraph::from_edges(int n, std::span<const Edge> edges) {
  DenseGraph g(n);
  for (const auto& e : edges) g.add_edge(e.u, e.v);
  return g;
}

int DenseGraph::edge_count() const {
  int s = 0;
  for (int i = 0; i < n_; ++i) s += std::popcount(rows_[i]);
  return s / 2;
}

void DenseGraph::add_edge(int a, int b) {
  if (a == b || a < 0 || b < 0 || a >= n_ || b >= n_) throw std::invalid_argument("bad edge");
  rows_[a] |= VertexMask{1} << b;
  rows_[b] |= VertexMask{1} << a;
}

void DenseGraph::remove_edge(int a, int b) {
  rows_[a] &= ~(VertexMask{1} << b);
  rows_[b] &= ~(VertexMask{1} << a);
}

std::vector<Edge> DenseGraph::edges() const {
  std::vector<Edge> out;
  for (int a = 0; a < n_; ++a) {
    VertexMask m = rows_[a] & ~((VertexMask{2} << a) - 1);
    while (m) {
      int b = std::countr_zero(m);
      m &= m - 1;
      out.push_back({a, b});
    }
  }
  return out;
}

DenseGraph DenseGraph::relabeled(std::span<const int> perm) const {
  DenseGraph g(n_);
  for (int a = 0; a < n_; ++a) {
    VertexMask m = rows_[a];
    VertexMask r = 0;
    while (m) {
      int b = std::countr_zero(m);
      m &= m - 1;
      r |= VertexMask{1} << perm[b];
    }
    g.rows_[perm[a]] = r;
  }
  return g;
}

DenseGraph DenseGraph::with_order(int n) const {
  if (n < n_) throw std::invalid_argument("with_order cannot shrink a graph");
  DenseGraph g(n);
  g.rows_ = rows_;
  return g;
}

DenseGraph complement(const DenseGraph& g) {
  DenseGraph h(g.order());
  VertexMask all = g.all_vertices();
  for (int a = 0; a < g.order(); ++a) {
    VertexMask m = all & ~g.neighbors(a) & ~(VertexMask{1} << a);
    while (m) {
      int b = std::countr_zero(m);
      m &= m - 1;
      if (b > a) h.add_edge(a, b);
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// EdgeMask

bool EdgeMask::any() const {
  return std::any_of(w_.begin(), w_.end(), [](std::uint64_t x) { return x != 0; });
}

int EdgeMask::count() const {
  int c = 0;
  for (auto x : w_) c += std::popcount(x);
  return c;
}

bool EdgeMask::disjoint(const EdgeMask& o) const {
  for (int i = 0; i < kWords; ++i)
    if (w_[i] & o.w_[i]) return false;
  return true;
}

EdgeMask& EdgeMask::operator|=(const EdgeMask& o) {
  for (int i = 0; i < kWords; ++i) w_[i] |= o.w_[i];
  return *this;
}
EdgeMask& EdgeMask::operator&=(const EdgeMask& o) {
  for (int i = 0; i < kWords; ++i) w_[i] &= o.w_[i];
  return *this;
}
EdgeMask& EdgeMask::operator^=(const EdgeMask& o) {
  for (int i = 0; i < kWords; ++i) w_[i] ^= o.w_[i];
  return *this;
}

std::strong_ordering operator<=>(const EdgeMask& a, const EdgeMask& b) {
  for (int i = EdgeMask::kWords - 1; i >= 0; --i)
    if (a.w_[i] != b.w_[i]) return a.w_[i] <=> b.w_[i];
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// EdgeIndex

EdgeIndex::EdgeIndex(const DenseGraph& g) : edges_(g.edges()) {
  for (auto& row : table_) row.fill(-1);
  for (int i = 0; i < size(); ++i) {
    table_[edges_[i].u][edges_[i].v] = static_cast<std::int16_t>(i);
    table_[edges_[i].v][edges_[i].u] = static_cast<std::int16_t>(i);
  }
}

EdgeMask EdgeIndex::mask_of(std::span<const Edge> edges) const {
  EdgeMask m;
  for (const auto& e : edges) {
    int i = index(e.u, e.v);
    if (i < 0) throw std::invalid_argument("edge not in graph");
    m.set(i);
  }
  return m;
}

std::vector<Edge> EdgeIndex::edges_of(const EdgeMask& m) const {
  std::vector<Edge> out;
  for (int i = 0; i < size(); ++i)
    if (m.test(i)) out.push_back(edges_[i]);
  return out;
}

EdgeMask EdgeIndex::all() const {
  EdgeMask m;
  for (int i = 0; i < size(); ++i) m.set(i);
  return m;
}

// ---------------------------------------------------------------------------
// DegreeSequence

DegreeSequence DegreeSequence::from_degrees(std::span<const int> degrees) {
  std::vector<int> d(degrees.begin(), degrees.end());
  std::sort(d.begin(), d.end());
  DegreeSequence s;
  for (int x : d) {
    if (x < 0) throw std::invalid_argument("negative degree");
    if (!s.terms_.empty() && s.terms_.back().first == x)
      ++s.terms_.back().second;
    else
      s.terms_.emplace_back(x, 1);
  }
  return s;
}

DegreeSequence DegreeSequence::of(const DenseGraph& g) {
  std::vector<int> d(g.order());
  for (int i = 0; i < g.order(); ++i) d[i] = g.degree(i);
  return from_degrees(d);
}

DegreeSequence DegreeSequence::parse(std::string_view text) {
  std::vector<int> degrees;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == ',' || text[i] == '_' || text[i] == '\t')) ++i;
  };
  auto number = [&](std::string_view what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
    if (ec != std::errc{}) throw std::invalid_argument("degree sequence: expected " + std::string(what) + " in '" + std::string(text) + "'");
    i = static_cast<std::size_t>(ptr - text.data());
    return value;
  };
  skip();
  while (i < text.size()) {
    int d = number("degree");
    int mult = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      bool braced = i < text.size() && text[i] == '{';
      if (braced) ++i;
      mult = number("multiplicity");
      if (braced) {
        if (i >= text.size() || text[i] != '}') throw std::invalid_argument("degree sequence: unbalanced brace");
        ++i;
      }
    }
    if (mult < 1) throw std::invalid_argument("degree sequence: multiplicity must be positive");
    degrees.insert(degrees.end(), mult, d);
    skip();
  }
  auto s = from_degrees(degrees);
  if (s.degree_sum() % 2 != 0) throw std::invalid_argument("degree sequence has odd degree sum: " + std::string(text));
  return s;
}

int DegreeSequence::order() const {
  int n = 0;
  for (const auto& [d, m] : terms_) n += m;
  return n;
}

long DegreeSequence::degree_sum() const {
  long s = 0;
  for (const auto& [d, m] : terms_) s += static_cast<long>(d) * m;
  return s;
}

int DegreeSequence::multiplicity(int degree) const {
  for (const auto& [d, m] : terms_)
    if (d == degree) return m;
  return 0;
}

std::vector<int> DegreeSequence::expanded() const {
  std::vector<int> out;
  for (const auto& [d, m] : terms_) out.insert(out.end(), m, d);
  return out;
}

bool DegreeSequence::is_graphical() const {
  std::vector<int> d = expanded();
  const int n = static_cast<int>(d.size());
  if (degree_sum() % 2 != 0) return false;
  if (n == 0) return true;
  std::sort(d.rbegin(), d.rend());
  if (d.front() > n - 1) return false;
  long lhs = 0;
  for (int k = 1; k <= n; ++k) {
    lhs += d[k - 1];
    long rhs = static_cast<long>(k) * (k - 1);
    for (int i = k; i < n; ++i) rhs += std::min(d[i], k);
    if (lhs > rhs) return false;
  }
  return true;
}

std::string DegreeSequence::str() const {
  std::string out;
  for (const auto& [d, m] : terms_) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(d) + "^" + std::to_string(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// DefiningSet

namespace {

std::vector<Block> sorted_triples(std::vector<Block> t) {
  for (auto& b : t) std::sort(b.begin(), b.end());
  std::sort(t.begin(), t.end());
  return t;
}

}  // namespace

DefiningSet::DefiningSet(int w, std::vector<Block> triples) : w_(w), triples_(sorted_triples(std::move(triples))) {
  if (w < 2 || w > 8) throw std::invalid_argument("defining set size must be in 2..8");
  std::vector<std::vector<int>> cover(w, std::vector<int>(w, 0));
  for (const auto& b : triples_) {
    if (b[0] < 0 || b[2] >= w || b[0] == b[1] || b[1] == b[2])
      throw std::invalid_argument("pattern triple out of range");
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (++cover[b[i]][b[j]] > 1) throw std::invalid_argument("pattern triples share a pair");
  }
  for (int a = 0; a < w; ++a)
    for (int b = a + 1; b < w; ++b)
      if (cover[a][b] == 0) pairs_.push_back({a, b});
}

DefiningSet DefiningSet::parse(int w, std::string_view pattern) {
  std::vector<Block> triples;
  std::vector<int> digits;
  auto flush = [&] {
    if (digits.empty()) return;
    if (digits.size() != 3) throw std::invalid_argument("pattern blocks must have three points: " + std::string(pattern));
    triples.push_back({digits[0], digits[1], digits[2]});
    digits.clear();
  };
  for (char c : pattern) {
    if (c >= '0' && c <= '9')
      digits.push_back(c - '0');
    else if (c == ',' || c == ' ' || c == '{' || c == '}' || c == ';')
      flush();
    else
      throw std::invalid_argument("unexpected character in pattern: " + std::string(pattern));
  }
  flush();
  return DefiningSet(w, std::move(triples));
}

std::string DefiningSet::pattern_string() const {
  std::string out;
  for (const auto& b : triples_) {
    if (!out.empty()) out.push_back(',');
    for (int x : b) out.push_back(static_cast<char>('0' + x));
  }
  return out;
}

std::string DefiningSet::name() const { return "w=" + std::to_string(w_) + " {" + pattern_string() + "}"; }

std::uint64_t DefiningSet::triple_bit(const Block& b) {
  auto c2 = [](int x) { return x * (x - 1) / 2; };
  auto c3 = [](int x) { return x * (x - 1) * (x - 2) / 6; };
  return std::uint64_t{1} << (c3(b[2]) + c2(b[1]) + b[0]);
}

namespace {

std::uint64_t image_mask(const std::vector<Block>& triples, const std::vector<int>& perm) {
  std::uint64_t m = 0;
  for (const auto& b : triples) {
    Block t{perm[b[0]], perm[b[1]], perm[b[2]]};
    std::sort(t.begin(), t.end());
    m |= DefiningSet::triple_bit(t);
  }
  return m;
}

}  // namespace

std::uint64_t DefiningSet::automorphism_count() const {
  std::vector<int> perm(w_);
  std::iota(perm.begin(), perm.end(), 0);
  const std::uint64_t self = image_mask(triples_, perm);
  std::uint64_t count = 0;
  do {
    if (image_mask(triples_, perm) == self) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

std::vector<std::uint64_t> DefiningSet::labeled_copies() const {
  std::vector<int> perm(w_);
  std::iota(perm.begin(), perm.end(), 0);
  std::set<std::uint64_t> seen;
  do {
    seen.insert(image_mask(triples_, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {seen.begin(), seen.end()};
}

std::vector<CompletionShape> DefiningSet::shapes() const {
  // Set partitions of the pairs into classes of pairwise point-disjoint pairs,
  // generated in restricted-growth order so each partition appears once.
  std::vector<CompletionShape> out;
  const int m = static_cast<int>(pairs_.size());
  std::vector<std::vector<int>> classes;
  std::vector<unsigned> used;  // points touched per class
  auto rec = [&](auto&& self, int i) -> void {
    if (i == m) {
      out.push_back({classes});
      return;
    }
    unsigned pts = (1u << pairs_[i][0]) | (1u << pairs_[i][1]);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      if (used[c] & pts) continue;
      classes[c].push_back(i);
      used[c] |= pts;
      self(self, i + 1);
      used[c] &= ~pts;
      classes[c].pop_back();
    }
    classes.push_back({i});
    used.push_back(pts);
    self(self, i + 1);
    classes.pop_back();
    used.pop_back();
  };
  rec(rec, 0);
  return out;
}

std::optional<DegreeSequence> DefiningSet::shape_sequence(const CompletionShape& s, int n) const {
  const int k = static_cast<int>(s.classes.size());
  if (k > n) return std::nullopt;
  std::vector<int> degrees(n, w_);
  for (int i = 0; i < k; ++i) degrees[i] = w_ - 2 * static_cast<int>(s.classes[i].size());
  for (int d : degrees)
    if (d < 0) return std::nullopt;
  return DegreeSequence::from_degrees(degrees);
}

std::vector<DegreeSequence> DefiningSet::degree_sequences(int n) const {
  std::set<DegreeSequence> seen;
  for (const auto& s : shapes())
    if (auto seq = shape_sequence(s, n); seq && seq->is_graphical()) seen.insert(*seq);
  return {seen.begin(), seen.end()};
}

// ---------------------------------------------------------------------------
// Block splitting and the graph view

std::vector<std::vector<Point>> induced_pbd(const TripleSystem& sts, std::span<const Point> subset) {
  if (!sts.is_complete()) throw std::invalid_argument("induced_pbd requires a complete system");
  std::vector<char> in(sts.order(), 0);
  for (Point p : subset) in.at(p) = 1;
  std::vector<std::vector<Point>> out;
  for (const auto& b : sts.blocks()) {
    std::vector<Point> meet;
    for (Point p : b)
      if (in[p]) meet.push_back(p);
    if (meet.size() >= 2) out.push_back(std::move(meet));
  }
  std::sort(out.begin(), out.end());
  return out;
}

BlockSplit split_blocks(const TripleSystem& sts, std::span<const Point> w_set) {
  std::vector<char> in(sts.order(), 0);
  for (Point p : w_set) in.at(p) = 1;
  BlockSplit s;
  for (const auto& b : sts.blocks()) {
    int k = in[b[0]] + in[b[1]] + in[b[2]];
    (k >= 2 ? s.inner : k == 1 ? s.single : s.disjoint).push_back(b);
  }
  return s;
}

std::optional<std::vector<Point>> match_pattern(const TripleSystem& sts, std::span<const Point> subset,
                                                const DefiningSet& pattern) {
  const int w = pattern.size();
  if (static_cast<int>(subset.size()) != w) return std::nullopt;
  std::vector<Point> pts(subset.begin(), subset.end());
  std::vector<int> perm(w);
  std::iota(perm.begin(), perm.end(), 0);
  // Try every assignment pattern point i -> pts[perm[i]].
  do {
    bool ok = true;
    int inside = 0;
    for (const auto& b : pattern.triples()) {
      auto t = sts.third_point(pts[perm[b[0]]], pts[perm[b[1]]]);
      if (!t || *t != pts[perm[b[2]]]) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (int a = 0; a < w && ok; ++a)
      for (int b = a + 1; b < w; ++b)
        if (auto t = sts.third_point(pts[a], pts[b]); t && std::find(pts.begin(), pts.end(), *t) != pts.end()) ++inside;
    // Each inner triple is seen three times.
    if (inside != 3 * static_cast<int>(pattern.triples().size())) return std::nullopt;
    std::vector<Point> out(w);
    for (int i = 0; i < w; ++i) out[i] = pts[perm[i]];
    return out;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

SplitView split_view(const TripleSystem& sts, std::span<const Point> w_points) {
  if (!sts.is_complete()) throw std::invalid_argument("split_view requires a complete system");
  const int v = sts.order();
  const int w = static_cast<int>(w_points.size());
  SplitView view;
  view.v = v;
  view.w_points.assign(w_points.begin(), w_points.end());
  std::vector<int> w_slot(v, -1), g_slot(v, -1);
  for (int i = 0; i < w; ++i) w_slot.at(w_points[i]) = i;
  for (Point p = 0; p < v; ++p)
    if (w_slot[p] < 0) {
      g_slot[p] = static_cast<int>(view.g_points.size());
      view.g_points.push_back(p);
    }
  const int n = static_cast<int>(view.g_points.size());
  view.graph = DenseGraph(n);
  view.deficiency_sets.assign(w, 0);
  std::vector<std::vector<Edge>> colour_edges(w);
  for (const auto& b : sts.blocks()) {
    int k = (w_slot[b[0]] >= 0) + (w_slot[b[1]] >= 0) + (w_slot[b[2]] >= 0);
    if (k >= 2) {
      view.inner.push_back(b);
      if (k == 2) {
        // The outside point lies in W_p for both inside points.
        int x = -1;
        std::vector<int> ws;
        for (Point p : b) (w_slot[p] >= 0 ? ws.push_back(w_slot[p]) : void(x = g_slot[p]));
        for (int p : ws) view.deficiency_sets[p] |= VertexMask{1} << x;
      }
    } else if (k == 1) {
      int p = -1;
      std::vector<int> xs;
      for (Point q : b) (w_slot[q] >= 0 ? void(p = w_slot[q]) : xs.push_back(g_slot[q]));
      view.graph.add_edge(xs[0], xs[1]);
      colour_edges[p].push_back({std::min(xs[0], xs[1]), std::max(xs[0], xs[1])});
    } else {
      view.triangles.push_back({g_slot[b[0]], g_slot[b[1]], g_slot[b[2]]});
    }
  }
  EdgeIndex idx(view.graph);
  for (int p = 0; p < w; ++p) view.colour_classes.push_back(idx.mask_of(colour_edges[p]));
  return view;
}

TripleSystem reassemble(const SplitView& view) {
  std::vector<Block> blocks = view.inner;
  EdgeIndex idx(view.graph);
  for (std::size_t p = 0; p < view.colour_classes.size(); ++p)
    for (const auto& e : idx.edges_of(view.colour_classes[p]))
      blocks.push_back({view.w_points[p], view.g_points[e.u], view.g_points[e.v]});
  for (const auto& t : view.triangles)
    blocks.push_back({view.g_points[t[0]], view.g_points[t[1]], view.g_points[t[2]]});
  return TripleSystem(view.v, std::move(blocks));
}

}  // namespace sts
