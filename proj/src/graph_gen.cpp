#include "sts/graph_gen.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "sts/canon.hpp"

namespace sts {

// ---------------------------------------------------------------------------
// Specs

Part Part::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) throw std::invalid_argument("part must look like r/m: " + text);
  Part p;
  try {
    p.residue = std::stoi(text.substr(0, slash));
    p.modulus = std::stoi(text.substr(slash + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("part must look like r/m: " + text);
  }
  if (p.modulus < 1 || p.residue < 0 || p.residue >= p.modulus)
    throw std::invalid_argument("part needs 0 <= r < m: " + text);
  return p;
}

std::string Part::str() const { return std::to_string(residue) + "/" + std::to_string(modulus); }

GenSpec GenSpec::for_sequence(const DegreeSequence& s) {
  GenSpec g;
  g.n = s.order();
  g.edges = s.edge_count();
  g.min_degree = s.min_degree();
  g.max_degree = s.max_degree();
  g.exact_sequence = s;
  return g;
}

void GenSpec::validate() const {
  if (n < 1 || n > kMaxGraphOrder) throw std::invalid_argument("graph order must be in 1..32");
  if (edges < 0) throw std::invalid_argument("negative edge count");
  if (min_degree < 0 || min_degree > max_degree || max_degree > std::max(0, n - 1))
    throw std::invalid_argument("degree window must satisfy 0 <= d <= D <= n-1");
  if (exact_sequence) {
    if (exact_sequence->order() != n) throw std::invalid_argument("exact sequence order differs from n");
    if (exact_sequence->edge_count() != edges || exact_sequence->degree_sum() != 2L * edges)
      throw std::invalid_argument("exact sequence degree sum differs from 2e");
  }
  if (part && (part->modulus < 1 || part->residue < 0 || part->residue >= part->modulus))
    throw std::invalid_argument("part needs 0 <= r < m");
}

std::string GenSpec::str() const {
  std::ostringstream os;
  os << "n=" << n << " e=" << edges << " d=" << min_degree << " D=" << max_degree;
  if (exact_sequence) os << " seq=" << exact_sequence->str();
  if (part) os << " part=" << part->str();
  return os.str();
}

// ---------------------------------------------------------------------------
// Canonical form

namespace {

std::vector<std::uint64_t> rows64(const DenseGraph& g) {
  std::vector<std::uint64_t> r(g.order());
  for (int i = 0; i < g.order(); ++i) r[i] = g.neighbors(i);
  return r;
}

DenseGraph from_rows(const std::vector<std::uint64_t>& rows) {
  DenseGraph g(static_cast<int>(rows.size()));
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    std::uint64_t m = rows[i] >> (i + 1) << (i + 1);
    while (m) {
      int j = std::countr_zero(m);
      m &= m - 1;
      g.add_edge(i, j);
    }
  }
  return g;
}

}  // namespace

AutClassifiedGraph canonical_form(const DenseGraph& g) {
  auto rows = rows64(g);
  CanonResult c = canonical_labeling(rows);
  return {from_rows(c.rows), c.aut_order(), DegreeSequence::of(g)};
}

// ---------------------------------------------------------------------------
// Generation by canonical vertex augmentation. The canonical parent of a graph
// is obtained by deleting a maximum-degree vertex, chosen as the one with the
// largest canonical position; a child is accepted when the added vertex lies in
// the same automorphism orbit as that vertex.

namespace {

class Generator {
 public:
  Generator(const GenSpec& spec, const std::function<bool(const AutClassifiedGraph&)>& visitor)
      : spec_(spec), visitor_(visitor) {
    if (spec.exact_sequence) target_ = spec.exact_sequence->expanded();
    split_level_ = std::min(spec.n, std::max(1, spec.n - 2));
  }

  GenerationStats run() {
    if (!feasible()) {
      stats_.infeasible = true;
      return stats_;
    }
    DenseGraph root(1);
    if (!viable(root)) return stats_;
    if (split_level_ == 1 && !take_slice()) return stats_;
    descend(root, canonical_labeling(rows64(root)));
    return stats_;
  }

 private:
  bool feasible() const {
    const auto& s = spec_;
    if (static_cast<long>(s.n) * s.min_degree > 2L * s.edges) return false;
    if (static_cast<long>(s.n) * s.max_degree < 2L * s.edges) return false;
    if (static_cast<long>(s.n) * (s.n - 1) / 2 < s.edges) return false;
    if (s.exact_sequence && !s.exact_sequence->is_graphical()) return false;
    return true;
  }

  bool take_slice() {
    std::uint64_t idx = slice_counter_++;
    return !spec_.part || static_cast<int>(idx % spec_.part->modulus) == spec_.part->residue;
  }

  // Necessary conditions for extending h (k vertices) to a graph meeting the
  // spec by adding the remaining n-k vertices.
  bool viable(const DenseGraph& h) const {
    const int k = h.order();
    const int remaining = spec_.n - k;
    const int d = spec_.min_degree, D = spec_.max_degree;
    const int e = h.edge_count();
    if (e > spec_.edges) return false;
    long capacity = 0, deficit = 0;
    for (int v = 0; v < k; ++v) {
      int deg = h.degree(v);
      if (deg > D) return false;
      if (deg + remaining < d) return false;
      capacity += std::min(D - deg, remaining);
      deficit += std::max(0, d - deg);
    }
    const long need = spec_.edges - e;
    const long bound = std::min((static_cast<long>(remaining) * D + capacity) / 2,
                                capacity + static_cast<long>(remaining) * (remaining - 1) / 2);
    if (need > bound) return false;
    if (need < deficit) return false;
    if (!target_.empty() && !sequence_reachable(h, remaining)) return false;
    return true;
  }

  // Each existing vertex must be matched to a distinct target degree in
  // [deg, deg + remaining]; greedy assignment by interval right end.
  bool sequence_reachable(const DenseGraph& h, int remaining) const {
    std::vector<int> degs(h.order());
    for (int v = 0; v < h.order(); ++v) degs[v] = h.degree(v);
    std::sort(degs.begin(), degs.end());  // equal widths: sorting by left end sorts by right end
    std::vector<char> used(target_.size(), 0);
    std::size_t lo = 0;
    for (int deg : degs) {
      while (lo < target_.size() && (used[lo] || target_[lo] < deg)) ++lo;
      std::size_t j = lo;
      while (j < target_.size() && (used[j] || target_[j] < deg)) ++j;
      if (j >= target_.size() || target_[j] > deg + remaining) return false;
      used[j] = 1;
    }
    return true;
  }

  bool complete(const DenseGraph& h) const {
    if (h.edge_count() != spec_.edges) return false;
    for (int v = 0; v < h.order(); ++v)
      if (h.degree(v) < spec_.min_degree || h.degree(v) > spec_.max_degree) return false;
    if (spec_.exact_sequence && DegreeSequence::of(h) != *spec_.exact_sequence) return false;
    return true;
  }

  void descend(const DenseGraph& h, const CanonResult& canon) {
    if (stop_) return;
    ++stats_.nodes;
    const int k = h.order();
    if (k == spec_.n) {
      if (complete(h)) {
        ++stats_.emitted;
        AutClassifiedGraph out{from_rows(canon.rows), canon.aut_order(), DegreeSequence::of(h)};
        if (!visitor_(out)) stop_ = true;
      }
      return;
    }
    const int D = spec_.max_degree;
    const int remaining_after = spec_.n - k - 1;
    int max_deg = 0;
    VertexMask allowed = 0, top = 0;
    for (int v = 0; v < k; ++v) {
      int deg = h.degree(v);
      if (deg > max_deg) {
        max_deg = deg;
        top = 0;
      }
      if (deg == max_deg) top |= VertexMask{1} << v;
      if (deg < D) allowed |= VertexMask{1} << v;
    }
    const int lo = std::max({max_deg, spec_.min_degree - remaining_after, 0});
    const int hi = std::min(D, k);
    if (lo > hi) return;

    std::set<std::vector<std::uint64_t>> seen;
    std::vector<int> pool;
    for (VertexMask m = allowed; m; m &= m - 1) pool.push_back(std::countr_zero(m));

    // Subsets of the pool of size in [lo, hi], in lexicographic order.
    VertexMask chosen = 0;
    auto try_subset = [&](VertexMask s) {
      const int size = std::popcount(s);
      if (size == max_deg && (s & top)) return;  // a neighbour would overtake the new vertex
      DenseGraph child = h.with_order(k + 1);
      for (VertexMask m = s; m; m &= m - 1) child.add_edge(k, std::countr_zero(m));
      if (!viable(child)) return;
      CanonResult c = canonical_labeling(rows64(child));
      // Maximum-degree vertex with the largest canonical position.
      int pick = -1;
      for (int v = 0; v <= k; ++v)
        if (child.degree(v) == size && (pick < 0 || c.perm[v] > c.perm[pick])) pick = v;
      if (c.orbit[pick] != c.orbit[k]) return;
      if (!seen.insert(c.rows).second) return;
      if (k + 1 == split_level_ && !take_slice()) return;
      descend(child, c);
    };
    auto rec = [&](auto&& self, std::size_t i, int size) -> void {
      if (stop_) return;
      if (size >= lo) try_subset(chosen);
      if (size == hi) return;
      for (std::size_t j = i; j < pool.size(); ++j) {
        if (size + static_cast<int>(pool.size() - j) < lo) break;
        chosen |= VertexMask{1} << pool[j];
        self(self, j + 1, size + 1);
        chosen &= ~(VertexMask{1} << pool[j]);
      }
    };
    rec(rec, 0, 0);
  }

  GenSpec spec_;
  const std::function<bool(const AutClassifiedGraph&)>& visitor_;
  std::vector<int> target_;
  int split_level_;
  std::uint64_t slice_counter_ = 0;
  bool stop_ = false;
  GenerationStats stats_;
};

}  // namespace

GenerationStats generate(const GenSpec& spec, const std::function<bool(const AutClassifiedGraph&)>& visitor) {
  spec.validate();
  Generator gen(spec, visitor);
  return gen.run();
}

// ---------------------------------------------------------------------------
// Pendant extension plans

std::string PlanStep::str() const {
  std::ostringstream os;
  os << target.str() << " <- " << source.str();
  if (ignorable) os << " (ignorable)";
  return os.str();
}

namespace {

struct Structure {
  int pairs = 0;
  // Per S1 degree term: decrements assigned to its vertices (non-increasing).
  std::vector<std::vector<int>> decrements;
};

void distribute(const std::vector<DegreeSequence::Term>& terms, std::size_t ti, int left, Structure& cur,
                std::vector<Structure>& out) {
  if (ti == terms.size()) {
    if (left == 0) out.push_back(cur);
    return;
  }
  const auto [deg, mult] = terms[ti];
  // Non-increasing list of `mult` decrements, each in [0, deg], summing to at most `left`.
  std::vector<int> dec;
  auto rec = [&](auto&& self, int slot, int cap, int budget) -> void {
    if (slot == mult) {
      cur.decrements.push_back(dec);
      distribute(terms, ti + 1, budget, cur, out);
      cur.decrements.pop_back();
      return;
    }
    for (int t = std::min(cap, budget); t >= 0; --t) {
      dec.push_back(t);
      self(self, slot + 1, t, budget - t);
      dec.pop_back();
    }
  };
  rec(rec, 0, deg, left);
}

}  // namespace

std::vector<PlanStep> generation_plan(const DegreeSequence& s1, const DefiningSet& pattern, bool include_ignorable) {
  const int pendants = s1.multiplicity(1);
  std::vector<DegreeSequence::Term> rest;
  for (const auto& t : s1.terms())
    if (t.first != 1) rest.push_back(t);
  PlanStep direct{s1, s1, 0, {}, false};
  if (pendants == 0 || rest.empty()) return {direct};

  // Does every deficiency multiset contain a set avoiding all pendant vertices?
  // Then that set's matching must saturate every pendant, which is impossible
  // when two pendants share their neighbour.
  std::vector<int> deficient;
  for (const auto& [d, m] : s1.terms())
    if (d < pattern.size()) deficient.insert(deficient.end(), m, d);
  VertexMask pendant_mask = 0;
  for (std::size_t i = 0; i < deficient.size(); ++i)
    if (deficient[i] == 1) pendant_mask |= VertexMask{1} << i;
  auto catalogue = abstract_w_multisets(pattern, deficient);
  bool always_saturates_pendants = !catalogue.empty();
  for (const auto& a : catalogue) {
    bool found = false;
    for (VertexMask s : a.sets)
      if ((s & pendant_mask) == 0) found = true;
    always_saturates_pendants = always_saturates_pendants && found;
  }

  std::vector<PlanStep> steps;
  std::set<DegreeSequence> sources;
  for (int pairs = 0; 2 * pairs <= pendants; ++pairs) {
    std::vector<Structure> structures;
    Structure cur;
    cur.pairs = pairs;
    distribute(rest, 0, pendants - 2 * pairs, cur, structures);
    for (const auto& st : structures) {
      std::vector<int> degs;
      std::map<int, std::set<int>> by_new_degree;  // S2 degree -> decrements seen
      bool shared = false;
      for (std::size_t ti = 0; ti < rest.size(); ++ti)
        for (int t : st.decrements[ti]) {
          int nd = rest[ti].first - t;
          degs.push_back(nd);
          by_new_degree[nd].insert(t);
          shared = shared || t >= 2;
        }
      auto s2 = DegreeSequence::from_degrees(degs);
      if (!s2.is_graphical()) continue;
      bool uniform = true;
      for (const auto& [nd, ts] : by_new_degree) uniform = uniform && ts.size() == 1;
      if (!uniform || !sources.insert(s2).second) return {direct};
      PlanStep step;
      step.target = s1;
      step.source = s2;
      step.pendant_pairs = pairs;
      for (const auto& [nd, ts] : by_new_degree)
        if (*ts.begin() > 0) step.attachments.emplace_back(nd, *ts.begin());
      step.ignorable = shared && always_saturates_pendants;
      steps.push_back(std::move(step));
    }
  }
  std::vector<PlanStep> out;
  for (auto& s : steps)
    if (include_ignorable || !s.ignorable) out.push_back(std::move(s));
  return out;
}

AutClassifiedGraph extend_with_pendants(const AutClassifiedGraph& source, const PlanStep& step) {
  if (step.direct()) return source;
  const DenseGraph& g = source.graph;
  if (DegreeSequence::of(g) != step.source)
    throw std::invalid_argument("source graph does not have the step's S2 sequence " + step.source.str());
  const int n = step.target.order();
  DenseGraph out = g.with_order(n);
  int next = g.order();
  BigInt factor = 1;
  for (int u = 0; u < g.order(); ++u) {
    int t = 0;
    for (const auto& [deg, count] : step.attachments)
      if (g.degree(u) == deg) t = count;
    for (int i = 0; i < t; ++i) out.add_edge(u, next++);
    factor *= factorial(static_cast<unsigned>(t));
  }
  for (int i = 0; i < step.pendant_pairs; ++i, next += 2) out.add_edge(next, next + 1);
  factor *= factorial(static_cast<unsigned>(step.pendant_pairs));
  factor <<= step.pendant_pairs;
  if (next != n) throw std::logic_error("pendant extension produced the wrong order");
  AutClassifiedGraph res{out, source.aut_order * factor, DegreeSequence::of(out)};
  if (res.degree_sequence != step.target) throw std::logic_error("pendant extension missed the target sequence");
  return res;
}

AutClassifiedGraph extend_with_pendants(const AutClassifiedGraph& source, const DegreeSequence& target,
                                        const DefiningSet& pattern) {
  auto s2 = DegreeSequence::of(source.graph);
  for (const auto& step : generation_plan(target, pattern, true))
    if (step.source == s2) return extend_with_pendants(source, step);
  throw std::invalid_argument("no unique pendant extension from " + s2.str() + " to " + target.str());
}

// ---------------------------------------------------------------------------
// Random graphs with a given degree sequence

DenseGraph havel_hakimi(const DegreeSequence& seq) {
  if (!seq.is_graphical()) throw std::invalid_argument("degree sequence is not graphical: " + seq.str());
  std::vector<int> want = seq.expanded();
  const int n = static_cast<int>(want.size());
  std::reverse(want.begin(), want.end());  // vertex 0 gets the largest degree
  DenseGraph g(n);
  std::vector<int> left = want;
  for (;;) {
    int v = -1;
    for (int i = 0; i < n; ++i)
      if (left[i] > 0 && (v < 0 || left[i] > left[v])) v = i;
    if (v < 0) break;
    std::vector<int> others;
    for (int i = 0; i < n; ++i)
      if (i != v && left[i] > 0) others.push_back(i);
    std::stable_sort(others.begin(), others.end(), [&](int a, int b) { return left[a] > left[b]; });
    if (static_cast<int>(others.size()) < left[v]) throw std::logic_error("Havel-Hakimi ran out of partners");
    for (int j = 0; j < left[v]; ++j) {
      g.add_edge(v, others[j]);
      --left[others[j]];
    }
    left[v] = 0;
  }
  return g;
}

DenseGraph sample_random(const DegreeSequence& seq, long switches, std::uint64_t seed) {
  DenseGraph g = havel_hakimi(seq);
  auto edges = g.edges();
  if (edges.size() < 2) return g;
  if (switches < 0) switches = 20L * static_cast<long>(edges.size());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  std::bernoulli_distribution flip(0.5);
  for (long s = 0; s < switches; ++s) {
    std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    int a = edges[i].u, b = edges[i].v, c = edges[j].u, d = edges[j].v;
    if (flip(rng)) std::swap(c, d);
    if (a == c || a == d || b == c || b == d) continue;
    if (g.has_edge(a, c) || g.has_edge(b, d)) continue;
    g.remove_edge(a, b);
    g.remove_edge(c, d);
    g.add_edge(a, c);
    g.add_edge(b, d);
    edges[i] = {std::min(a, c), std::max(a, c)};
    edges[j] = {std::min(b, d), std::max(b, d)};
  }
  return g;
}

// ---------------------------------------------------------------------------
// Deficiency multisets

std::string WAssignment::str() const {
  std::string out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i) out.push_back(',');
    out.push_back('{');
    bool first = true;
    for (VertexMask m = sets[i]; m; m &= m - 1) {
      if (!first) out.push_back(',');
      out += std::to_string(std::countr_zero(m));
      first = false;
    }
    out.push_back('}');
  }
  return out;
}

std::vector<WAssignment> abstract_w_multisets(const DefiningSet& pattern, const std::vector<int>& degrees) {
  const int w = pattern.size();
  // Deficient vertices and the class size each one needs.
  std::vector<int> vertex, need;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    int d = degrees[i];
    if (d > w || (w - d) % 2 != 0) return {};
    if (d < w) {
      vertex.push_back(static_cast<int>(i));
      need.push_back((w - d) / 2);
    }
  }
  std::map<std::vector<VertexMask>, std::uint64_t> tally;
  const auto& pairs = pattern.pairs();
  for (const auto& shape : pattern.shapes()) {
    if (shape.classes.size() != vertex.size()) continue;
    std::vector<int> sizes, needed = need;
    for (const auto& c : shape.classes) sizes.push_back(static_cast<int>(c.size()));
    std::sort(sizes.begin(), sizes.end());
    std::sort(needed.begin(), needed.end());
    if (sizes != needed) continue;
    // Bijections class -> deficient vertex with matching size.
    std::vector<int> owner(shape.classes.size(), -1);
    std::vector<char> taken(vertex.size(), 0);
    auto rec = [&](auto&& self, std::size_t ci) -> void {
      if (ci == shape.classes.size()) {
        std::vector<VertexMask> sets(w, 0);
        for (std::size_t c = 0; c < shape.classes.size(); ++c)
          for (int pi : shape.classes[c]) {
            VertexMask bit = VertexMask{1} << vertex[owner[c]];
            sets[pairs[pi][0]] |= bit;
            sets[pairs[pi][1]] |= bit;
          }
        std::sort(sets.begin(), sets.end());
        ++tally[sets];
        return;
      }
      for (std::size_t x = 0; x < vertex.size(); ++x) {
        if (taken[x] || need[x] != static_cast<int>(shape.classes[ci].size())) continue;
        taken[x] = 1;
        owner[ci] = static_cast<int>(x);
        self(self, ci + 1);
        taken[x] = 0;
      }
    };
    rec(rec, 0);
  }
  std::vector<WAssignment> out;
  for (auto& [sets, count] : tally) out.push_back({sets, count});
  return out;
}

bool has_perfect_matching(const DenseGraph& g, VertexMask vertices) {
  if (std::popcount(vertices) % 2 != 0) return false;
  std::unordered_set<VertexMask> failed;
  auto rec = [&](auto&& self, VertexMask left) -> bool {
    if (left == 0) return true;
    if (failed.count(left)) return false;
    int v = std::countr_zero(left);
    VertexMask rest = left & ~(VertexMask{1} << v);
    for (VertexMask m = g.neighbors(v) & rest; m; m &= m - 1) {
      int u = std::countr_zero(m);
      if (self(self, rest & ~(VertexMask{1} << u))) return true;
    }
    failed.insert(left);
    return false;
  };
  return rec(rec, vertices);
}

WCatalogue enumerate_w_multisets(const DenseGraph& g, const DefiningSet& pattern, bool prefilter) {
  WCatalogue cat;
  const int w = pattern.size();
  std::vector<int> degrees(g.order());
  for (int v = 0; v < g.order(); ++v) {
    degrees[v] = g.degree(v);
    if (degrees[v] > w) {
      cat.diagnostic = "vertex " + std::to_string(v) + " has degree above |W| = " + std::to_string(w);
      return cat;
    }
    if ((w - degrees[v]) % 2 != 0) {
      cat.diagnostic = "vertex " + std::to_string(v) + " has a degree of the wrong parity for |W| = " + std::to_string(w);
      return cat;
    }
  }
  auto all = abstract_w_multisets(pattern, degrees);
  if (all.empty()) {
    cat.diagnostic = "degree sequence " + DegreeSequence::of(g).str() + " is not admissible for " + pattern.name();
    return cat;
  }
  const VertexMask everything = g.all_vertices();
  for (auto& a : all) {
    bool ok = true;
    if (prefilter) {
      for (std::size_t i = 0; i < a.sets.size() && ok; ++i) {
        if (i > 0 && a.sets[i] == a.sets[i - 1]) continue;
        VertexMask sat = everything & ~a.sets[i];
        if (sat != 0 && !has_perfect_matching(g, sat)) ok = false;
      }
    }
    if (ok)
      cat.assignments.push_back(std::move(a));
    else
      ++cat.rejected;
  }
  if (cat.assignments.empty())
    cat.diagnostic = "every deficiency multiset needs a perfect matching the graph does not have";
  return cat;
}

}  // namespace sts
