#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"

#include "oracles.hpp"
#include "sts/graph_gen.hpp"

using namespace sts;

namespace {

using Key = std::vector<std::uint32_t>;

std::multiset<Key> generated(const GenSpec& spec) {
  std::multiset<Key> out;
  generate(spec, [&](const AutClassifiedGraph& g) {
    out.insert(oracle::canonical_rows(g.graph));
    return true;
  });
  return out;
}

std::multiset<Key> expected(const GenSpec& spec) {
  std::multiset<Key> out;
  for (const auto& g : oracle::all_graph_classes(spec.n)) {
    if (g.edge_count() != spec.edges) continue;
    bool ok = true;
    for (int v = 0; v < g.order(); ++v) ok = ok && g.degree(v) >= spec.min_degree && g.degree(v) <= spec.max_degree;
    if (ok && spec.exact_sequence) ok = DegreeSequence::of(g) == *spec.exact_sequence;
    if (ok) out.insert(oracle::canonical_rows(g));
  }
  return out;
}

}  // namespace

TEST_SUITE("graph_gen") {

TEST_CASE("degree-window generation agrees with brute force up to 7 vertices") {
  for (int n = 1; n <= 7; ++n)
    for (int lo = 0; lo <= 2; ++lo)
      for (int hi = lo; hi <= std::min(n - 1, lo + 3); ++hi)
        for (int e = 0; e <= n * (n - 1) / 2; e += 2) {
          GenSpec spec{n, e, lo, hi, std::nullopt, std::nullopt};
          CAPTURE(spec.str());
          CHECK(generated(spec) == expected(spec));
        }
}

TEST_CASE("reported automorphism orders and degree sequences") {
  GenSpec spec{7, 9, 1, 4, std::nullopt, std::nullopt};
  int seen = 0;
  generate(spec, [&](const AutClassifiedGraph& g) {
    CHECK(g.aut_order == oracle::automorphism_count(g.graph));
    CHECK(g.degree_sequence == DegreeSequence::of(g.graph));
    ++seen;
    return true;
  });
  CHECK(seen > 0);
}

TEST_CASE("parts are disjoint and cover the whole tree") {
  for (const char* s : {"2^2 3^4", "3^8", "2^4 4^6"}) {
    GenSpec whole = GenSpec::for_sequence(DegreeSequence::parse(s));
    auto all = generated(whole);
    for (int m : {2, 7, 64}) {
      std::multiset<Key> joined;
      for (int r = 0; r < m; ++r) {
        GenSpec p = whole;
        p.part = Part{r, m};
        auto part = generated(p);
        joined.insert(part.begin(), part.end());
      }
      CAPTURE(s);
      CAPTURE(m);
      CHECK(joined == all);
    }
  }
}

TEST_CASE("part and spec validation") {
  CHECK(Part::parse("3/7").str() == "3/7");
  CHECK_THROWS(Part::parse("7/7"));
  CHECK_THROWS(Part::parse("x"));
  GenSpec bad{5, 3, 3, 2, std::nullopt, std::nullopt};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS(GenSpec::for_sequence(DegreeSequence::parse("3^3")));
  GenSpec none{4, 6, 0, 2, std::nullopt, std::nullopt};
  auto stats = generate(none, [](const AutClassifiedGraph&) { return true; });
  CHECK(stats.emitted == 0);
}

TEST_CASE("pendant plans produce every class exactly once") {
  const DefiningSet pattern = DefiningSet::parse(5, "012,034");
  for (const char* s : {"1^2 3^4", "1^2 5^6", "1^4 3^2 5^2", "1^2 3^2 5^4"}) {
    auto target = DegreeSequence::parse(s);
    std::multiset<Key> via_plan;
    for (const auto& step : generation_plan(target, pattern, true)) {
      generate(step.spec(), [&](const AutClassifiedGraph& src) {
        auto g = step.direct() ? src : extend_with_pendants(src, step);
        CHECK(DegreeSequence::of(g.graph) == target);
        CHECK(g.aut_order == oracle::automorphism_count(g.graph));
        via_plan.insert(oracle::canonical_rows(g.graph));
        return true;
      });
    }
    CAPTURE(s);
    GenSpec direct = GenSpec::for_sequence(target);
    CHECK(via_plan == expected(direct));
  }
}

TEST_CASE("ignorable steps are dropped by default") {
  const DefiningSet pattern = DefiningSet::parse(5, "012,034");
  auto full = generation_plan(DegreeSequence::parse("1^2 5^8"), pattern, true);
  auto kept = generation_plan(DegreeSequence::parse("1^2 5^8"), pattern, false);
  CHECK(kept.size() < full.size());
  for (const auto& s : kept) CHECK_FALSE(s.ignorable);
}

TEST_CASE("random graphs have the requested sequence and are reproducible") {
  for (const char* s : {"2^3 4^14", "3^4 5^12", "1^2 5^14", "4^16"}) {
    auto seq = DegreeSequence::parse(s);
    DenseGraph a = sample_random(seq, -1, 11);
    CHECK(DegreeSequence::of(a) == seq);
    CHECK(sample_random(seq, -1, 11) == a);
    CHECK(sample_random(seq, 0, 11) == havel_hakimi(seq));
  }
  CHECK_THROWS(havel_hakimi(DegreeSequence::parse("3^1 1^1")));
}

TEST_CASE("deficiency multisets") {
  const DefiningSet pattern = DefiningSet::parse(5, "012,034");
  auto abstract = abstract_w_multisets(pattern, {3, 3, 3, 3});
  CHECK(abstract.size() == 3);
  DenseGraph g = sample_random(DegreeSequence::parse("3^4 5^12"), -1, 3);
  auto cat = enumerate_w_multisets(g, pattern, false);
  CHECK(cat.assignments.size() == 3);
  for (const auto& a : cat.assignments) {
    CHECK(a.sets.size() == 5);
    CHECK(std::is_sorted(a.sets.begin(), a.sets.end()));
    CHECK(a.completions > 0);
  }
  auto filtered = enumerate_w_multisets(g, pattern, true);
  CHECK(filtered.assignments.size() + filtered.rejected == 3);
}

TEST_CASE("perfect matching test") {
  DenseGraph path(4);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  path.add_edge(2, 3);
  CHECK(has_perfect_matching(path, 0b1111));
  CHECK_FALSE(has_perfect_matching(path, 0b0111));
  CHECK_FALSE(has_perfect_matching(path, 0b1010));
  CHECK(has_perfect_matching(path, 0));
}

}
