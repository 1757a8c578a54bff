// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Options: --long also runs the multi-hour generation count;
// --seed N fixes the estimate seed (default: fresh from std::random_device);
// --only 2,7 runs a subset.

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "sts/census.hpp"
#include "sts/classify.hpp"
#include "sts/decomp.hpp"
#include "sts/estimate.hpp"
#include "sts/graph_gen.hpp"
#include "sts/pipeline.hpp"
#include "sts/reference.hpp"

using namespace sts;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;
std::set<int> selected;  // empty: all

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  if (!selected.empty() && !selected.count(id)) return;
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::ostringstream t;
  t.setf(std::ios::fixed);
  t.precision(1);
  t << s;
  std::cout << (o.pass ? "PASS " : "FAIL ") << id << " " << name << ": " << o.detail << " [" << t.str() << " s]"
            << std::endl;
}

void note(const std::string& line) { std::cout << "  " << line << std::endl; }

const DefiningSet kW4 = DefiningSet::parse(4, "012");
const DefiningSet kW5 = DefiningSet::parse(5, "012,034");
const DefiningSet kPasch = DefiningSet::parse(6, "012,034,135,245");

RunConfig run_config(int v, const DefiningSet& pattern) {
  RunConfig c;
  c.v = v;
  c.w = pattern.size();
  c.pattern = pattern.pattern_string();
  return c;
}

// ---------------------------------------------------------------------------

Outcome count_v13() {
  auto r = run_count(run_config(13, kW5));
  auto cat = classify_all(13);
  if (!r.labeled_total) return {false, "count did not finalize: " + r.error};
  bool ok = *r.labeled_total == cat.labeled_count && r.resolution && r.resolution->total_classes == 2 &&
            cat.representatives.size() == 2;
  return {ok, "count " + with_commas(*r.labeled_total) + ", classification " + with_commas(cat.labeled_count) +
                  ", classes " + (r.resolution ? to_string(r.resolution->total_classes) : std::string("?"))};
}

Outcome cross_pattern_v15() {
  auto cat = classify_all(15);
  auto a = run_count(run_config(15, kW4));
  auto b = run_count(run_config(15, kW5));
  if (!a.labeled_total || !b.labeled_total) return {false, "count did not finalize: " + a.error + b.error};
  // Resolve against the classification's spectrum explicitly.
  Resolution res = resolve_trivial_classes(*b.labeled_total, cat.spectrum.nontrivial(), 15);
  bool ok = *a.labeled_total == *b.labeled_total && *b.labeled_total == cat.labeled_count && res.total_classes == 80;
  return {ok, "w=4 " + with_commas(*a.labeled_total) + ", w=5 " + with_commas(*b.labeled_total) + ", N_15,1 = " +
                  to_string(res.trivial_classes) + ", classes " + to_string(res.total_classes)};
}

Outcome direct_small() {
  BigInt d7 = labeled_count_direct(7), d9 = labeled_count_direct(9);
  auto c7 = classify_all(7), c9 = classify_all(9);
  auto p7 = run_count(run_config(7, kW5));
  auto p9 = run_count(run_config(9, kW5));
  auto p9b = run_count(run_config(9, kW4));
  // At v = 7 the only sequence is 1^2 with K = 30 (no saturated factor).
  BigInt k7 = completion_constant(kW5, DegreeSequence::parse("1^2"));
  bool ok = d7 == 30 && d9 == 840 && c7.labeled_count == d7 && c9.labeled_count == d9 && p7.labeled_total &&
            *p7.labeled_total == d7 && p9.labeled_total && *p9.labeled_total == d9 && p9b.labeled_total &&
            *p9b.labeled_total == d9 && k7 == 30;
  return {ok, "direct " + to_string(d7) + "/" + to_string(d9) + ", classify " + to_string(c7.labeled_count) + "/" +
                  to_string(c9.labeled_count) + ", census " +
                  (p7.labeled_total ? to_string(*p7.labeled_total) : "?") + "/" +
                  (p9.labeled_total ? to_string(*p9.labeled_total) : "?") + ", K(1^2) = " + to_string(k7)};
}

Outcome order21_arithmetic() {
  ReferenceData ref = load_reference(std::string(STS_DATA_DIR) + "/sts21_reference.json");
  ReferenceCheck check = check_reference(ref);
  bool ok = check.partial_sums_add_up && check.resolution.trivial_classes == parse_bigint("14796207455537154") &&
            check.resolution.total_classes == parse_bigint("14796207517873771") &&
            check_reference(sts21_reference()).ok();
  return {ok, "N_21,1 = " + with_commas(check.resolution.trivial_classes) + ", total " +
                  with_commas(check.resolution.total_classes)};
}

// Structural properties of the matching search on synthetic instances.
Outcome matching_properties() {
  std::mt19937_64 rng(0x5ea7c4);
  int graphs = 0, forced_checks = 0, pair_checks = 0, half_checks = 0;
  std::string first_failure;
  auto fail = [&](const std::string& what) {
    if (first_failure.empty()) first_failure = what;
  };
  const MatchingCountOptions full{false, false, false};
  while (graphs < 600) {
    int n = 4 + static_cast<int>(rng() % 9);  // 4..12
    int w = 3 + static_cast<int>(rng() % 4);  // 3..6
    bool paired = graphs % 4 == 3;
    if (paired && w % 2) ++w;
    auto inst = oracle::random_matching_instance(n, w, rng, paired);
    std::set<VertexMask> distinct(inst.w_sets.begin(), inst.w_sets.end());
    if (!paired && distinct.size() != inst.w_sets.size()) continue;
    ++graphs;
    auto cols = build_collections(inst.graph, WAssignment{inst.w_sets, 1});
    BigInt direct = count_matching_decompositions(inst.graph, cols, full);
    if (!paired) {
      // (a) stopping one collection short with a forced last matching.
      ++forced_checks;
      if (count_matching_decompositions(inst.graph, cols, {true, false, false}) != direct)
        fail("forced-last count differs on graph " + std::to_string(graphs));
      if (count_matching_decompositions(inst.graph, build_collections(inst.graph, WAssignment{inst.w_sets, 1},
                                                                      {.skip_forced = true})) != direct)
        fail("unbuilt forced collection changes the count on graph " + std::to_string(graphs));
      // (b) with two untouched collections a, b left after any valid partial
      // selection of the others, both have the same number of compatible
      // matchings.
      const int m = static_cast<int>(cols.size());
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
          std::vector<int> others;
          for (int i = 0; i < m; ++i)
            if (i != a && i != b) others.push_back(i);
          std::function<void(std::size_t, const MatchingBitmap&)> walk = [&](std::size_t k, const MatchingBitmap& used) {
            if (k == others.size()) {
              ++pair_checks;
              if (count_compatible(cols[a], used) != count_compatible(cols[b], used))
                fail("M_a != M_b on graph " + std::to_string(graphs));
              return;
            }
            for (const auto& mt : cols[others[k]].matchings)
              if (mt.disjoint(used)) walk(k + 1, used | mt);
          };
          walk(0, MatchingBitmap{});
        }
    } else {
      // (c) the half-count shortcut for a remaining multiplicity-2 collection.
      ++half_checks;
      if (count_matching_decompositions(inst.graph, cols, {false, false, true}) != direct)
        fail("multiplicity-2 shortcut differs on graph " + std::to_string(graphs));
      if (direct != oracle::matching_decompositions(inst.graph, inst.w_sets))
        fail("direct count differs from the oracle on graph " + std::to_string(graphs));
    }
  }
  return {first_failure.empty(), std::to_string(graphs) + " graphs; " + std::to_string(forced_checks) +
                                     " forced-last, " + std::to_string(pair_checks) + " M_a = M_b, " +
                                     std::to_string(half_checks) + " half-count comparisons" +
                                     (first_failure.empty() ? "" : "; " + first_failure)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(0x0dac1e);
  int tri = 0, match = 0, nonzero_tri = 0;
  std::string bad;
  for (int i = 0; i < 1200; ++i) {
    int n = 3 + static_cast<int>(rng() % 11);
    DenseGraph g = oracle::random_triangle_instance(n, rng, i % 5 == 0);
    BigInt expect = oracle::triangle_decompositions(g);
    if (expect != 0) ++nonzero_tri;
    if (count_triangle_decompositions(g) != expect || count_triangle_decompositions_parallel(g) != expect)
      bad = "triangle count differs on instance " + std::to_string(i);
    ++tri;
  }
  for (int i = 0; i < 1200; ++i) {
    int n = 4 + static_cast<int>(rng() % 8);
    int w = 3 + static_cast<int>(rng() % 4);
    bool paired = i % 3 == 0 && w % 2 == 0;
    auto inst = oracle::random_matching_instance(n, w, rng, paired);
    BigInt expect = oracle::matching_decompositions(inst.graph, inst.w_sets);
    auto cols = build_collections(inst.graph, WAssignment{inst.w_sets, 1}, {.skip_forced = true});
    auto all = build_collections(inst.graph, WAssignment{inst.w_sets, 1});
    if (count_matching_decompositions(inst.graph, cols) != expect ||
        count_matching_decompositions_exact_cover(inst.graph, all) != expect)
      bad = "matching count differs on instance " + std::to_string(i);
    ++match;
  }
  return {bad.empty(), std::to_string(match) + " matching and " + std::to_string(tri) + " triangle instances (" +
                           std::to_string(nonzero_tri) + " with decompositions)" + (bad.empty() ? "" : "; " + bad)};
}

// Brute-force classes keyed by canonical rows, with their degrees.
struct OracleClass {
  std::vector<std::uint32_t> key;
  int edges;
  int min_degree, max_degree;
};

const std::vector<OracleClass>& oracle_classes(int n) {
  static std::map<int, std::vector<OracleClass>> cache;
  auto& out = cache[n];
  if (out.empty())
    for (const auto& g : oracle::all_graph_classes(n)) {
      int lo = n, hi = 0;
      for (int v = 0; v < n; ++v) {
        lo = std::min(lo, g.degree(v));
        hi = std::max(hi, g.degree(v));
      }
      out.push_back({oracle::canonical_rows(g), g.edge_count(), n == 0 ? 0 : lo, hi});
    }
  return out;
}

std::multiset<std::vector<std::uint32_t>> generated_keys(const GenSpec& spec) {
  // The same class is emitted with the same labeling by every spec that
  // contains it, so the brute-force key is computed once per labeled graph.
  static std::map<DenseGraph, std::vector<std::uint32_t>> memo;
  std::multiset<std::vector<std::uint32_t>> keys;
  generate(spec, [&](const AutClassifiedGraph& g) {
    auto it = memo.find(g.graph);
    if (it == memo.end()) it = memo.emplace(g.graph, oracle::canonical_rows(g.graph)).first;
    keys.insert(it->second);
    return true;
  });
  return keys;
}

Outcome generation(bool long_run) {
  int specs = 0;
  std::string bad;
  std::uint64_t classes = 0;
  for (int n = 1; n <= 8; ++n)
    for (int lo = 0; lo < n; ++lo)
      for (int hi = lo; hi < n; ++hi)
        for (int e = 0; e <= n * (n - 1) / 2; ++e) {
          if (2 * e < n * lo || 2 * e > n * hi) continue;
          GenSpec spec{n, e, lo, hi, std::nullopt, std::nullopt};
          std::multiset<std::vector<std::uint32_t>> expect;
          for (const auto& c : oracle_classes(n))
            if (c.edges == e && c.min_degree >= lo && c.max_degree <= hi) expect.insert(c.key);
          ++specs;
          classes += expect.size();
          if (generated_keys(spec) != expect) bad = "mismatch for " + spec.str();
        }
  int part_checks = 0;
  for (const char* s : {"3^8", "2^2 3^4 4^2", "3^4 5^4", "4^10", "2^1 3^1 5^7"}) {
    GenSpec whole = GenSpec::for_sequence(DegreeSequence::parse(s));
    auto all = generated_keys(whole);
    for (int m : {2, 7, 64}) {
      std::multiset<std::vector<std::uint32_t>> joined;
      for (int r = 0; r < m; ++r) {
        GenSpec p = whole;
        p.part = Part{r, m};
        auto keys = generated_keys(p);
        joined.insert(keys.begin(), keys.end());
      }
      ++part_checks;
      if (joined != all) bad = std::string("parts do not reproduce ") + s + " mod " + std::to_string(m);
    }
  }
  std::string detail = std::to_string(specs) + " degree-window specs on <= 8 vertices (" + std::to_string(classes) +
                       " classes), " + std::to_string(part_checks) + " partitioned runs";
  if (long_run) {
    std::uint64_t n = generate(GenSpec::for_sequence(DegreeSequence::parse("5^14")),
                               [](const AutClassifiedGraph&) { return true; })
                          .emitted;
    detail += ", 5^14: " + std::to_string(n) + " classes";
    if (n != 3459386) bad = "5^14 gives " + std::to_string(n) + " classes";
  } else {
    detail += ", 5^14 count skipped (run with --long)";
  }
  return {bad.empty(), detail + (bad.empty() ? "" : "; " + bad)};
}

// |Aut| of a pendant extension: doubled exactly when an isolated edge is added
// to 5^n; unchanged for the other listed rows.
Outcome aut_doubling() {
  std::string bad;
  int exhaustive = 0, sampled = 0;
  std::map<std::string, std::set<std::string>> ratios;
  auto check = [&](const PlanStep& step, const AutClassifiedGraph& src, bool brute) {
    auto ext = extend_with_pendants(src, step);
    BigInt actual = brute ? BigInt(oracle::automorphism_count(ext.graph)) : canonical_form(ext.graph).aut_order;
    if (actual != ext.aut_order) bad = "derived |Aut| wrong for " + step.str();
    BigInt ratio = actual / src.aut_order;
    if (ratio * src.aut_order != actual) bad = "non-integral ratio for " + step.str();
    ratios[step.str()].insert(to_string(ratio));
    const bool isolated_edge = step.pendant_pairs == 1 && step.attachments.empty();
    if (!step.ignorable && ratio != (isolated_edge ? 2 : 1)) bad = "ratio " + to_string(ratio) + " for " + step.str();
  };
  for (const auto& step : run_plan(13, kW5, true)) {
    if (step.direct()) continue;
    generate(step.spec(), [&](const AutClassifiedGraph& src) {
      ++exhaustive;
      check(step, src, true);
      return true;
    });
  }
  std::mt19937_64 rng(1414);
  for (const auto& step : run_plan(21, kW5, true)) {
    if (step.direct()) continue;
    for (int i = 0; i < 40; ++i) {
      ++sampled;
      check(step, canonical_form(sample_random(step.source, -1, rng())), false);
    }
  }
  for (const auto& [step, r] : ratios) {
    std::string joined;
    for (const auto& x : r) joined += (joined.empty() ? "" : ",") + x;
    note("|Aut| ratio " + joined + " for " + step);
  }
  return {bad.empty(), std::to_string(exhaustive) + " extensions at 8 vertices exhaustively, " +
                           std::to_string(sampled) + " sampled from 14- and 15-vertex sources" + (bad.empty() ? "" : "; " + bad)};
}

Outcome estimate_ordering(std::uint64_t seed) {
  // One w=4 graph costs minutes (its triangle count runs to ~10^8), so that
  // candidate gets a single sample per sequence.
  std::vector<EstimateCandidate> cands = {{kW4, 1}, {kW5, 8}, {kPasch, 8}};
  EstimateReport r = run_estimate(21, cands, seed);
  std::istringstream lines(r.text());
  for (std::string line; std::getline(lines, line);) note(line);
  std::map<std::string, double> score(r.scores.begin(), r.scores.end());
  double s4 = score.at(kW4.name()), s5 = score.at(kW5.name()), s6 = score.at(kPasch.name());
  std::ostringstream d;
  d << "seed " << seed << ": scores w=5 " << s5 << ", w=4 " << s4 << ", w=6 " << s6;
  return {s5 > s4 && s5 > s6, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  bool long_run = std::getenv("STS_LONG") != nullptr;
  std::uint64_t seed = std::random_device{}() * 0x100000001ull ^ std::random_device{}();
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--long")) {
      long_run = true;
    } else if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) {
      seed = std::stoull(argv[++i]);
    } else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      std::istringstream ids(argv[++i]);
      for (std::string id; std::getline(ids, id, ',');) selected.insert(std::stoi(id));
    } else {
      std::cerr << "usage: " << argv[0] << " [--long] [--seed N] [--only i,j,...]\n";
      return 2;
    }
  }
  std::cout << "stscount " << version() << " acceptance suite" << (long_run ? " (long)" : "") << std::endl;
  criterion(1, "v13-count-matches-classification", count_v13);
  criterion(2, "v15-defining-sets-agree", cross_pattern_v15);
  criterion(3, "direct-count-small-orders", direct_small);
  criterion(4, "v21-class-arithmetic", order21_arithmetic);
  criterion(5, "matching-search-properties", matching_properties);
  criterion(6, "oracle-equivalence", oracle_equivalence);
  criterion(7, "graph-generation", [&] { return generation(long_run); });
  criterion(8, "pendant-automorphism-rule", aut_doubling);
  criterion(9, "v21-estimate-ordering", [&] { return estimate_ordering(seed); });
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion/criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
