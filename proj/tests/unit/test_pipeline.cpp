#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "sts/pipeline.hpp"

using namespace sts;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const char* base = std::getenv("STS_TEST_TMP");
  fs::path dir = fs::path(base ? base : fs::temp_directory_path().string()) / ("sts_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunConfig config(int v, int w, const std::string& pattern) {
  RunConfig c;
  c.v = v;
  c.w = w;
  c.pattern = pattern;
  c.threads = 2;
  return c;
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("small orders through both defining sets") {
  auto r7 = run_count(config(7, 5, "012,034"));
  REQUIRE(r7.labeled_total);
  CHECK(*r7.labeled_total == 30);
  CHECK(r7.resolution->total_classes == 1);
  for (auto [w, p] : {std::pair{4, "012"}, std::pair{5, "012,034"}}) {
    auto r = run_count(config(9, w, p));
    CHECK(r.complete);
    REQUIRE(r.labeled_total);
    CHECK(*r.labeled_total == 840);
    CHECK(r.resolution->trivial_classes == 0);
    CHECK(r.text.find("labeled STS(9): 840") != std::string::npos);
    CHECK(r.csv.find("Total,,840") != std::string::npos);
  }
}

TEST_CASE("order 13 resolves to two classes") {
  auto r = run_count(config(13, 5, "012,034"));
  REQUIRE(r.labeled_total);
  CHECK(*r.labeled_total == 1197504000);
  CHECK(r.ledger.n_prime() == 195);
  CHECK(r.resolution->total_classes == 2);
}

TEST_CASE("occurrence counts") {
  CHECK(occurrence_count(13, DefiningSet::parse(5, "012,034")).value == 195);
  CHECK(occurrence_count(13, DefiningSet::parse(4, "012")).value == 260);
  CHECK(occurrence_count(9, DefiningSet::parse(4, "012")).value == 72);
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(config(8, 5, "012,034").validate(), std::invalid_argument);
  CHECK_THROWS(config(13, 5, "012,013").validate());
  CHECK_THROWS(config(13, 4, "012,034").validate());
  auto c = config(13, 5, "012,034");
  c.part = Part{3, 2};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  auto a = config(13, 5, "012,034"), b = a;
  b.threads = 1;
  b.checkpoint = "elsewhere.json";
  CHECK(a.hash() == b.hash());
  b.seed = 2;
  CHECK(a.hash() != b.hash());
}

TEST_CASE("per-graph records") {
  AutClassifiedGraph g = canonical_form(sample_random(DegreeSequence::parse("3^4 5^4"), -1, 1));
  auto recs = count_graph(g, DefiningSet::parse(5, "012,034"), "3^4 5^4 <- 3^4 5^4");
  REQUIRE_FALSE(recs.empty());
  for (const auto& r : recs) {
    CHECK(r.k == 120);
    CHECK(r.n_f.has_value() == (r.n_d != 0));
    auto j = r.to_json();
    CHECK(j["graph6"] == r.graph6);
  }
}

TEST_CASE("interrupted runs resume to the same report") {
  auto dir = scratch_dir("resume");
  auto straight = run_count(config(13, 5, "012,034"));
  auto c = config(13, 5, "012,034");
  c.checkpoint = (dir / "ledger.json").string();
  c.records = (dir / "records.jsonl").string();
  c.stop_after_units = 1;
  auto first = run_count(c);
  CHECK(first.stopped_early);
  CHECK_FALSE(first.complete);
  CHECK_FALSE(first.labeled_total);
  CHECK(fs::exists(c.checkpoint));
  std::size_t after_first = line_count(c.records);
  c.stop_after_units = 0;
  c.threads = 1;
  auto second = run_count(c);
  CHECK(second.complete);
  CHECK(second.text == straight.text);
  CHECK(second.ledger.to_json() == straight.ledger.to_json());
  CHECK(line_count(c.records) > after_first);
  // A finished checkpoint is reused without recomputation.
  auto third = run_count(c);
  CHECK(third.text == straight.text);

  auto other = config(13, 4, "012");
  other.checkpoint = c.checkpoint;
  CHECK_THROWS(run_count(other));
}

TEST_CASE("parts merge to the full count") {
  auto straight = run_count(config(13, 5, "012,034"));
  CensusLedger merged;
  for (int r = 0; r < 3; ++r) {
    auto c = config(13, 5, "012,034");
    c.part = Part{r, 3};
    auto partial = run_count(c);
    CHECK_FALSE(partial.complete);
    if (r == 0)
      merged = partial.ledger;
    else
      merged.merge(partial.ledger);
  }
  auto c = config(13, 5, "012,034");
  c.part = Part{0, 3};
  auto final = finalize(merged, c);
  CHECK(final.complete);
  REQUIRE(final.labeled_total);
  CHECK(*final.labeled_total == *straight.labeled_total);
  CHECK(final.ledger.sequence_sums() == straight.ledger.sequence_sums());
}

TEST_CASE("thread count does not change the ledger") {
  auto a = config(13, 4, "012");
  a.threads = 1;
  auto b = a;
  b.threads = 3;
  CHECK(run_count(a).ledger.to_json() == run_count(b).ledger.to_json());
}

}
