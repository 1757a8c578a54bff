#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"

#include "sts/classify.hpp"

using namespace sts;

TEST_SUITE("classify") {

TEST_CASE("orders 7 and 9") {
  auto seven = classify_all(7);
  CHECK(seven.representatives.size() == 1);
  CHECK(seven.aut_orders[0] == 168);
  CHECK(seven.labeled_count == 30);
  auto nine = classify_all(9);
  CHECK(nine.representatives.size() == 1);
  CHECK(nine.aut_orders[0] == 432);
  CHECK(nine.labeled_count == 840);
}

TEST_CASE("order 13") {
  auto cat = classify_all(13);
  CHECK(cat.representatives.size() == 2);
  AutSpectrum expect;
  expect.add(6);
  expect.add(39);
  CHECK(cat.spectrum == expect);
  CHECK(cat.labeled_count == 1197504000);
  for (const auto& s : cat.representatives) CHECK(s.is_complete());
}

TEST_CASE("direct labeled counts") {
  CHECK(labeled_count_raw(7) == 30);
  CHECK(labeled_count_raw(9) == 840);
  CHECK(labeled_count_direct(7) == 30);
  CHECK(labeled_count_direct(9) == 840);
  CHECK(labeled_count_direct(13) == 1197504000);
  CHECK(labeled_count_direct(3) == 1);
  CHECK_THROWS(labeled_count_direct(15));
  CHECK_THROWS(labeled_count_direct(11));
  CHECK_THROWS(classify_all(19));
}

TEST_CASE("canonical form is a class invariant") {
  std::mt19937_64 rng(13);
  auto cat = classify_all(13);
  auto a = canonical_system(cat.representatives[0]);
  auto b = canonical_system(cat.representatives[1]);
  CHECK(a.key != b.key);
  for (int trial = 0; trial < 10; ++trial) {
    TripleSystem s = construct_sts(13, rng());
    std::vector<Point> perm(13);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto c1 = canonical_system(s);
    auto c2 = canonical_system(s.relabeled(perm));
    CHECK(c1.key == c2.key);
    CHECK(c1.aut_order == c2.aut_order);
    CHECK((c1.key == a.key || c1.key == b.key));
  }
}

TEST_CASE("random construction") {
  for (int v : {7, 9, 13, 15, 19, 21, 25, 27, 31}) {
    TripleSystem s = construct_sts(v, 77);
    CHECK(s.order() == v);
    CHECK(s.is_complete());
    CHECK(construct_sts(v, 77).blocks() == s.blocks());
  }
  CHECK_THROWS(construct_sts(11, 1));
}

TEST_CASE("catalogue text round trip") {
  auto cat = classify_all(13);
  std::stringstream ss;
  write_catalogue(ss, cat.representatives);
  auto back = read_catalogue(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].blocks() == cat.representatives[0].blocks());
  CHECK(back[1].blocks() == cat.representatives[1].blocks());
  std::istringstream bad("7: 0,1,2 0,1,3\n");
  CHECK_THROWS(read_catalogue(bad));
}

}

TEST_SUITE("long") {

TEST_CASE("order 15" * doctest::skip(std::getenv("STS_LONG") == nullptr)) {
  auto cat = classify_all(15);
  CHECK(cat.representatives.size() == 80);
  CHECK(cat.labeled_count == parse_bigint("60281712691200"));
  CHECK(cat.spectrum.reciprocal_sum() * factorial(15) == Rational(cat.labeled_count));
}

}
