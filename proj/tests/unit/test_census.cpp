#include "doctest.h"

#include "sts/census.hpp"
#include "sts/classify.hpp"
#include "sts/reference.hpp"

using namespace sts;

namespace {

const DefiningSet kW4 = DefiningSet::parse(4, "012");
const DefiningSet kW5 = DefiningSet::parse(5, "012,034");

CensusLedger small_ledger(int modulus = 1) {
  return CensusLedger(9, kW5, BigInt(12), modulus, {"3^4 <- 3^4", "1^2 5^6 <- 5^6"});
}

}  // namespace

TEST_SUITE("census") {

TEST_CASE("completion constants") {
  CHECK(completion_constant(kW5, DegreeSequence::parse("1^2")) == 30);
  CHECK(completion_constant(kW5, DegreeSequence::parse("3^4")) == 120);
  CHECK(completion_constant(kW5, DegreeSequence::parse("1^1 3^2 5^13")) == 240);
  CHECK(completion_constant(kW5, DegreeSequence::parse("1^2 5^14")) == 720);
  CHECK(completion_constant(kW5, DegreeSequence::parse("3^4 5^12")) == 120);
  CHECK(completion_constant(kW4, DegreeSequence::parse("2^3 4^14")) == 24);
  CHECK_THROWS_AS(completion_constant(kW5, DegreeSequence::parse("4^8")), ValidationError);
}

TEST_CASE("admissible sequences") {
  auto seqs = admissible_sequences(kW5, 21);
  REQUIRE(seqs.size() == 3);
  CHECK(seqs[0].str() == "1^1 3^2 5^13");
  CHECK(seqs[1].str() == "1^2 5^14");
  CHECK(seqs[2].str() == "3^4 5^12");
  CHECK(admissible_sequences(kW4, 21).size() == 1);
}

TEST_CASE("occurrences of a pattern") {
  TripleSystem fano(7, {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}});
  CHECK(defining_set_count(fano, kW4) == 28);
  // Any two blocks of the Fano plane meet, so each meeting pair spans 5 points.
  CHECK(defining_set_count(fano, kW5) == 21);
  auto cat = classify_all(13);
  CHECK(defining_set_count(cat.representatives, kW5) == 195);
  CHECK(defining_set_count(cat.representatives, kW4) == 260);
  std::vector<TripleSystem> mixed = {fano, construct_sts(9, 1)};
  CHECK_THROWS(defining_set_count(mixed, kW4));
}

TEST_CASE("automorphism spectrum") {
  AutSpectrum s;
  s.add(6);
  s.add(39);
  s.add(1, 5);
  CHECK(s.total_classes() == 7);
  CHECK(s.reciprocal_sum() == Rational(5) + Rational(1, 6) + Rational(1, 39));
  CHECK(s.nontrivial().total_classes() == 2);
  CHECK(AutSpectrum::from_json(s.to_json()) == s);
}

TEST_CASE("resolution of classes") {
  AutSpectrum nine;
  nine.add(432);
  auto r9 = resolve_trivial_classes(BigInt(840), nine, 9);
  CHECK(r9.trivial_classes == 0);
  CHECK(r9.total_classes == 1);
  AutSpectrum thirteen;
  thirteen.add(6);
  thirteen.add(39);
  auto r13 = resolve_trivial_classes(BigInt(1197504000), thirteen, 13);
  CHECK(r13.trivial_classes == 0);
  CHECK(r13.total_classes == 2);
  CHECK_THROWS_AS(resolve_trivial_classes(BigInt(1197504001), thirteen, 13), ValidationError);
  CHECK_THROWS_AS(resolve_trivial_classes(BigInt(0), thirteen, 13), ValidationError);
}

TEST_CASE("ledger accumulation and finalization") {
  CensusLedger l = small_ledger();
  CHECK_FALSE(l.is_complete());
  CHECK_THROWS_AS(labeled_total(l), ValidationError);
  // contribution = K v! N_D N_F / (w! |Aut| N')
  l.add_graph("3^4 <- 3^4", BigInt(8));
  l.add_contribution("3^4 <- 3^4", BigInt(120), BigInt(2), BigInt(3), BigInt(8));
  l.add_contribution("3^4 <- 3^4", BigInt(120), BigInt(0), BigInt(3), BigInt(8));
  const Rational expect = Rational(BigInt(120) * factorial(9) * 6) / Rational(BigInt(120) * 8 * 12);
  CHECK(l.units().at("3^4 <- 3^4").partial_sum == expect);
  CHECK(l.units().at("3^4 <- 3^4").assignments == 1);
  CHECK(l.units().at("3^4 <- 3^4").zero_assignments == 1);
  CHECK(l.units().at("3^4 <- 3^4").aut_buckets.at("8") == 1);
  CHECK_THROWS_AS(l.add_graph("5^9 <- 5^9", BigInt(1)), ValidationError);
  l.mark_complete({"3^4 <- 3^4", 0});
  CHECK(l.missing_units().size() == 1);
  l.mark_complete({"1^2 5^6 <- 5^6", 0});
  CHECK(l.is_complete());
  CHECK(labeled_total(l) == BigInt(22680));
  CHECK(l.sequence_sums().at("3^4") == expect);
  CHECK(CensusLedger::sequence_of_unit("1^2 5^6 <- 5^6") == "1^2 5^6");
  CHECK_THROWS_AS(l.mark_complete({"3^4 <- 3^4", 1}), ValidationError);
}

TEST_CASE("non-integral totals are rejected") {
  CensusLedger l = small_ledger();
  l.add_contribution("3^4 <- 3^4", BigInt(1), BigInt(1), BigInt(1), BigInt(1));
  l.mark_complete({"3^4 <- 3^4", 0});
  l.mark_complete({"1^2 5^6 <- 5^6", 0});
  // 9! / (5! * 12) = 252; a large |Aut| makes the next term fractional.
  CHECK(labeled_total(l) == 252);
  CensusLedger bad = l;
  bad.add_contribution("1^2 5^6 <- 5^6", BigInt(1), BigInt(1), BigInt(1), BigInt(9 * 8 * 7 * 6 * 4 * 3 * 3 * 5));
  CHECK_FALSE(is_integer(bad.rational_total()));
  CHECK_THROWS_AS(labeled_total(bad), ValidationError);
}

TEST_CASE("ledger json round trip and validation") {
  CensusLedger l = small_ledger(2);
  l.add_graph("3^4 <- 3^4", BigInt(8));
  l.add_contribution("3^4 <- 3^4", BigInt(120), BigInt(2), BigInt(3), BigInt(8));
  l.mark_complete({"3^4 <- 3^4", 1});
  auto j = l.to_json();
  CensusLedger back = CensusLedger::from_json(j);
  CHECK(back.to_json() == j);
  CHECK(back.rational_total() == l.rational_total());

  auto wrong_magic = j;
  wrong_magic["magic"] = "something-else";
  CHECK_THROWS_AS(CensusLedger::from_json(wrong_magic), ValidationError);
  auto future = j;
  future["format_version"] = 99;
  CHECK_THROWS_AS(CensusLedger::from_json(future), ValidationError);
  auto bad_part = j;
  bad_part["completed"][0]["residue"] = 5;
  CHECK_THROWS_AS(CensusLedger::from_json(bad_part), ValidationError);
  auto stray = j;
  stray["units"]["9^1 <- 9^1"] = stray["units"]["3^4 <- 3^4"];
  CHECK_THROWS_AS(CensusLedger::from_json(stray), ValidationError);
}

TEST_CASE("merging partial ledgers") {
  CensusLedger a = small_ledger(2), b = small_ledger(2);
  a.add_contribution("3^4 <- 3^4", BigInt(120), BigInt(1), BigInt(1), BigInt(1));
  a.mark_complete({"3^4 <- 3^4", 0});
  a.mark_complete({"1^2 5^6 <- 5^6", 0});
  b.add_contribution("3^4 <- 3^4", BigInt(120), BigInt(1), BigInt(2), BigInt(1));
  b.mark_complete({"3^4 <- 3^4", 1});
  b.mark_complete({"1^2 5^6 <- 5^6", 1});
  CensusLedger m = a;
  m.merge(b);
  CHECK(m.is_complete());
  CHECK(m.rational_total() == a.rational_total() + b.rational_total());
  CHECK_THROWS_AS(m.merge(b), ValidationError);
  CensusLedger other(13, kW5, BigInt(195), 2, {"3^4 <- 3^4"});
  CHECK_THROWS_AS(a.merge(other), ValidationError);
}

TEST_CASE("divisibility audit weights") {
  auto rep = divisibility_audit(kW5, 21, BigInt(945));
  REQUIRE(rep.weights.size() == 3);
  CHECK(rep.weights[0].weight == 2);
  CHECK(rep.weights[1].weight == 6);
  CHECK(rep.weights[2].weight == 1);
  CHECK(rep.detection_probability == doctest::Approx(1.0 - 1.0 / 945));
  CHECK(rep.text().find("945") != std::string::npos);
}

TEST_CASE("stored order-21 constants") {
  const auto& ref = sts21_reference();
  auto check = check_reference(ref);
  CHECK(check.ok());
  CHECK(check.resolution.trivial_classes == parse_bigint("14796207455537154"));
  CHECK(check.resolution.total_classes == parse_bigint("14796207517873771"));
  auto file = load_reference(std::string(STS_DATA_DIR) + "/sts21_reference.json");
  CHECK(file.to_json() == ref.to_json());
  CHECK(ReferenceData::from_json(ref.to_json()).to_json() == ref.to_json());
  ReferenceData broken = ref;
  broken.partial_sums[0].value += 1;
  CHECK_FALSE(check_reference(broken).partial_sums_add_up);
}

}
