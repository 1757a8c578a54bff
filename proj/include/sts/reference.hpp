#pragma once

// Published constants for order 21 that this toolkit cannot recompute at desk
// scale: the per-degree-sequence partial sums of the labeled total, the
// automorphism spectrum of the systems with nontrivial groups, and the graph
// class totals of the five generation sequences. They are external inputs and
// are used only for arithmetic regression checks.

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "sts/bigint.hpp"
#include "sts/census.hpp"

namespace sts {

struct ReferencePartialSum {
  std::string s1;  // degree sequence of G
  std::string s2;  // sequence the graphs were generated from
  BigInt value;
};

struct ReferenceData {
  int v = 0;
  std::string pattern;  // "012,034"
  int w = 0;
  BigInt n_prime;
  std::vector<ReferencePartialSum> partial_sums;
  BigInt labeled_total;
  AutSpectrum nontrivial;
  std::map<std::string, BigInt> graph_class_totals;  // S2 -> classes
  std::map<std::string, BigInt> occurrence_counts;   // pattern name -> N'
  BigInt expected_trivial_classes;
  BigInt expected_total_classes;

  nlohmann::json to_json() const;
  static ReferenceData from_json(const nlohmann::json& j);
};

// The constants compiled into the library.
const ReferenceData& sts21_reference();
// The same constants from a data file; throws ValidationError on a malformed file.
ReferenceData load_reference(const std::string& path);

struct ReferenceCheck {
  bool partial_sums_add_up = false;  // rows sum to the stated total
  bool trivial_matches = false;
  bool total_matches = false;
  Resolution resolution;
  std::string text() const;
  bool ok() const { return partial_sums_add_up && trivial_matches && total_matches; }
};

// Recomputes the class counts from the stored labeled total and spectrum.
ReferenceCheck check_reference(const ReferenceData& ref);

}  // namespace sts
