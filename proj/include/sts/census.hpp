#pragma once

// Exact aggregation of per-graph counts into the labeled number of Steiner
// triple systems, and the orbit-stabilizer bookkeeping that turns a labeled
// count into a number of isomorphism classes.

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "sts/bigint.hpp"
#include "sts/graph_gen.hpp"
#include "sts/model.hpp"

namespace sts {

// Raised by every validation in this module; the message names the check.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Number of isomorphism classes per automorphism group order.
class AutSpectrum {
 public:
  void add(std::uint64_t order, const BigInt& classes = 1);
  const std::map<std::uint64_t, BigInt>& entries() const { return counts_; }
  BigInt total_classes() const;
  // sum_i N_i / i
  Rational reciprocal_sum() const;
  // The spectrum restricted to orders >= 2.
  AutSpectrum nontrivial() const;

  nlohmann::json to_json() const;
  static AutSpectrum from_json(const nlohmann::json& j);

  friend bool operator==(const AutSpectrum&, const AutSpectrum&) = default;

 private:
  std::map<std::uint64_t, BigInt> counts_;
};

// K for one deficiency multiset: (w!/|Aut(pattern)|) times the number of
// completion maps producing it, times P_j! for every merged collection with a
// nonempty saturated set. `n` is the order of G.
BigInt completion_constant(const DefiningSet& pattern, const WAssignment& assignment, int n);
// K for a degree sequence, which must be the same for every multiset the
// sequence admits; throws ValidationError otherwise or when none exist.
BigInt completion_constant(const DefiningSet& pattern, const DegreeSequence& seq);

// Number of w-subsets of `sts` inducing exactly the pattern.
std::uint64_t defining_set_count(const TripleSystem& sts, const DefiningSet& pattern);
// The same count over several systems of one order; throws ValidationError if
// the systems disagree, since the method needs a constant.
std::uint64_t defining_set_count(const std::vector<TripleSystem>& systems, const DefiningSet& pattern);

// Identifies one unit of work: a degree sequence (and how its graphs are
// produced) restricted to one slice r/m of the generation tree.
struct LedgerUnit {
  std::string key;
  int residue = 0;
  friend auto operator<=>(const LedgerUnit&, const LedgerUnit&) = default;
};

struct SequenceTally {
  Rational partial_sum = 0;                       // contribution to the labeled total
  std::map<std::string, std::uint64_t> aut_buckets;  // |Aut(G)| (decimal) -> graphs
  std::uint64_t graphs = 0;
  std::uint64_t assignments = 0;  // (G, W) pairs with nonzero contribution
  std::uint64_t zero_assignments = 0;
};

// Accumulates contributions K * v! * N_D * N_F / (w! * |Aut G| * N') per degree
// sequence in exact rational arithmetic; their sum is the labeled total.
class CensusLedger {
 public:
  CensusLedger() = default;
  CensusLedger(int v, const DefiningSet& pattern, BigInt n_prime, int modulus, std::vector<std::string> unit_keys);

  int order() const { return v_; }
  int pattern_size() const { return w_; }
  const std::string& pattern_string() const { return pattern_; }
  const BigInt& n_prime() const { return n_prime_; }
  int modulus() const { return modulus_; }
  const std::vector<std::string>& unit_keys() const { return unit_keys_; }
  const std::set<LedgerUnit>& completed_units() const { return completed_; }
  // Tallies per unit key ("S1 <- S2"), summed over all parts.
  const std::map<std::string, SequenceTally>& units() const { return tallies_; }
  // Partial sums per degree sequence S1.
  std::map<std::string, Rational> sequence_sums() const;
  // Which sequence a unit key contributes to.
  static std::string sequence_of_unit(const std::string& unit_key);

  // Record one graph (its aut bucket) for a unit.
  void add_graph(const std::string& unit_key, const BigInt& aut_order);
  // Record one (G, W) contribution.
  void add_contribution(const std::string& unit_key, const BigInt& k, const BigInt& n_d, const BigInt& n_f,
                        const BigInt& aut_order);
  void mark_complete(const LedgerUnit& unit);
  bool is_unit_complete(const LedgerUnit& unit) const { return completed_.count(unit) != 0; }

  bool is_complete() const;
  std::vector<LedgerUnit> missing_units() const;

  // Adds another partial ledger of the same run. Throws ValidationError if the
  // run parameters differ or a unit appears in both.
  void merge(const CensusLedger& other);

  Rational rational_total() const;

  nlohmann::json to_json() const;
  static CensusLedger from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static CensusLedger load(const std::string& path);

  static constexpr const char* kMagic = "sts-census-ledger";
  static constexpr int kFormatVersion = 1;

 private:
  SequenceTally& tally(const std::string& unit_key);

  int v_ = 0;
  int w_ = 0;
  std::string pattern_;
  BigInt n_prime_ = 1;
  int modulus_ = 1;
  std::vector<std::string> unit_keys_;
  std::set<LedgerUnit> completed_;
  std::map<std::string, SequenceTally> tallies_;
};

// Finalized labeled total. Throws ValidationError for an incomplete or empty
// ledger and for a non-integral total.
BigInt labeled_total(const CensusLedger& ledger);

struct Resolution {
  BigInt trivial_classes;  // N_{v,1}
  BigInt total_classes;
};

// N_{v,1} = labeled / v! - sum_{i>=2} N_{v,i}/i; throws ValidationError unless
// it is a nonnegative integer.
Resolution resolve_trivial_classes(const BigInt& labeled, const AutSpectrum& nontrivial, int v);

struct DivisibilityWeight {
  std::string sequence;
  Rational weight;  // K / w!
};

struct DivisibilityReport {
  std::vector<DivisibilityWeight> weights;
  BigInt modulus;                 // N'
  double detection_probability = 0;  // 1 - 1/N'
  std::string text() const;
};

// How an error E in some N_D * N_F product propagates: it shifts the total by
// weight * v! * E / (|Aut G| * N'), so an undetected error needs N' to divide
// the weighted error.
DivisibilityReport divisibility_audit(const DefiningSet& pattern, int v, const BigInt& n_prime);

// Degree sequences of G for a pattern at order v, in report order.
std::vector<DegreeSequence> admissible_sequences(const DefiningSet& pattern, int v);

}  // namespace sts
