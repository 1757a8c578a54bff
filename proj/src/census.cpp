#include "sts/census.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

namespace sts {

using nlohmann::json;

// ---------------------------------------------------------------------------
// AutSpectrum

void AutSpectrum::add(std::uint64_t order, const BigInt& classes) {
  if (order == 0) throw std::invalid_argument("automorphism group order must be positive");
  if (classes < 0) throw std::invalid_argument("class count must be nonnegative");
  counts_[order] += classes;
}

BigInt AutSpectrum::total_classes() const {
  BigInt t = 0;
  for (const auto& [i, c] : counts_) t += c;
  return t;
}

Rational AutSpectrum::reciprocal_sum() const {
  Rational s = 0;
  for (const auto& [i, c] : counts_) s += Rational(c, from_u64(i));
  s.canonicalize();
  return s;
}

AutSpectrum AutSpectrum::nontrivial() const {
  AutSpectrum out;
  for (const auto& [i, c] : counts_)
    if (i >= 2) out.counts_[i] = c;
  return out;
}

json AutSpectrum::to_json() const {
  json j = json::object();
  for (const auto& [i, c] : counts_) j[std::to_string(i)] = to_string(c);
  return j;
}

AutSpectrum AutSpectrum::from_json(const json& j) {
  AutSpectrum s;
  for (const auto& [key, value] : j.items()) {
    std::uint64_t order = std::stoull(key);
    BigInt count = value.is_string() ? parse_bigint(value.get<std::string>()) : from_u64(value.get<std::uint64_t>());
    s.add(order, count);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Constants

BigInt completion_constant(const DefiningSet& pattern, const WAssignment& assignment, int n) {
  const VertexMask all = n >= 32 ? ~VertexMask{0} : ((VertexMask{1} << n) - 1);
  BigInt k = factorial(static_cast<unsigned>(pattern.size())) / from_u64(pattern.automorphism_count());
  k *= from_u64(assignment.completions);
  std::vector<VertexMask> sets = assignment.sets;
  std::sort(sets.begin(), sets.end());
  for (std::size_t i = 0; i < sets.size();) {
    std::size_t j = i;
    while (j < sets.size() && sets[j] == sets[i]) ++j;
    // A collection with nothing to saturate holds only the empty matching, so
    // its points cannot be permuted among distinct matchings.
    if ((all & ~sets[i]) != 0) k *= factorial(static_cast<unsigned>(j - i));
    i = j;
  }
  return k;
}

BigInt completion_constant(const DefiningSet& pattern, const DegreeSequence& seq) {
  std::vector<int> deficient;
  for (const auto& [d, m] : seq.terms())
    if (d < pattern.size()) deficient.insert(deficient.end(), m, d);
  if (seq.max_degree() > pattern.size())
    throw ValidationError("degree sequence " + seq.str() + " has a degree above |W| for " + pattern.name());
  const int n = seq.order();
  // Deficient vertices become 0..m-1; the graph order is what matters for
  // whether a collection has anything to saturate.
  auto catalogue = abstract_w_multisets(pattern, deficient);
  if (catalogue.empty())
    throw ValidationError("degree sequence " + seq.str() + " is not admissible for " + pattern.name());
  std::optional<BigInt> k;
  for (const auto& a : catalogue) {
    BigInt ka = completion_constant(pattern, a, n);
    if (k && *k != ka)
      throw ValidationError("completion constant differs between deficiency multisets of " + seq.str());
    k = ka;
  }
  return *k;
}

std::uint64_t defining_set_count(const TripleSystem& sts, const DefiningSet& pattern) {
  if (!sts.is_complete()) throw std::invalid_argument("defining_set_count needs a complete system");
  const int v = sts.order(), w = pattern.size();
  if (w > v) return 0;
  const auto copies = pattern.labeled_copies();
  std::vector<int> subset(w);
  std::iota(subset.begin(), subset.end(), 0);
  std::vector<int> local(v, -1);
  std::uint64_t count = 0;
  for (;;) {
    for (int i = 0; i < w; ++i) local[subset[i]] = i;
    std::uint64_t mask = 0;
    for (int a = 0; a < w; ++a)
      for (int b = a + 1; b < w; ++b) {
        auto t = sts.third_point(subset[a], subset[b]);
        if (t && local[*t] > b) mask |= DefiningSet::triple_bit({a, b, local[*t]});
      }
    if (std::binary_search(copies.begin(), copies.end(), mask)) ++count;
    for (int i = 0; i < w; ++i) local[subset[i]] = -1;
    int i = w - 1;
    while (i >= 0 && subset[i] == v - w + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < w; ++j) subset[j] = subset[j - 1] + 1;
  }
  return count;
}

std::uint64_t defining_set_count(const std::vector<TripleSystem>& systems, const DefiningSet& pattern) {
  if (systems.empty()) throw ValidationError("no systems to scan for " + pattern.name());
  std::uint64_t first = defining_set_count(systems.front(), pattern);
  for (std::size_t i = 1; i < systems.size(); ++i) {
    std::uint64_t c = defining_set_count(systems[i], pattern);
    if (c != first)
      throw ValidationError("occurrence count of " + pattern.name() + " is not constant at order " +
                            std::to_string(systems[i].order()) + ": " + std::to_string(first) + " vs " +
                            std::to_string(c));
  }
  return first;
}

std::vector<DegreeSequence> admissible_sequences(const DefiningSet& pattern, int v) {
  const int n = v - pattern.size();
  if (n < 1) return {};
  return pattern.degree_sequences(n);
}

// ---------------------------------------------------------------------------
// CensusLedger

CensusLedger::CensusLedger(int v, const DefiningSet& pattern, BigInt n_prime, int modulus,
                           std::vector<std::string> unit_keys)
    : v_(v),
      w_(pattern.size()),
      pattern_(pattern.pattern_string()),
      n_prime_(std::move(n_prime)),
      modulus_(modulus),
      unit_keys_(std::move(unit_keys)) {
  if (n_prime_ <= 0) throw std::invalid_argument("occurrence count must be positive");
  if (modulus_ < 1) throw std::invalid_argument("modulus must be positive");
  for (const auto& key : unit_keys_) tallies_[key];
}

std::string CensusLedger::sequence_of_unit(const std::string& unit_key) {
  auto arrow = unit_key.find(" <- ");
  return arrow == std::string::npos ? unit_key : unit_key.substr(0, arrow);
}

void CensusLedger::add_graph(const std::string& unit_key, const BigInt& aut_order) {
  auto& t = tally(unit_key);
  ++t.graphs;
  ++t.aut_buckets[to_string(aut_order)];
}

void CensusLedger::add_contribution(const std::string& unit_key, const BigInt& k, const BigInt& n_d,
                                    const BigInt& n_f, const BigInt& aut_order) {
  auto& t = tally(unit_key);
  if (n_d == 0 || n_f == 0) {
    ++t.zero_assignments;
    return;
  }
  ++t.assignments;
  BigInt num = k * factorial(static_cast<unsigned>(v_)) * n_d * n_f;
  BigInt den = factorial(static_cast<unsigned>(w_)) * aut_order * n_prime_;
  Rational q(num, den);
  q.canonicalize();
  t.partial_sum += q;
  t.partial_sum.canonicalize();
}

SequenceTally& CensusLedger::tally(const std::string& unit_key) {
  auto it = tallies_.find(unit_key);
  if (it == tallies_.end()) throw ValidationError("unknown ledger unit: " + unit_key);
  return it->second;
}

std::map<std::string, Rational> CensusLedger::sequence_sums() const {
  std::map<std::string, Rational> out;
  for (const auto& [key, t] : tallies_) {
    auto& s = out[sequence_of_unit(key)];
    s += t.partial_sum;
    s.canonicalize();
  }
  return out;
}

void CensusLedger::mark_complete(const LedgerUnit& unit) {
  if (std::find(unit_keys_.begin(), unit_keys_.end(), unit.key) == unit_keys_.end())
    throw ValidationError("unknown ledger unit: " + unit.key);
  if (unit.residue < 0 || unit.residue >= modulus_) throw ValidationError("unit residue out of range");
  completed_.insert(unit);
}

std::vector<LedgerUnit> CensusLedger::missing_units() const {
  std::vector<LedgerUnit> out;
  for (const auto& key : unit_keys_)
    for (int r = 0; r < modulus_; ++r)
      if (!completed_.count({key, r})) out.push_back({key, r});
  return out;
}

bool CensusLedger::is_complete() const { return !unit_keys_.empty() && missing_units().empty(); }

void CensusLedger::merge(const CensusLedger& other) {
  if (v_ != other.v_ || w_ != other.w_ || pattern_ != other.pattern_ || n_prime_ != other.n_prime_ ||
      modulus_ != other.modulus_ || unit_keys_ != other.unit_keys_)
    throw ValidationError("cannot merge ledgers of different runs");
  for (const auto& u : other.completed_)
    if (completed_.count(u))
      throw ValidationError("unit " + u.key + " part " + std::to_string(u.residue) + " present in both ledgers");
  for (const auto& u : other.completed_) completed_.insert(u);
  for (const auto& [seq, t] : other.tallies_) {
    auto& mine = tallies_[seq];
    mine.partial_sum += t.partial_sum;
    mine.partial_sum.canonicalize();
    mine.graphs += t.graphs;
    mine.assignments += t.assignments;
    mine.zero_assignments += t.zero_assignments;
    for (const auto& [aut, c] : t.aut_buckets) mine.aut_buckets[aut] += c;
  }
}

Rational CensusLedger::rational_total() const {
  Rational s = 0;
  for (const auto& [seq, t] : tallies_) s += t.partial_sum;
  s.canonicalize();
  return s;
}

json CensusLedger::to_json() const {
  json j;
  j["magic"] = kMagic;
  j["format_version"] = kFormatVersion;
  j["v"] = v_;
  j["w"] = w_;
  j["pattern"] = pattern_;
  j["n_prime"] = to_string(n_prime_);
  j["modulus"] = modulus_;
  j["unit_keys"] = unit_keys_;
  json done = json::array();
  for (const auto& u : completed_) done.push_back({{"key", u.key}, {"residue", u.residue}});
  j["completed"] = done;
  json seqs = json::object();
  for (const auto& [seq, t] : tallies_) {
    json buckets = json::object();
    for (const auto& [aut, c] : t.aut_buckets) buckets[aut] = c;
    seqs[seq] = {{"partial_sum", to_string(t.partial_sum)},
                 {"graphs", t.graphs},
                 {"assignments", t.assignments},
                 {"zero_assignments", t.zero_assignments},
                 {"aut_buckets", buckets}};
  }
  j["units"] = seqs;
  return j;
}

CensusLedger CensusLedger::from_json(const json& j) {
  if (!j.is_object() || j.value("magic", std::string{}) != kMagic)
    throw ValidationError("not a census ledger (missing magic header)");
  if (j.value("format_version", 0) != kFormatVersion)
    throw ValidationError("unsupported ledger format version");
  CensusLedger l;
  try {
    l.v_ = j.at("v").get<int>();
    l.w_ = j.at("w").get<int>();
    l.pattern_ = j.at("pattern").get<std::string>();
    l.n_prime_ = parse_bigint(j.at("n_prime").get<std::string>());
    l.modulus_ = j.at("modulus").get<int>();
    l.unit_keys_ = j.at("unit_keys").get<std::vector<std::string>>();
    for (const auto& u : j.at("completed")) l.completed_.insert({u.at("key").get<std::string>(), u.at("residue").get<int>()});
    for (const auto& [seq, t] : j.at("units").items()) {
      SequenceTally tally;
      tally.partial_sum = parse_rational(t.at("partial_sum").get<std::string>());
      tally.graphs = t.at("graphs").get<std::uint64_t>();
      tally.assignments = t.at("assignments").get<std::uint64_t>();
      tally.zero_assignments = t.at("zero_assignments").get<std::uint64_t>();
      for (const auto& [aut, c] : t.at("aut_buckets").items()) tally.aut_buckets[aut] = c.get<std::uint64_t>();
      l.tallies_[seq] = std::move(tally);
    }
    for (const auto& key : l.unit_keys_) l.tallies_[key];
    if (l.tallies_.size() != l.unit_keys_.size()) throw ValidationError("corrupt ledger: tally for an unknown unit");
    for (const auto& u : l.completed_)
      if (u.residue < 0 || u.residue >= l.modulus_ || !l.tallies_.count(u.key))
        throw ValidationError("corrupt ledger: completed unit out of range");
  } catch (const json::exception& e) {
    throw ValidationError(std::string("corrupt ledger: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("corrupt ledger: ") + e.what());
  }
  return l;
}

void CensusLedger::save(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << to_json().dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("cannot replace " + path);
}

CensusLedger CensusLedger::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("corrupt ledger " + path + ": " + e.what());
  }
  return from_json(j);
}

// ---------------------------------------------------------------------------
// Totals and resolution

BigInt labeled_total(const CensusLedger& ledger) {
  if (ledger.unit_keys().empty()) throw ValidationError("empty ledger: nothing was counted");
  if (!ledger.is_complete()) {
    auto missing = ledger.missing_units();
    throw ValidationError("incomplete ledger: " + std::to_string(missing.size()) + " work unit(s) missing, first " +
                          missing.front().key + " part " + std::to_string(missing.front().residue));
  }
  Rational t = ledger.rational_total();
  if (!is_integer(t)) throw ValidationError("labeled total is not an integer: " + to_string(t));
  if (t < 0) throw ValidationError("labeled total is negative");
  return t.get_num();
}

Resolution resolve_trivial_classes(const BigInt& labeled, const AutSpectrum& nontrivial, int v) {
  for (const auto& [i, c] : nontrivial.entries())
    if (i < 2) throw std::invalid_argument("spectrum passed as nontrivial contains order 1");
  Rational x(labeled, factorial(static_cast<unsigned>(v)));
  x.canonicalize();
  x -= nontrivial.reciprocal_sum();
  x.canonicalize();
  if (!is_integer(x)) throw ValidationError("number of classes with trivial group is not an integer: " + to_string(x));
  if (x < 0) throw ValidationError("number of classes with trivial group is negative: " + to_string(x));
  Resolution r;
  r.trivial_classes = x.get_num();
  r.total_classes = r.trivial_classes + nontrivial.total_classes();
  return r;
}

// ---------------------------------------------------------------------------
// Divisibility audit

DivisibilityReport divisibility_audit(const DefiningSet& pattern, int v, const BigInt& n_prime) {
  DivisibilityReport r;
  r.modulus = n_prime;
  const BigInt wf = factorial(static_cast<unsigned>(pattern.size()));
  for (const auto& seq : admissible_sequences(pattern, v)) {
    Rational w(completion_constant(pattern, seq), wf);
    w.canonicalize();
    r.weights.push_back({seq.str(), w});
  }
  r.detection_probability = n_prime > 0 ? 1.0 - 1.0 / n_prime.get_d() : 0.0;
  return r;
}

std::string DivisibilityReport::text() const {
  std::ostringstream os;
  os << "error weights (K/w!) per degree sequence:\n";
  for (const auto& w : weights) os << "  " << w.sequence << ": " << to_string(w.weight) << '\n';
  os << "an error E escapes the integrality check only if the weighted error is divisible by " << to_string(modulus)
     << '\n';
  os << "heuristic detection probability: " << detection_probability << '\n';
  return os.str();
}

}  // namespace sts
