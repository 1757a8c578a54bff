#pragma once

// The counting run: generate the graphs of every admissible degree sequence,
// count N_D and N_F per graph and deficiency multiset, and aggregate the
// contributions in a checkpointed ledger.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sts/bigint.hpp"
#include "sts/census.hpp"
#include "sts/graph_gen.hpp"
#include "sts/model.hpp"

namespace sts {

// Library version embedded in every report.
const char* version();

struct RunConfig {
  int v = 0;
  int w = 0;
  std::string pattern;  // blocks of size 3 on W, e.g. "012,034"
  Part part;            // slice r/m of every generation tree
  int threads = 0;      // <= 0: OpenMP default
  std::string checkpoint;  // ledger file; resumed when it exists
  std::string records;     // JSON-lines output of per-(G, W) records
  std::string spectrum;    // nontrivial automorphism spectrum for resolving classes
  std::optional<BigInt> n_prime;  // override the occurrence count
  bool include_ignorable = false;  // also run steps that provably contribute nothing
  std::uint64_t seed = 1;
  // Stop after this many units (simulates an interrupted run); 0 = no limit.
  int stop_after_units = 0;

  DefiningSet defining_set() const;
  // Throws std::invalid_argument naming the offending field.
  void validate() const;
  // Fields that determine the numbers in the report (not paths or threads).
  nlohmann::json identity() const;
  // FNV-1a of identity(), as 16 hex digits.
  std::string hash() const;
};

// One (G, W) record of the JSON-lines stream.
struct GraphRecord {
  std::string unit;
  std::string graph6;
  BigInt aut_order;
  std::string degree_sequence;
  int w_assignment_id = -1;  // index in the graph's multiset catalogue; -1 if none
  std::string w_assignment;
  BigInt k;
  BigInt n_d;
  std::optional<BigInt> n_f;  // not computed when n_d = 0
  double t_d_ms = 0;
  double t_f_ms = 0;

  nlohmann::json to_json() const;
};

// Counts for one graph: one record per deficiency multiset (or a single record
// with w_assignment_id = -1 when the graph admits none).
std::vector<GraphRecord> count_graph(const AutClassifiedGraph& g, const DefiningSet& pattern, const std::string& unit);

struct OccurrenceCount {
  BigInt value;
  std::string basis;  // how the constancy was checked
};

// N' for the pattern at order v: by a scan of every class for v <= 15, and of
// several random systems otherwise.
OccurrenceCount occurrence_count(int v, const DefiningSet& pattern);

// Nontrivial spectrum available without a file: the classification for v <= 15
// and the stored constants for v = 21.
std::optional<AutSpectrum> builtin_spectrum(int v);

// The work units ("S1 <- S2" keys) of a run, in processing order.
std::vector<PlanStep> run_plan(int v, const DefiningSet& pattern, bool include_ignorable);

struct CountResult {
  CensusLedger ledger;
  bool complete = false;        // every unit of every part present
  bool stopped_early = false;   // stop_after_units reached
  std::optional<BigInt> labeled_total;
  std::optional<Resolution> resolution;
  std::string error;            // finalization failure, if any
  std::string text;             // human-readable report
  std::string csv;              // per-unit partial sums
};

// Runs (or resumes) a count. Log lines go to `log` when given.
CountResult run_count(const RunConfig& config, std::ostream* log = nullptr);

// Report for a ledger, e.g. after merging partial ledgers.
CountResult finalize(const CensusLedger& ledger, const RunConfig& config);

}  // namespace sts
