#pragma once

// Cost/benefit sampling for choosing a defining set: for random graphs of
// every admissible degree sequence, the mean counts N_D and N_F and the mean
// time to compute them.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "sts/model.hpp"

namespace sts {

struct EstimateCandidate {
  DefiningSet pattern;
  int samples = 0;  // random graphs per degree sequence

  // "w:pattern" or "w:pattern:samples", e.g. "5:012,034:100".
  static EstimateCandidate parse(const std::string& text, int default_samples);
};

struct EstimateRow {
  std::string pattern;   // "w=5 {012,034}"
  std::string sequence;  // degree sequence of G
  int samples = 0;
  double mean_n_d = 0;
  double mean_n_f = 0;   // summed over the graph's deficiency multisets
  double mean_t_d_ms = 0;
  double mean_t_f_ms = 0;
  double mean_product = 0;  // mean of N_D * N_F
  double max_multisets = 0;  // most multisets seen on one graph
  // mean N_D * mean N_F / (mean t_D + mean t_F)
  double figure_of_merit() const;
  // (mean N_D * mean N_F - mean(N_D N_F)) / mean(N_D N_F); 0 when undefined
  double product_gap() const;
};

struct EstimateReport {
  int v = 0;
  std::uint64_t seed = 0;
  long switches = -1;
  std::vector<EstimateRow> rows;
  // Score of a pattern: the smallest figure of merit over its degree
  // sequences, since every sequence has to be computed.
  std::vector<std::pair<std::string, double>> scores;  // sorted best first

  std::string text() const;
  std::string csv() const;
  nlohmann::json to_json() const;
};

// Candidates compared by default: w=4 {012}, w=5 {012,034} and the Pasch
// configuration w=6 {012,034,135,245}.
std::vector<EstimateCandidate> default_candidates(int samples);

// Samples graphs with `switches` Markov-chain steps each (negative: default),
// seeding each graph from (seed, candidate, sequence, index).
EstimateReport run_estimate(int v, const std::vector<EstimateCandidate>& candidates, std::uint64_t seed,
                            long switches = -1, int threads = 0);

}  // namespace sts
