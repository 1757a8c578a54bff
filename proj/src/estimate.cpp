#include "sts/estimate.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <limits>
#include <sstream>

#include <omp.h>

#include "sts/census.hpp"
#include "sts/decomp.hpp"
#include "sts/graph_gen.hpp"

namespace sts {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

struct Sample {
  double n_d = 0, n_f = 0, t_d = 0, t_f = 0, multisets = 0;
};

Sample measure(const DenseGraph& g, const DefiningSet& pattern) {
  Sample s;
  auto t0 = std::chrono::steady_clock::now();
  s.n_d = count_triangle_decompositions(g).get_d();
  s.t_d = elapsed_ms(t0);
  auto t1 = std::chrono::steady_clock::now();
  WCatalogue cat = enumerate_w_multisets(g, pattern);
  BigInt n_f = 0;
  for (const auto& a : cat.assignments)
    n_f += count_matching_decompositions(g, build_collections(g, a, {.skip_forced = true}));
  s.t_f = elapsed_ms(t1);
  s.n_f = n_f.get_d();
  s.multisets = static_cast<double>(cat.assignments.size());
  return s;
}

}  // namespace

EstimateCandidate EstimateCandidate::parse(const std::string& text, int default_samples) {
  auto first = text.find(':');
  if (first == std::string::npos) throw std::invalid_argument("candidate '" + text + "': expected w:pattern[:samples]");
  auto second = text.find(':', first + 1);
  int w = std::stoi(text.substr(0, first));
  std::string pattern = text.substr(first + 1, second == std::string::npos ? std::string::npos : second - first - 1);
  EstimateCandidate c{DefiningSet::parse(w, pattern), default_samples};
  if (second != std::string::npos) c.samples = std::stoi(text.substr(second + 1));
  if (c.samples < 0) throw std::invalid_argument("candidate '" + text + "': negative sample size");
  return c;
}

double EstimateRow::figure_of_merit() const {
  double t = mean_t_d_ms + mean_t_f_ms;
  if (samples == 0) return 0;
  // Timer resolution can make t vanish for trivial graphs; the counts are 0 then too.
  if (t <= 0) return mean_n_d * mean_n_f > 0 ? std::numeric_limits<double>::infinity() : 0;
  return mean_n_d * mean_n_f / t;
}

double EstimateRow::product_gap() const {
  if (mean_product == 0) return 0;
  return (mean_n_d * mean_n_f - mean_product) / mean_product;
}

std::vector<EstimateCandidate> default_candidates(int samples) {
  return {{DefiningSet::parse(4, "012"), samples},
          {DefiningSet::parse(5, "012,034"), samples},
          {DefiningSet::parse(6, "012,034,135,245"), samples}};
}

EstimateReport run_estimate(int v, const std::vector<EstimateCandidate>& candidates, std::uint64_t seed,
                            long switches, int threads) {
  if (!is_admissible_order(v)) throw std::invalid_argument("STS(" + std::to_string(v) + ") does not exist");
  EstimateReport report;
  report.v = v;
  report.seed = seed;
  report.switches = switches;
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    const auto& cand = candidates[ci];
    if (cand.samples == 0) continue;
    double score = std::numeric_limits<double>::infinity();
    const auto sequences = admissible_sequences(cand.pattern, v);
    for (std::size_t si = 0; si < sequences.size(); ++si) {
      const auto& seq = sequences[si];
      std::vector<Sample> samples(cand.samples);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
      for (int i = 0; i < cand.samples; ++i) {
        std::uint64_t s = splitmix64(seed ^ splitmix64((ci << 48) ^ (si << 32) ^ static_cast<std::uint64_t>(i)));
        samples[i] = measure(sample_random(seq, switches, s), cand.pattern);
      }
      EstimateRow row;
      row.pattern = cand.pattern.name();
      row.sequence = seq.str();
      row.samples = cand.samples;
      for (const auto& s : samples) {
        row.mean_n_d += s.n_d;
        row.mean_n_f += s.n_f;
        row.mean_t_d_ms += s.t_d;
        row.mean_t_f_ms += s.t_f;
        row.mean_product += s.n_d * s.n_f;
        row.max_multisets = std::max(row.max_multisets, s.multisets);
      }
      const double n = cand.samples;
      row.mean_n_d /= n;
      row.mean_n_f /= n;
      row.mean_t_d_ms /= n;
      row.mean_t_f_ms /= n;
      row.mean_product /= n;
      score = std::min(score, row.figure_of_merit());
      report.rows.push_back(row);
    }
    if (!sequences.empty()) report.scores.emplace_back(cand.pattern.name(), score);
  }
  std::stable_sort(report.scores.begin(), report.scores.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return report;
}

std::string EstimateReport::text() const {
  std::ostringstream os;
  os << "STS(" << v << ") defining-set comparison, seed " << seed << ", "
     << (switches < 0 ? std::string("20 switches per edge") : std::to_string(switches) + " switches") << "\n";
  os << std::left << std::setw(28) << "pattern" << std::setw(16) << "G" << std::right << std::setw(8) << "n"
     << std::setw(16) << "mean N_D" << std::setw(12) << "mean t_D" << std::setw(16) << "mean N_F" << std::setw(12)
     << "mean t_F" << std::setw(14) << "merit" << std::setw(10) << "gap" << "\n";
  os << std::fixed;
  for (const auto& r : rows)
    os << std::left << std::setw(28) << r.pattern << std::setw(16) << r.sequence << std::right << std::setw(8)
       << r.samples << std::setprecision(1) << std::setw(16) << r.mean_n_d << std::setw(12) << r.mean_t_d_ms
       << std::setw(16) << r.mean_n_f << std::setw(12) << r.mean_t_f_ms << std::setw(14) << r.figure_of_merit()
       << std::setprecision(3) << std::setw(10) << r.product_gap() << "\n";
  os << "ranking (smallest figure of merit over the pattern's sequences):\n";
  os << std::setprecision(1);
  for (std::size_t i = 0; i < scores.size(); ++i)
    os << "  " << i + 1 << ". " << scores[i].first << "  " << scores[i].second << "\n";
  return os.str();
}

std::string EstimateReport::csv() const {
  std::ostringstream os;
  os << "pattern,sequence,samples,mean_n_d,mean_t_d_ms,mean_n_f,mean_t_f_ms,mean_product,figure_of_merit,product_gap\n";
  os << std::setprecision(10);
  for (const auto& r : rows)
    os << '"' << r.pattern << "\"," << r.sequence << ',' << r.samples << ',' << r.mean_n_d << ',' << r.mean_t_d_ms
       << ',' << r.mean_n_f << ',' << r.mean_t_f_ms << ',' << r.mean_product << ',' << r.figure_of_merit() << ','
       << r.product_gap() << '\n';
  return os.str();
}

nlohmann::json EstimateReport::to_json() const {
  nlohmann::json j;
  j["v"] = v;
  j["seed"] = seed;
  j["switches"] = switches;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows)
    j["rows"].push_back({{"pattern", r.pattern},
                         {"sequence", r.sequence},
                         {"samples", r.samples},
                         {"mean_n_d", r.mean_n_d},
                         {"mean_t_d_ms", r.mean_t_d_ms},
                         {"mean_n_f", r.mean_n_f},
                         {"mean_t_f_ms", r.mean_t_f_ms},
                         {"mean_product", r.mean_product},
                         {"max_multisets", r.max_multisets},
                         {"figure_of_merit", r.figure_of_merit()},
                         {"product_gap", r.product_gap()}});
  j["ranking"] = nlohmann::json::array();
  for (const auto& [name, score] : scores) j["ranking"].push_back({{"pattern", name}, {"score", score}});
  return j;
}

}  // namespace sts
