#include "sts/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <omp.h>

#include "sts/classify.hpp"
#include "sts/decomp.hpp"
#include "sts/graph6.hpp"
#include "sts/reference.hpp"

namespace sts {

using nlohmann::json;

const char* version() { return "1.0.0"; }

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << x;
  return os.str();
}

void append_file(const std::string& from, const std::string& to) {
  std::ifstream in(from, std::ios::binary);
  std::ofstream out(to, std::ios::binary | std::ios::app);
  out << in.rdbuf();
  if (!out) throw std::runtime_error("cannot append to " + to);
}

// Graphs are handed to the workers in batches so that generation, which is
// sequential, interleaves with parallel counting; results are ingested in
// batch order, so the ledger never depends on the thread count.
constexpr std::size_t kBatchPerThread = 16;

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

DefiningSet RunConfig::defining_set() const { return DefiningSet::parse(w, pattern); }

void RunConfig::validate() const {
  if (!is_admissible_order(v)) throw std::invalid_argument("v: STS(" + std::to_string(v) + ") does not exist");
  if (w < 3 || w > 8) throw std::invalid_argument("w: must lie in 3..8");
  if (w >= v) throw std::invalid_argument("w: must be smaller than v");
  (void)defining_set();
  if (part.modulus < 1 || part.residue < 0 || part.residue >= part.modulus)
    throw std::invalid_argument("part: need 0 <= r < m");
  if (n_prime && *n_prime <= 0) throw std::invalid_argument("n-prime: must be positive");
}

json RunConfig::identity() const {
  json j;
  j["v"] = v;
  j["w"] = w;
  j["pattern"] = defining_set().pattern_string();
  j["part"] = part.str();
  j["include_ignorable"] = include_ignorable;
  j["n_prime"] = n_prime ? to_string(*n_prime) : std::string{};
  j["seed"] = seed;
  return j;
}

std::string RunConfig::hash() const { return hex16(fnv1a(identity().dump())); }

// ---------------------------------------------------------------------------
// Per-graph counting

json GraphRecord::to_json() const {
  json j;
  j["unit"] = unit;
  j["graph6"] = graph6;
  j["aut_order"] = to_string(aut_order);
  j["degree_sequence"] = degree_sequence;
  j["w_assignment_id"] = w_assignment_id;
  j["w_assignment"] = w_assignment;
  j["k"] = to_string(k);
  j["n_d"] = to_string(n_d);
  j["n_f"] = n_f ? json(to_string(*n_f)) : json(nullptr);
  j["t_d_ms"] = t_d_ms;
  j["t_f_ms"] = t_f_ms;
  return j;
}

std::vector<GraphRecord> count_graph(const AutClassifiedGraph& g, const DefiningSet& pattern,
                                     const std::string& unit) {
  GraphRecord base;
  base.unit = unit;
  base.graph6 = to_graph6(g.graph);
  base.aut_order = g.aut_order;
  base.degree_sequence = g.degree_sequence.str();
  auto t0 = std::chrono::steady_clock::now();
  base.n_d = count_triangle_decompositions(g.graph);
  base.t_d_ms = elapsed_ms(t0);

  std::vector<GraphRecord> out;
  WCatalogue catalogue = enumerate_w_multisets(g.graph, pattern);
  if (catalogue.assignments.empty()) {
    base.k = 0;
    out.push_back(base);
    return out;
  }
  for (std::size_t i = 0; i < catalogue.assignments.size(); ++i) {
    const WAssignment& a = catalogue.assignments[i];
    GraphRecord r = base;
    r.w_assignment_id = static_cast<int>(i);
    r.w_assignment = a.str();
    r.k = completion_constant(pattern, a, g.graph.order());
    if (r.n_d != 0) {
      auto t1 = std::chrono::steady_clock::now();
      auto cols = build_collections(g.graph, a, {.skip_forced = true});
      r.n_f = count_matching_decompositions(g.graph, cols);
      r.t_f_ms = elapsed_ms(t1);
      // Sequences with degree-1 vertices are cheap enough to also count as a
      // plain exact cover over edges and point slots; the two must agree.
      if (g.degree_sequence.min_degree() == 1) {
        BigInt via_cover = count_matching_decompositions_exact_cover(g.graph, build_collections(g.graph, a));
        if (via_cover != *r.n_f)
          throw std::logic_error("matching counts disagree for " + base.graph6 + " " + r.w_assignment + ": " +
                                 to_string(*r.n_f) + " vs " + to_string(via_cover));
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inputs

OccurrenceCount occurrence_count(int v, const DefiningSet& pattern) {
  OccurrenceCount c;
  if (v <= kMaxClassifyOrder) {
    auto cat = classify_all(v);
    c.value = from_u64(defining_set_count(cat.representatives, pattern));
    c.basis = "constant over all " + std::to_string(cat.representatives.size()) + " isomorphism classes";
  } else {
    constexpr int kSystems = 4;
    std::vector<TripleSystem> systems;
    for (int i = 0; i < kSystems; ++i) systems.push_back(construct_sts(v, 0x5eed0000u + i));
    c.value = from_u64(defining_set_count(systems, pattern));
    c.basis = "constant over " + std::to_string(kSystems) + " random systems";
  }
  if (c.value == 0) throw ValidationError(pattern.name() + " does not occur in STS(" + std::to_string(v) + ")");
  return c;
}

std::optional<AutSpectrum> builtin_spectrum(int v) {
  if (v <= kMaxClassifyOrder && is_admissible_order(v)) return classify_all(v).spectrum.nontrivial();
  if (v == sts21_reference().v) return sts21_reference().nontrivial;
  return std::nullopt;
}

std::vector<PlanStep> run_plan(int v, const DefiningSet& pattern, bool include_ignorable) {
  std::vector<PlanStep> steps;
  for (const auto& seq : admissible_sequences(pattern, v))
    for (auto& step : generation_plan(seq, pattern, include_ignorable)) steps.push_back(std::move(step));
  return steps;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::optional<AutSpectrum> load_spectrum(const RunConfig& config) {
  if (!config.spectrum.empty()) {
    std::ifstream in(config.spectrum);
    if (!in) throw std::runtime_error("cannot read " + config.spectrum);
    json j;
    in >> j;
    return AutSpectrum::from_json(j.contains("spectrum") ? j.at("spectrum") : j).nontrivial();
  }
  return builtin_spectrum(config.v);
}

std::string text_report(const CountResult& r, const RunConfig& config, const DefiningSet& pattern) {
  const CensusLedger& l = r.ledger;
  std::ostringstream os;
  os << "stscount " << version() << " count report\n";
  os << "config hash " << config.hash() << ", seed " << config.seed << "\n";
  os << "STS(" << l.order() << "), defining set " << pattern.name() << ", N' = " << to_string(l.n_prime()) << "\n";
  os << "parts completed: " << l.completed_units().size() << " of " << l.unit_keys().size() * l.modulus()
     << " (modulus " << l.modulus() << ")\n\n";

  os << "graphs per unit\n";
  for (const auto& [key, t] : l.units())
    os << "  " << std::left << std::setw(34) << key << std::right << std::setw(12) << t.graphs << " graphs, "
       << t.assignments << " contributing (G,W), " << t.zero_assignments << " zero\n";

  os << "\ngraphs per |Aut(G)|\n";
  std::set<BigInt> orders;
  for (const auto& [key, t] : l.units())
    for (const auto& [aut, c] : t.aut_buckets) orders.insert(parse_bigint(aut));
  for (const auto& o : orders) {
    os << "  " << std::setw(10) << to_string(o);
    for (const auto& [key, t] : l.units()) {
      auto it = t.aut_buckets.find(to_string(o));
      os << std::setw(14) << (it == t.aut_buckets.end() ? std::string("-") : std::to_string(it->second));
    }
    os << "\n";
  }

  os << "\npartial sums per unit\n";
  for (const auto& [key, t] : l.units()) os << "  " << std::left << std::setw(34) << key << std::right << to_string(t.partial_sum) << "\n";
  os << "partial sums per degree sequence\n";
  for (const auto& [seq, s] : l.sequence_sums())
    os << "  " << std::left << std::setw(34) << seq << std::right << to_string(s)
       << (is_integer(s) ? "" : "  (not an integer)") << "\n";

  os << "\n";
  if (r.labeled_total) {
    os << "labeled STS(" << l.order() << "): " << with_commas(*r.labeled_total) << "\n";
    if (r.resolution) {
      os << "classes with trivial automorphism group: " << with_commas(r.resolution->trivial_classes) << "\n";
      os << "isomorphism classes: " << with_commas(r.resolution->total_classes) << "\n";
    } else {
      os << "isomorphism classes: not resolved (no automorphism spectrum available)\n";
    }
  } else {
    os << "labeled total: not available (" << r.error << ")\n";
  }
  os << "\n" << divisibility_audit(pattern, l.order(), l.n_prime()).text();
  return os.str();
}

std::string csv_report(const CountResult& r) {
  std::ostringstream os;
  os << "S1,S2,partial_sum\n";
  for (const auto& [key, t] : r.ledger.units()) {
    auto arrow = key.find(" <- ");
    std::string s2 = arrow == std::string::npos ? key : key.substr(arrow + 4);
    os << CensusLedger::sequence_of_unit(key) << ',' << s2 << ',' << to_string(t.partial_sum) << '\n';
  }
  os << "Total,," << (r.labeled_total ? to_string(*r.labeled_total) : to_string(r.ledger.rational_total())) << '\n';
  return os.str();
}

}  // namespace

CountResult finalize(const CensusLedger& ledger, const RunConfig& config) {
  CountResult r;
  r.ledger = ledger;
  r.complete = ledger.is_complete();
  const DefiningSet pattern = DefiningSet::parse(ledger.pattern_size(), ledger.pattern_string());
  try {
    r.labeled_total = labeled_total(ledger);
    if (auto spectrum = load_spectrum(config)) r.resolution = resolve_trivial_classes(*r.labeled_total, *spectrum, ledger.order());
  } catch (const ValidationError& e) {
    r.error = e.what();
  }
  r.text = text_report(r, config, pattern);
  r.csv = csv_report(r);
  return r;
}

// ---------------------------------------------------------------------------
// The run

CountResult run_count(const RunConfig& config, std::ostream* log) {
  config.validate();
  const DefiningSet pattern = config.defining_set();
  auto say = [&](const std::string& line) {
    if (log) *log << line << std::endl;
  };

  BigInt n_prime;
  if (config.n_prime) {
    n_prime = *config.n_prime;
    say("N' = " + to_string(n_prime) + " (given)");
  } else {
    OccurrenceCount oc = occurrence_count(config.v, pattern);
    n_prime = oc.value;
    say("N' = " + to_string(n_prime) + " (" + oc.basis + ")");
  }

  const auto steps = run_plan(config.v, pattern, config.include_ignorable);
  std::vector<std::string> keys;
  for (const auto& s : steps) keys.push_back(s.str());
  if (keys.empty()) throw ValidationError("no admissible degree sequence for " + pattern.name() + " at v=" + std::to_string(config.v));

  CensusLedger ledger(config.v, pattern, n_prime, config.part.modulus, keys);
  if (!config.checkpoint.empty() && std::filesystem::exists(config.checkpoint)) {
    CensusLedger saved = CensusLedger::load(config.checkpoint);
    CensusLedger fresh = ledger;
    if (saved.order() != fresh.order() || saved.pattern_string() != fresh.pattern_string() ||
        saved.n_prime() != fresh.n_prime() || saved.modulus() != fresh.modulus() || saved.unit_keys() != fresh.unit_keys())
      throw ValidationError("checkpoint " + config.checkpoint + " belongs to a different run");
    ledger = std::move(saved);
    say("resuming from " + config.checkpoint + " with " + std::to_string(ledger.completed_units().size()) +
        " completed unit(s)");
  }

  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
  const std::size_t batch_size = kBatchPerThread * static_cast<std::size_t>(threads);
  int units_run = 0;
  bool stopped = false;

  for (const auto& step : steps) {
    const std::string key = step.str();
    const LedgerUnit unit{key, config.part.residue};
    if (ledger.is_unit_complete(unit)) continue;
    if (config.stop_after_units > 0 && units_run >= config.stop_after_units) {
      stopped = true;
      break;
    }
    auto t0 = std::chrono::steady_clock::now();
    const std::string tmp_records = config.records.empty() ? std::string{} : config.records + ".unit.tmp";
    std::ofstream records;
    if (!tmp_records.empty()) {
      records.open(tmp_records, std::ios::trunc);
      if (!records) throw std::runtime_error("cannot write " + tmp_records);
    }
    // Work on a copy so that an exception leaves the ledger at the last unit boundary.
    CensusLedger work = ledger;
    std::vector<AutClassifiedGraph> batch;
    std::uint64_t graphs = 0;
    auto flush = [&] {
      std::vector<std::vector<GraphRecord>> results(batch.size());
      std::string failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
      for (std::size_t i = 0; i < batch.size(); ++i) {
        try {
          results[i] = count_graph(batch[i], pattern, key);
        } catch (const std::exception& e) {
#pragma omp critical
          if (failure.empty()) failure = e.what();
        }
      }
      if (!failure.empty()) throw std::runtime_error("counting failed in unit " + key + ": " + failure);
      for (std::size_t i = 0; i < batch.size(); ++i) {
        work.add_graph(key, batch[i].aut_order);
        for (const auto& rec : results[i]) {
          if (rec.w_assignment_id >= 0)
            work.add_contribution(key, rec.k, rec.n_d, rec.n_f.value_or(0), rec.aut_order);
          if (records.is_open()) records << rec.to_json().dump() << '\n';
        }
      }
      batch.clear();
    };
    GenSpec spec = step.spec();
    spec.part = config.part;
    generate(spec, [&](const AutClassifiedGraph& source) {
      batch.push_back(step.direct() ? source : extend_with_pendants(source, step));
      ++graphs;
      if (batch.size() >= batch_size) flush();
      return true;
    });
    flush();
    if (records.is_open()) {
      records.close();
      append_file(tmp_records, config.records);
      std::filesystem::remove(tmp_records);
    }
    work.mark_complete(unit);
    ledger = std::move(work);
    if (!config.checkpoint.empty()) ledger.save(config.checkpoint);
    ++units_run;
    std::ostringstream msg;
    msg << "unit " << key << " part " << config.part.str() << ": " << graphs << " graphs in " << std::fixed
        << std::setprecision(1) << elapsed_ms(t0) / 1000.0 << " s";
    say(msg.str());
  }

  CountResult r = finalize(ledger, config);
  r.stopped_early = stopped;
  return r;
}

}  // namespace sts
