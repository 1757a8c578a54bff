// stscount: command-line front end for counting Steiner triple systems.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sts/bigint.hpp"
#include "sts/census.hpp"
#include "sts/classify.hpp"
#include "sts/estimate.hpp"
#include "sts/graph6.hpp"
#include "sts/graph_gen.hpp"
#include "sts/pipeline.hpp"
#include "sts/reference.hpp"

namespace {

using nlohmann::json;

// Options given in a --config JSON file apply only where the command line
// did not set them. Keys are long option names ("n-prime" or "n_prime").
void apply_config(CLI::App& sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  json j;
  in >> j;
  if (!j.is_object()) throw std::runtime_error("config " + path + " must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    CLI::Option* opt = sub.get_option_no_throw("--" + name);
    if (!opt) throw std::runtime_error("config " + path + ": unknown option '" + key + "'");
    if (opt->count() != 0) continue;
    auto add = [&](const json& x) {
      if (x.is_string()) opt->add_result(x.get<std::string>());
      else if (x.is_boolean()) opt->add_result(x.get<bool>() ? "true" : "false");
      else opt->add_result(x.dump());
    };
    if (value.is_array())
      for (const auto& x : value) add(x);
    else
      add(value);
    opt->run_callback();
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct CountOptions {
  sts::RunConfig run;
  std::string part = "0/1";
  std::string n_prime;
  std::string report, csv, config;
};

void add_run_options(CLI::App* sub, CountOptions& o) {
  sub->add_option("--v", o.run.v, "Order of the triple systems");
  sub->add_option("--w", o.run.w, "Number of points of the defining set");
  sub->add_option("--pattern", o.run.pattern, "Blocks of size 3 on the defining set, e.g. 012,034");
  sub->add_option("--part", o.part, "Only slice r of m of every generation tree (r/m)");
  sub->add_option("--threads", o.run.threads, "Worker threads (default: all)");
  sub->add_option("--checkpoint", o.run.checkpoint, "Ledger file, written after every unit and resumed from");
  sub->add_option("--records", o.run.records, "Append per-(G,W) JSON lines to this file");
  sub->add_option("--report", o.report, "Write the text report here as well");
  sub->add_option("--csv", o.csv, "Write per-unit partial sums as CSV");
  sub->add_option("--spectrum", o.run.spectrum, "JSON automorphism spectrum {order: classes} for resolving classes");
  sub->add_option("--n-prime", o.n_prime, "Use this occurrence count instead of computing it");
  sub->add_flag("--include-ignorable", o.run.include_ignorable, "Also run generation steps that contribute nothing");
  sub->add_option("--seed", o.run.seed, "Seed recorded in the report");
  sub->add_option("--stop-after-units", o.run.stop_after_units, "Stop after this many units (for testing resume)");
  sub->add_option("--config", o.config, "JSON file with default option values");
}

void finish_run_options(CLI::App& sub, CountOptions& o) {
  apply_config(sub, o.config);
  o.run.part = sts::Part::parse(o.part);
  if (!o.n_prime.empty()) o.run.n_prime = sts::parse_bigint(o.n_prime);
  o.run.validate();
}

int cmd_count(CLI::App& sub, CountOptions& o) {
  finish_run_options(sub, o);
  sts::CountResult r = sts::run_count(o.run, &std::cerr);
  std::cout << r.text;
  write_text(o.report, r.text);
  write_text(o.csv, r.csv);
  if (r.stopped_early) {
    std::cerr << "stopped early; resume with the same --checkpoint\n";
    return 3;
  }
  // An incomplete ledger (a single part of several) is a normal outcome; a
  // complete one that fails to finalize is a validation failure.
  if (r.complete && !r.error.empty()) {
    std::cerr << "FAIL finalization: " << r.error << "\n";
    return 1;
  }
  return 0;
}

int cmd_merge(CLI::App& sub, CountOptions& o, const std::vector<std::string>& inputs, const std::string& out) {
  apply_config(sub, o.config);
  if (inputs.empty()) throw std::runtime_error("merge needs at least one ledger");
  sts::CensusLedger merged = sts::CensusLedger::load(inputs.front());
  for (std::size_t i = 1; i < inputs.size(); ++i) merged.merge(sts::CensusLedger::load(inputs[i]));
  if (!out.empty()) merged.save(out);
  sts::RunConfig cfg = o.run;
  cfg.v = merged.order();
  cfg.w = merged.pattern_size();
  cfg.pattern = merged.pattern_string();
  sts::CountResult r = sts::finalize(merged, cfg);
  std::cout << r.text;
  write_text(o.report, r.text);
  write_text(o.csv, r.csv);
  if (r.complete && !r.error.empty()) {
    std::cerr << "FAIL finalization: " << r.error << "\n";
    return 1;
  }
  return 0;
}

struct EstimateOptions {
  int v = 21;
  int samples = 20;
  std::vector<std::string> candidates;
  std::uint64_t seed = 1;
  long switches = -1;
  int threads = 0;
  std::string csv, json_out, config;
};

int cmd_estimate(CLI::App& sub, EstimateOptions& o) {
  apply_config(sub, o.config);
  std::vector<sts::EstimateCandidate> cands;
  if (o.candidates.empty())
    cands = sts::default_candidates(o.samples);
  else
    for (const auto& c : o.candidates) cands.push_back(sts::EstimateCandidate::parse(c, o.samples));
  sts::EstimateReport r = sts::run_estimate(o.v, cands, o.seed, o.switches, o.threads);
  std::cout << "stscount " << sts::version() << " estimate, seed " << o.seed << "\n" << r.text();
  write_text(o.csv, r.csv());
  if (!o.json_out.empty()) {
    json j = r.to_json();
    j["version"] = sts::version();
    write_text(o.json_out, j.dump(2) + "\n");
  }
  return 0;
}

struct GraphsOptions {
  std::string sequence;
  int n = 0, edges = -1, min_degree = 0, max_degree = -1;
  std::string part = "0/1", out, config;
  bool count_only = false, with_aut = false;
};

int cmd_graphs(CLI::App& sub, GraphsOptions& o) {
  apply_config(sub, o.config);
  sts::GenSpec spec;
  if (!o.sequence.empty()) {
    spec = sts::GenSpec::for_sequence(sts::DegreeSequence::parse(o.sequence));
  } else {
    if (o.n <= 0 || o.edges < 0) throw std::runtime_error("graphs needs --sequence, or --n and --edges");
    spec.n = o.n;
    spec.edges = o.edges;
    spec.min_degree = o.min_degree;
    spec.max_degree = o.max_degree < 0 ? o.n - 1 : o.max_degree;
  }
  spec.part = sts::Part::parse(o.part);
  spec.validate();
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) throw std::runtime_error("cannot write " + o.out);
    out = &file;
  }
  std::map<sts::BigInt, std::uint64_t> by_aut;
  auto stats = sts::generate(spec, [&](const sts::AutClassifiedGraph& g) {
    ++by_aut[g.aut_order];
    if (!o.count_only) {
      *out << sts::to_graph6(g.graph);
      if (o.with_aut) *out << ' ' << g.aut_order;
      *out << '\n';
    }
    return true;
  });
  std::cerr << spec.str() << ": " << stats.emitted << " graphs" << (stats.infeasible ? " (infeasible)" : "") << "\n";
  for (const auto& [aut, c] : by_aut) std::cerr << "  |Aut| " << aut << ": " << c << "\n";
  if (o.count_only) std::cout << stats.emitted << "\n";
  return 0;
}

struct ClassifyOptions {
  int v = 0;
  std::string catalogue, spectrum, config;
  bool direct = false;
};

int cmd_classify(CLI::App& sub, ClassifyOptions& o) {
  apply_config(sub, o.config);
  auto cat = sts::classify_all(o.v);
  std::cout << "STS(" << o.v << "): " << cat.representatives.size() << " isomorphism classes, "
            << sts::with_commas(cat.labeled_count) << " labeled systems\n";
  for (const auto& [order, count] : cat.spectrum.entries()) std::cout << "  |Aut| " << order << ": " << count << "\n";
  if (o.direct && o.v <= sts::kMaxDirectCountOrder) {
    auto direct = sts::labeled_count_direct(o.v);
    std::cout << "direct exact-cover count: " << sts::with_commas(direct)
              << (direct == cat.labeled_count ? " (agrees)" : " (DISAGREES)") << "\n";
    if (direct != cat.labeled_count) return 1;
  }
  if (!o.catalogue.empty()) {
    std::ofstream out(o.catalogue);
    sts::write_catalogue(out, cat.representatives);
  }
  if (!o.spectrum.empty()) {
    json j;
    j["v"] = o.v;
    j["spectrum"] = cat.spectrum.to_json();
    j["labeled_count"] = sts::to_string(cat.labeled_count);
    write_text(o.spectrum, j.dump(2) + "\n");
  }
  return 0;
}

struct VerifyOptions {
  std::vector<std::string> ledgers;
  std::string spectrum, reference, config;
  int v = 0;
};

int cmd_verify(CLI::App& sub, VerifyOptions& o) {
  apply_config(sub, o.config);
  int failures = 0;
  auto report = [&](bool ok, const std::string& name, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : ": " + detail) << "\n";
    if (!ok) ++failures;
  };

  std::vector<std::pair<std::string, sts::BigInt>> totals;
  for (const auto& path : o.ledgers) {
    sts::CensusLedger ledger;
    try {
      ledger = sts::CensusLedger::load(path);
    } catch (const std::exception& e) {
      report(false, "ledger-format " + path, e.what());
      continue;
    }
    sts::BigInt labeled;
    try {
      labeled = sts::labeled_total(ledger);
      report(true, "integrality " + path, "labeled total " + sts::with_commas(labeled));
    } catch (const sts::ValidationError& e) {
      report(false, "integrality " + path, e.what());
      continue;
    }
    totals.emplace_back(path, labeled);
    std::optional<sts::AutSpectrum> spectrum;
    if (!o.spectrum.empty()) {
      std::ifstream in(o.spectrum);
      json j;
      in >> j;
      spectrum = sts::AutSpectrum::from_json(j.contains("spectrum") ? j.at("spectrum") : j).nontrivial();
    } else {
      spectrum = sts::builtin_spectrum(ledger.order());
    }
    if (spectrum) {
      try {
        auto res = sts::resolve_trivial_classes(labeled, *spectrum, ledger.order());
        report(true, "class-resolution " + path,
               sts::to_string(res.trivial_classes) + " with trivial group, " + sts::to_string(res.total_classes) +
                   " classes");
      } catch (const sts::ValidationError& e) {
        report(false, "class-resolution " + path, e.what());
      }
    }
    if (ledger.order() <= sts::kMaxClassifyOrder) {
      auto oracle = sts::classify_all(ledger.order()).labeled_count;
      report(oracle == labeled, "classification-oracle " + path, "oracle " + sts::with_commas(oracle));
    }
    const auto pattern = sts::DefiningSet::parse(ledger.pattern_size(), ledger.pattern_string());
    std::cout << sts::divisibility_audit(pattern, ledger.order(), ledger.n_prime()).text();
  }
  for (std::size_t i = 1; i < totals.size(); ++i)
    report(totals[i].second == totals[0].second, "cross-pattern " + totals[0].first + " vs " + totals[i].first,
           sts::with_commas(totals[0].second) + " vs " + sts::with_commas(totals[i].second));

  if (o.v == 21 || !o.reference.empty()) {
    try {
      sts::ReferenceData ref = o.reference.empty() ? sts::sts21_reference() : sts::load_reference(o.reference);
      auto check = sts::check_reference(ref);
      report(check.partial_sums_add_up, "reference-partial-sums", "");
      report(check.trivial_matches, "reference-trivial-classes", sts::with_commas(check.resolution.trivial_classes));
      report(check.total_matches, "reference-total-classes", sts::with_commas(check.resolution.total_classes));
    } catch (const std::exception& e) {
      report(false, "reference", e.what());
    }
  }
  if (o.ledgers.empty() && o.v != 21 && o.reference.empty()) {
    std::cerr << "verify: nothing to check (give --ledger, --v 21 or --reference)\n";
    return 2;
  }
  std::cout << (failures == 0 ? "all checks passed\n" : std::to_string(failures) + " check(s) failed\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact counting of Steiner triple systems by defining-set decomposition"};
  app.set_version_flag("--version", sts::version());
  app.require_subcommand(1);

  CountOptions count_opts;
  auto* count = app.add_subcommand("count", "Count labeled systems via graphs and decompositions");
  add_run_options(count, count_opts);

  CountOptions merge_opts;
  std::vector<std::string> merge_inputs;
  std::string merge_out;
  auto* merge = app.add_subcommand("merge", "Merge partial ledgers of one run and report");
  merge->add_option("ledgers", merge_inputs, "Ledger files")->required();
  merge->add_option("--out", merge_out, "Write the merged ledger here");
  merge->add_option("--report", merge_opts.report, "Write the text report here as well");
  merge->add_option("--csv", merge_opts.csv, "Write per-unit partial sums as CSV");
  merge->add_option("--spectrum", merge_opts.run.spectrum, "JSON automorphism spectrum for resolving classes");
  merge->add_option("--config", merge_opts.config, "JSON file with default option values");

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Compare defining sets on random graphs");
  estimate->add_option("--v", est.v, "Order of the triple systems");
  estimate->add_option("--samples", est.samples, "Random graphs per degree sequence");
  estimate->add_option("--candidate", est.candidates, "w:pattern[:samples]; repeatable (default: w=4,5,6)");
  estimate->add_option("--seed", est.seed, "Random seed");
  estimate->add_option("--switches", est.switches, "Edge switches per random graph (default 20 per edge)");
  estimate->add_option("--threads", est.threads, "Worker threads");
  estimate->add_option("--csv", est.csv, "Write the table as CSV");
  estimate->add_option("--json", est.json_out, "Write the report as JSON");
  estimate->add_option("--config", est.config, "JSON file with default option values");

  GraphsOptions gr;
  auto* graphs = app.add_subcommand("graphs", "Generate graphs up to isomorphism as graph6");
  graphs->add_option("--sequence", gr.sequence, "Exact degree sequence, e.g. \"3^4 5^12\"");
  graphs->add_option("--n", gr.n, "Number of vertices (with --edges)");
  graphs->add_option("--edges", gr.edges, "Number of edges");
  graphs->add_option("--min-degree", gr.min_degree, "Smallest degree");
  graphs->add_option("--max-degree", gr.max_degree, "Largest degree");
  graphs->add_option("--part", gr.part, "Only slice r of m (r/m)");
  graphs->add_option("--out", gr.out, "graph6 output file (default stdout)");
  graphs->add_flag("--count-only", gr.count_only, "Print only the number of graphs");
  graphs->add_flag("--with-aut", gr.with_aut, "Append |Aut(G)| to every line");
  graphs->add_option("--config", gr.config, "JSON file with default option values");

  ClassifyOptions cl;
  auto* classify = app.add_subcommand("classify", "Classify STS(v) for v <= 15");
  classify->add_option("--v", cl.v, "Order");
  classify->add_option("--catalogue", cl.catalogue, "Write representatives here");
  classify->add_option("--spectrum", cl.spectrum, "Write the automorphism spectrum here (JSON)");
  classify->add_flag("--direct", cl.direct, "Also count labeled systems directly by exact cover (v <= 13)");
  classify->add_option("--config", cl.config, "JSON file with default option values");

  VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "Validate ledgers and reference constants");
  verify->add_option("--ledger", ver.ledgers, "Completed ledger; repeat for a cross-pattern check");
  verify->add_option("--spectrum", ver.spectrum, "Nontrivial automorphism spectrum (JSON)");
  verify->add_option("--reference", ver.reference, "Reference-constant file to check");
  verify->add_option("--v", ver.v, "With 21: check the built-in reference constants");
  verify->add_option("--config", ver.config, "JSON file with default option values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*count) return cmd_count(*count, count_opts);
    if (*merge) return cmd_merge(*merge, merge_opts, merge_inputs, merge_out);
    if (*estimate) return cmd_estimate(*estimate, est);
    if (*graphs) return cmd_graphs(*graphs, gr);
    if (*classify) return cmd_classify(*classify, cl);
    if (*verify) return cmd_verify(*verify, ver);
  } catch (const sts::ValidationError& e) {
    std::cerr << "FAIL validation: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
