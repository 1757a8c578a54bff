#include "sts/reference.hpp"

#include <fstream>
#include <sstream>

namespace sts {

using nlohmann::json;

namespace {

ReferenceData build_sts21() {
  ReferenceData r;
  r.v = 21;
  r.w = 5;
  r.pattern = "012,034";
  r.n_prime = 945;
  r.partial_sums = {
      {"1^2 5^14", "5^14", parse_bigint("133088588244979214201168855040000")},
      {"1^2 5^14", "4^2 5^12", parse_bigint("2538696865871668928235196907520000")},
      {"1^1 3^2 5^13", "2^1 3^1 5^13", parse_bigint("10154787463486675712940787630080000")},
      {"1^1 3^2 5^13", "3^2 4^1 5^12", parse_bigint("77792298507007219219438529150976000")},
      {"3^4 5^12", "3^4 5^12", parse_bigint("665333309624296811889899926978560000")},
  };
  r.labeled_total = parse_bigint("755952181048907354964715609522176000");
  const std::pair<std::uint64_t, std::uint64_t> spectrum[] = {
      {2, 60588267}, {3, 1732131}, {4, 11467}, {5, 1772}, {6, 2379}, {7, 66},  {8, 222},  {9, 109},
      {12, 85},      {14, 14},     {16, 12},   {18, 33},  {21, 10},  {24, 19}, {27, 3},   {36, 5},
      {42, 7},       {48, 2},      {54, 1},    {72, 5},   {108, 1},  {126, 2}, {144, 1},  {294, 1},
      {504, 1},      {882, 1},     {1008, 1},
  };
  for (const auto& [order, count] : spectrum) r.nontrivial.add(order, from_u64(count));
  r.graph_class_totals = {
      {"5^14", 3459386},
      {"4^2 5^12", 156152315},
      {"2^1 3^1 5^13", 771306408},
      {"3^2 4^1 5^12", parse_bigint("9955174055")},
      {"3^4 5^12", parse_bigint("53738652436")},
  };
  r.occurrence_counts = {{"w=4 {012}", 1260}, {"w=5 {012,034}", 945}};
  r.expected_trivial_classes = parse_bigint("14796207455537154");
  r.expected_total_classes = parse_bigint("14796207517873771");
  return r;
}

json map_to_json(const std::map<std::string, BigInt>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = to_string(v);
  return j;
}

std::map<std::string, BigInt> map_from_json(const json& j) {
  std::map<std::string, BigInt> m;
  for (const auto& [k, v] : j.items()) m[k] = parse_bigint(v.get<std::string>());
  return m;
}

}  // namespace

json ReferenceData::to_json() const {
  json j;
  j["format"] = "sts-reference-constants";
  j["format_version"] = 1;
  j["note"] = "External input: published values, not recomputed by this toolkit.";
  j["v"] = v;
  j["w"] = w;
  j["pattern"] = pattern;
  j["n_prime"] = to_string(n_prime);
  json rows = json::array();
  for (const auto& p : partial_sums) rows.push_back({{"s1", p.s1}, {"s2", p.s2}, {"partial_sum", to_string(p.value)}});
  j["partial_sums"] = rows;
  j["labeled_total"] = to_string(labeled_total);
  j["nontrivial_spectrum"] = nontrivial.to_json();
  j["graph_class_totals"] = map_to_json(graph_class_totals);
  j["occurrence_counts"] = map_to_json(occurrence_counts);
  j["expected_trivial_classes"] = to_string(expected_trivial_classes);
  j["expected_total_classes"] = to_string(expected_total_classes);
  return j;
}

ReferenceData ReferenceData::from_json(const json& j) {
  if (j.value("format", std::string{}) != "sts-reference-constants")
    throw ValidationError("not a reference-constant file");
  if (j.value("format_version", 0) != 1) throw ValidationError("unsupported reference-constant file version");
  ReferenceData r;
  try {
    r.v = j.at("v").get<int>();
    r.w = j.at("w").get<int>();
    r.pattern = j.at("pattern").get<std::string>();
    r.n_prime = parse_bigint(j.at("n_prime").get<std::string>());
    for (const auto& row : j.at("partial_sums"))
      r.partial_sums.push_back({row.at("s1").get<std::string>(), row.at("s2").get<std::string>(),
                                parse_bigint(row.at("partial_sum").get<std::string>())});
    r.labeled_total = parse_bigint(j.at("labeled_total").get<std::string>());
    r.nontrivial = AutSpectrum::from_json(j.at("nontrivial_spectrum"));
    r.graph_class_totals = map_from_json(j.at("graph_class_totals"));
    r.occurrence_counts = map_from_json(j.at("occurrence_counts"));
    r.expected_trivial_classes = parse_bigint(j.at("expected_trivial_classes").get<std::string>());
    r.expected_total_classes = parse_bigint(j.at("expected_total_classes").get<std::string>());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed reference-constant file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("malformed reference-constant file: ") + e.what());
  }
  return r;
}

const ReferenceData& sts21_reference() {
  static const ReferenceData data = build_sts21();
  return data;
}

ReferenceData load_reference(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("malformed reference-constant file " + path + ": " + e.what());
  }
  return ReferenceData::from_json(j);
}

ReferenceCheck check_reference(const ReferenceData& ref) {
  ReferenceCheck c;
  BigInt sum = 0;
  for (const auto& p : ref.partial_sums) sum += p.value;
  c.partial_sums_add_up = sum == ref.labeled_total;
  c.resolution = resolve_trivial_classes(ref.labeled_total, ref.nontrivial, ref.v);
  c.trivial_matches = c.resolution.trivial_classes == ref.expected_trivial_classes;
  c.total_matches = c.resolution.total_classes == ref.expected_total_classes;
  return c;
}

std::string ReferenceCheck::text() const {
  std::ostringstream os;
  os << "partial sums add up to the labeled total: " << (partial_sums_add_up ? "yes" : "NO") << '\n'
     << "classes with trivial group: " << with_commas(resolution.trivial_classes)
     << (trivial_matches ? " (matches)" : " (MISMATCH)") << '\n'
     << "total classes: " << with_commas(resolution.total_classes) << (total_matches ? " (matches)" : " (MISMATCH)")
     << '\n';
  return os.str();
}

}  // namespace sts
