#include "sts/classify.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "sts/canon.hpp"
#include "sts/exact_cover.hpp"

namespace sts {

namespace {

void check_order(int v, int limit, const char* what) {
  if (!is_admissible_order(v)) throw std::invalid_argument("STS(" + std::to_string(v) + ") does not exist");
  if (v > limit)
    throw std::invalid_argument(std::string(what) + " is limited to v <= " + std::to_string(limit) + " (got " +
                                std::to_string(v) + ")");
}

int pair_index(int v, int a, int b) {
  if (a > b) std::swap(a, b);
  return a * v + b;
}

// Number of Pasch configurations through each point. Every pair of
// intersecting blocks {x,a,b}, {x,c,d} lies in at most two Pasch
// configurations, closed by blocks {a,c,e},{b,d,e} or {a,d,e},{b,c,e}; each
// configuration is met once per pair of its four blocks.
std::vector<int> pasch_counts(const TripleSystem& s) {
  const int v = s.order();
  std::vector<int> count(v, 0);
  std::vector<std::vector<Block>> through(v);
  for (const auto& b : s.blocks())
    for (int p : b) through[p].push_back(b);
  auto others = [](const Block& b, int x) {
    std::array<int, 2> o{};
    int k = 0;
    for (int p : b)
      if (p != x) o[k++] = p;
    return o;
  };
  for (int x = 0; x < v; ++x) {
    const auto& bl = through[x];
    for (std::size_t i = 0; i < bl.size(); ++i)
      for (std::size_t j = i + 1; j < bl.size(); ++j) {
        auto [a, b] = others(bl[i], x);
        auto [c, d] = others(bl[j], x);
        for (int flip = 0; flip < 2; ++flip) {
          int c1 = flip ? d : c, d1 = flip ? c : d;
          auto e1 = s.third_point(a, c1), e2 = s.third_point(b, d1);
          if (e1 && e2 && *e1 == *e2) {
            // Each configuration is found 6 times; count per point and divide later.
            for (int p : {x, a, b, c, d, *e1}) ++count[p];
          }
        }
      }
  }
  for (int& c : count) c /= 6;
  return count;
}

// Blocks through point 0 are {0, 2i+1, 2i+2}.
std::vector<Block> standard_star(int v) {
  std::vector<Block> star;
  for (int i = 0; 2 * i + 2 < v; ++i) star.push_back({0, 2 * i + 1, 2 * i + 2});
  return star;
}

// Cover instance for completing a partial system: one element per uncovered
// pair, one candidate per triangle of uncovered pairs.
struct Completion {
  CoverInstance instance;
  std::vector<Block> triangles;
};

Completion completion_problem(int v, const std::vector<Block>& fixed) {
  std::vector<char> covered(v * v, 0);
  for (const auto& b : fixed) {
    covered[pair_index(v, b[0], b[1])] = 1;
    covered[pair_index(v, b[0], b[2])] = 1;
    covered[pair_index(v, b[1], b[2])] = 1;
  }
  std::vector<int> element(v * v, -1);
  Completion c;
  int next = 0;
  for (int a = 0; a < v; ++a)
    for (int b = a + 1; b < v; ++b)
      if (!covered[pair_index(v, a, b)]) element[pair_index(v, a, b)] = next++;
  c.instance.universe_size = next;
  for (int a = 0; a < v; ++a)
    for (int b = a + 1; b < v; ++b) {
      int ab = element[pair_index(v, a, b)];
      if (ab < 0) continue;
      for (int d = b + 1; d < v; ++d) {
        int ad = element[pair_index(v, a, d)], bd = element[pair_index(v, b, d)];
        if (ad < 0 || bd < 0) continue;
        c.instance.candidates.push_back({ab, ad, bd});
        c.triangles.push_back({a, b, d});
      }
    }
  c.instance.validate();
  return c;
}

// Partitions of n into parts >= 2, parts nonincreasing.
void even_cycle_types(int n, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(n, max_part); p >= 2; --p) {
    cur.push_back(p);
    even_cycle_types(n - p, p, cur, out);
    cur.pop_back();
  }
}

// Blocks through point 1 (besides {0,1,2}) whose union with the star of point
// 0 has the given cycle type on the points 3..v-1.
std::vector<Block> second_star(const std::vector<int>& cycle_type) {
  std::vector<Block> blocks;
  int pair = 1;  // star pairs are {2i+1, 2i+2}; pair 0 is {1,2}
  for (int k : cycle_type) {
    for (int i = 0; i < k; ++i) {
      int b_i = 2 * (pair + i) + 2;
      int a_next = 2 * (pair + (i + 1) % k) + 1;
      blocks.push_back({1, std::min(b_i, a_next), std::max(b_i, a_next)});
    }
    pair += k;
  }
  return blocks;
}

}  // namespace

CanonicalSystem canonical_system(const TripleSystem& sts) {
  if (!sts.is_complete()) throw std::invalid_argument("canonical_system needs a complete system");
  const int v = sts.order();
  const int b = static_cast<int>(sts.block_count());
  if (v + b > kMaxCanonOrder) throw std::invalid_argument("system too large for the canonical labeler");
  std::vector<std::uint64_t> rows(v + b, 0);
  for (int i = 0; i < b; ++i)
    for (int p : sts.blocks()[i]) {
      rows[p] |= std::uint64_t{1} << (v + i);
      rows[v + i] |= std::uint64_t{1} << p;
    }
  auto pasch = pasch_counts(sts);
  // Point colours are Pasch counts; block colours sit above every point colour
  // and record the multiset of their points' counts.
  const int span = *std::max_element(pasch.begin(), pasch.end()) + 1;
  std::vector<int> colours(v + b);
  for (int p = 0; p < v; ++p) colours[p] = pasch[p];
  for (int i = 0; i < b; ++i) {
    std::array<int, 3> c{};
    for (int k = 0; k < 3; ++k) c[k] = pasch[sts.blocks()[i][k]];
    std::sort(c.begin(), c.end());
    colours[v + i] = span + (c[0] * span + c[1]) * span + c[2];
  }
  CanonResult r = canonical_labeling(rows, colours);
  CanonicalSystem out;
  std::vector<Point> perm(r.perm.begin(), r.perm.begin() + v);
  out.system = sts.relabeled(perm);
  out.aut_order = r.aut_order();
  out.key = std::move(r.rows);
  return out;
}

ClassifiedCatalogue classify_all(int v) {
  check_order(v, kMaxClassifyOrder, "classify_all");
  ClassifiedCatalogue cat;
  cat.v = v;
  std::map<std::vector<std::uint64_t>, CanonicalSystem> classes;
  auto record = [&](std::vector<Block> blocks) {
    CanonicalSystem c = canonical_system(TripleSystem(v, std::move(blocks)));
    classes.try_emplace(c.key, std::move(c));
    ++cat.completions_examined;
  };
  if (v <= 3) {
    record(v == 3 ? std::vector<Block>{{0, 1, 2}} : std::vector<Block>{});
  } else {
    std::vector<std::vector<int>> types;
    std::vector<int> cur;
    even_cycle_types((v - 3) / 2, (v - 3) / 2, cur, types);
    for (const auto& type : types) {
      std::vector<Block> fixed = standard_star(v);
      for (const auto& blk : second_star(type)) fixed.push_back(blk);
      Completion comp = completion_problem(v, fixed);
      enumerate_covers(comp.instance, [&](std::span<const int> chosen) {
        std::vector<Block> blocks = fixed;
        for (int i : chosen) blocks.push_back(comp.triangles[i]);
        record(std::move(blocks));
        return true;
      });
    }
  }
  for (auto& [key, c] : classes) {
    cat.representatives.push_back(c.system);
    cat.aut_orders.push_back(c.aut_order);
    if (!c.aut_order.fits_ulong_p()) throw std::overflow_error("automorphism group order too large");
    cat.spectrum.add(c.aut_order.get_ui());
  }
  Rational sum = cat.spectrum.reciprocal_sum() * Rational(factorial(static_cast<unsigned>(v)));
  sum.canonicalize();
  if (!is_integer(sum)) throw ValidationError("orbit-stabilizer sum is not an integer");
  cat.labeled_count = sum.get_num();
  return cat;
}

BigInt labeled_count_direct(int v) {
  check_order(v, kMaxDirectCountOrder, "labeled_count_direct");
  if (v <= 3) return 1;
  Completion comp = completion_problem(v, standard_star(v));
  BigInt stars = 1;  // (v-2)!!
  for (int k = v - 2; k > 1; k -= 2) stars *= k;
  return stars * count_covers_parallel(comp.instance);
}

BigInt labeled_count_raw(int v) {
  check_order(v, kMaxDirectCountOrder, "labeled_count_raw");
  if (v <= 1) return 1;
  return count_covers(completion_problem(v, {}).instance);
}

TripleSystem construct_sts(int v, std::uint64_t seed) {
  if (!is_admissible_order(v)) throw std::invalid_argument("STS(" + std::to_string(v) + ") does not exist");
  if (v <= 1) return TripleSystem(v, {});
  std::mt19937_64 rng(seed);
  // third[a*v+b] = c when {a,b,c} is a block, -1 otherwise.
  std::vector<int> third(v * v, -1);
  std::vector<int> live_degree(v, v - 1);  // uncovered pairs at each point
  const int target = v * (v - 1) / 6;
  int blocks = 0;
  auto set_block = [&](int a, int b, int c, bool add) {
    int va = add ? 1 : -1;
    third[a * v + b] = third[b * v + a] = add ? c : -1;
    third[a * v + c] = third[c * v + a] = add ? b : -1;
    third[b * v + c] = third[c * v + b] = add ? a : -1;
    live_degree[a] -= 2 * va;
    live_degree[b] -= 2 * va;
    live_degree[c] -= 2 * va;
    blocks += va;
  };
  std::vector<int> live_points, partners;
  while (blocks < target) {
    live_points.clear();
    for (int p = 0; p < v; ++p)
      if (live_degree[p] > 0) live_points.push_back(p);
    int x = live_points[rng() % live_points.size()];
    partners.clear();
    for (int p = 0; p < v; ++p)
      if (p != x && third[x * v + p] < 0) partners.push_back(p);
    int i = static_cast<int>(rng() % partners.size());
    int j = static_cast<int>(rng() % (partners.size() - 1));
    if (j >= i) ++j;
    int y = partners[i], z = partners[j];
    int w = third[y * v + z];
    if (w >= 0) set_block(y, z, w, false);
    set_block(x, y, z, true);
  }
  std::vector<Block> out;
  for (int a = 0; a < v; ++a)
    for (int b = a + 1; b < v; ++b) {
      int c = third[a * v + b];
      if (c > b) out.push_back({a, b, c});
    }
  return TripleSystem(v, std::move(out));
}

void write_catalogue(std::ostream& out, const std::vector<TripleSystem>& systems) {
  for (const auto& s : systems) {
    out << s.order() << ':';
    for (const auto& b : s.blocks()) out << ' ' << b[0] << ',' << b[1] << ',' << b[2];
    out << '\n';
  }
}

std::vector<TripleSystem> read_catalogue(std::istream& in) {
  std::vector<TripleSystem> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("catalogue line " + std::to_string(line_no) + ": missing ':'");
    int v = std::stoi(line.substr(0, colon));
    std::istringstream ss(line.substr(colon + 1));
    std::vector<Block> blocks;
    std::string tok;
    while (ss >> tok) {
      Block b{};
      char c1 = 0, c2 = 0;
      std::istringstream ts(tok);
      if (!(ts >> b[0] >> c1 >> b[1] >> c2 >> b[2]) || c1 != ',' || c2 != ',')
        throw std::invalid_argument("catalogue line " + std::to_string(line_no) + ": bad block '" + tok + "'");
      blocks.push_back(b);
    }
    out.emplace_back(v, std::move(blocks));
  }
  return out;
}

}  // namespace sts
