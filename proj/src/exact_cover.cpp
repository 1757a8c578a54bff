#include "sts/exact_cover.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace sts {

void CoverInstance::validate() {
  if (universe_size < 0) throw std::invalid_argument("negative universe size");
  for (auto& c : candidates) {
    if (c.empty()) throw std::invalid_argument("empty candidate set");
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end()) throw std::invalid_argument("candidate repeats an element");
    if (c.front() < 0 || c.back() >= universe_size) throw std::invalid_argument("candidate element outside universe");
  }
}

bool CoverInstance::has_duplicates() const {
  std::set<std::vector<int>> seen;
  for (auto c : candidates) {
    std::sort(c.begin(), c.end());
    if (!seen.insert(std::move(c)).second) return true;
  }
  return false;
}

// Node 0 is the root; nodes 1..columns_ are column headers; the rest are
// candidate entries.
DancingLinks::DancingLinks(const CoverInstance& inst) : columns_(inst.universe_size) {
  std::size_t total = 1 + static_cast<std::size_t>(columns_);
  for (const auto& c : inst.candidates) total += c.size();
  left_.resize(total);
  right_.resize(total);
  up_.resize(total);
  down_.resize(total);
  col_.assign(total, 0);
  row_.assign(total, -1);
  size_.assign(columns_ + 1, 0);
  committed_column_.assign(columns_ + 1, 0);
  for (int i = 0; i <= columns_; ++i) {
    left_[i] = i == 0 ? columns_ : i - 1;
    right_[i] = i == columns_ ? 0 : i + 1;
    up_[i] = down_[i] = i;
    col_[i] = i;
  }
  int next = columns_ + 1;
  row_head_.assign(inst.candidates.size(), -1);
  for (std::size_t r = 0; r < inst.candidates.size(); ++r) {
    int first = -1;
    for (int e : inst.candidates[r]) {
      if (e < 0 || e >= columns_) throw std::invalid_argument("candidate element outside universe");
      int c = e + 1;
      int x = next++;
      col_[x] = c;
      row_[x] = static_cast<int>(r);
      up_[x] = up_[c];
      down_[x] = c;
      down_[up_[c]] = x;
      up_[c] = x;
      ++size_[c];
      if (first < 0) {
        first = x;
        left_[x] = right_[x] = x;
      } else {
        left_[x] = left_[first];
        right_[x] = first;
        right_[left_[first]] = x;
        left_[first] = x;
      }
    }
    row_head_[r] = first;
  }
}

int DancingLinks::choose_column(Branching branching) const {
  if (branching == Branching::FirstUncovered) return right_[0];
  int best = right_[0];
  int best_size = size_[best];
  for (int c = right_[best]; c != 0 && best_size > 1; c = right_[c])
    if (size_[c] < best_size) {
      best = c;
      best_size = size_[c];
    }
  return best;
}

void DancingLinks::cover(int c) {
  right_[left_[c]] = right_[c];
  left_[right_[c]] = left_[c];
  for (int i = down_[c]; i != c; i = down_[i])
    for (int j = right_[i]; j != i; j = right_[j]) {
      down_[up_[j]] = down_[j];
      up_[down_[j]] = up_[j];
      --size_[col_[j]];
    }
}

void DancingLinks::uncover(int c) {
  for (int i = up_[c]; i != c; i = up_[i])
    for (int j = left_[i]; j != i; j = left_[j]) {
      ++size_[col_[j]];
      down_[up_[j]] = j;
      up_[down_[j]] = j;
    }
  right_[left_[c]] = c;
  left_[right_[c]] = c;
}

void DancingLinks::select_row(int node) {
  for (int j = right_[node]; j != node; j = right_[j]) cover(col_[j]);
}

void DancingLinks::unselect_row(int node) {
  for (int j = left_[node]; j != node; j = left_[j]) uncover(col_[j]);
}

std::uint64_t DancingLinks::count_rec(Branching branching) {
  if (right_[0] == 0) return 1;
  int c = choose_column(branching);
  if (size_[c] == 0) return 0;
  std::uint64_t total = 0;
  cover(c);
  for (int r = down_[c]; r != c; r = down_[r]) {
    select_row(r);
    total += count_rec(branching);
    unselect_row(r);
  }
  uncover(c);
  return total;
}

std::uint64_t DancingLinks::count(Branching branching) { return count_rec(branching); }

bool DancingLinks::enumerate_rec(const std::function<bool(std::span<const int>)>& visitor, Branching branching,
                                 std::uint64_t& visits) {
  if (right_[0] == 0) {
    std::vector<int> chosen = stack_;
    std::sort(chosen.begin(), chosen.end());
    ++visits;
    return visitor(chosen);
  }
  int c = choose_column(branching);
  if (size_[c] == 0) return true;
  bool keep_going = true;
  cover(c);
  for (int r = down_[c]; r != c && keep_going; r = down_[r]) {
    select_row(r);
    stack_.push_back(row_[r]);
    keep_going = enumerate_rec(visitor, branching, visits);
    stack_.pop_back();
    unselect_row(r);
  }
  uncover(c);
  return keep_going;
}

EnumerationResult DancingLinks::enumerate(const std::function<bool(std::span<const int>)>& visitor,
                                          Branching branching) {
  EnumerationResult res;
  res.completed = enumerate_rec(visitor, branching, res.visits);
  return res;
}

bool DancingLinks::commit(int row) {
  int head = row_head_.at(row);
  if (head < 0) return false;
  // Every column of the row must still be live and the row itself present.
  int j = head;
  do {
    if (committed_column_[col_[j]]) return false;
    j = right_[j];
  } while (j != head);
  // The row may have been removed by covering a column of an earlier commit.
  int c = col_[head];
  bool present = false;
  for (int i = down_[c]; i != c; i = down_[i])
    if (i == head) present = true;
  if (!present) return false;
  j = head;
  do {
    committed_column_[col_[j]] = 1;
    cover(col_[j]);
    j = right_[j];
  } while (j != head);
  stack_.push_back(row);
  return true;
}

void DancingLinks::prefixes_rec(int depth, Branching branching, std::vector<std::vector<int>>& out) {
  if (depth == 0 || right_[0] == 0) {
    out.push_back(stack_);
    return;
  }
  int c = choose_column(branching);
  if (size_[c] == 0) return;
  cover(c);
  for (int r = down_[c]; r != c; r = down_[r]) {
    select_row(r);
    stack_.push_back(row_[r]);
    prefixes_rec(depth - 1, branching, out);
    stack_.pop_back();
    unselect_row(r);
  }
  uncover(c);
}

std::vector<std::vector<int>> DancingLinks::prefixes(int depth, Branching branching) {
  std::vector<std::vector<int>> out;
  prefixes_rec(depth, branching, out);
  return out;
}

BigInt count_covers(const CoverInstance& inst, Branching branching) {
  DancingLinks dlx(inst);
  return from_u64(dlx.count(branching));
}

BigInt count_covers_parallel(const CoverInstance& inst, int threads, Branching branching) {
  if (threads <= 0) threads = omp_get_max_threads();
  // Deepen the split until there is enough work to balance, bounded so the
  // serial expansion stays cheap.
  DancingLinks root(inst);
  std::vector<std::vector<int>> work;
  const std::size_t target = static_cast<std::size_t>(threads) * 16;
  for (int depth = 1; depth <= 6; ++depth) {
    work = root.prefixes(depth, branching);
    if (work.size() >= target) break;
  }
  if (work.empty()) return 0;
  std::vector<std::uint64_t> partial(work.size(), 0);
  const long jobs = static_cast<long>(work.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long i = 0; i < jobs; ++i) {
    DancingLinks local(inst);
    bool ok = true;
    for (int row : work[i]) ok = ok && local.commit(row);
    partial[i] = ok ? local.count(branching) : 0;
  }
  BigInt total = 0;
  for (auto x : partial) total += from_u64(x);
  return total;
}

EnumerationResult enumerate_covers(const CoverInstance& inst, const std::function<bool(std::span<const int>)>& visitor,
                                   Branching branching) {
  DancingLinks dlx(inst);
  return dlx.enumerate(visitor, branching);
}

CoverInstance read_cover_instance(std::istream& in) {
  CoverInstance inst;
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw std::invalid_argument("cover instance: missing header");
  std::size_t count = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> inst.universe_size >> count)) throw std::invalid_argument("cover instance: malformed header");
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (!next_line()) throw std::invalid_argument("cover instance: fewer candidates than declared");
    std::istringstream ls(line);
    std::vector<int> c;
    int x;
    while (ls >> x) c.push_back(x);
    inst.candidates.push_back(std::move(c));
  }
  inst.validate();
  return inst;
}

void write_cover_instance(std::ostream& out, const CoverInstance& inst) {
  out << inst.universe_size << ' ' << inst.candidates.size() << '\n';
  for (const auto& c : inst.candidates) {
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? " " : "") << c[i];
    out << '\n';
  }
}

}  // namespace sts
