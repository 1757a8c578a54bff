#include "sts/graph6.hpp"

#include <stdexcept>

namespace sts {

std::string to_graph6(const DenseGraph& g) {
  const int n = g.order();
  std::string out;
  if (n <= 62) {
    out.push_back(static_cast<char>(n + 63));
  } else {
    out.push_back(126);
    out.push_back(static_cast<char>(((n >> 12) & 63) + 63));
    out.push_back(static_cast<char>(((n >> 6) & 63) + 63));
    out.push_back(static_cast<char>((n & 63) + 63));
  }
  // Upper triangle, column by column: (0,1),(0,2),(1,2),(0,3),...
  int acc = 0, bits = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.has_edge(i, j) ? 1 : 0);
      if (++bits == 6) {
        out.push_back(static_cast<char>(acc + 63));
        acc = bits = 0;
      }
    }
  if (bits > 0) out.push_back(static_cast<char>((acc << (6 - bits)) + 63));
  return out;
}

DenseGraph from_graph6(std::string_view text) {
  constexpr std::string_view header = ">>graph6<<";
  if (text.substr(0, header.size()) == header) text.remove_prefix(header.size());
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty graph6 string");
  auto value = [&](std::size_t i) {
    int c = static_cast<unsigned char>(text[i]);
    if (c < 63 || c > 126) throw std::invalid_argument("invalid graph6 character");
    return c - 63;
  };
  std::size_t pos = 0;
  int n = 0;
  if (text[0] != 126) {
    n = value(0);
    pos = 1;
  } else {
    if (text.size() < 4 || text[1] == 126) throw std::invalid_argument("unsupported graph6 size prefix");
    n = (value(1) << 12) | (value(2) << 6) | value(3);
    pos = 4;
  }
  if (n > kMaxGraphOrder) throw std::invalid_argument("graph6 order exceeds supported maximum");
  const long bits_needed = static_cast<long>(n) * (n - 1) / 2;
  const long bytes_needed = (bits_needed + 5) / 6;
  if (static_cast<long>(text.size() - pos) != bytes_needed) throw std::invalid_argument("graph6 length mismatch");
  DenseGraph g(n);
  long k = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i, ++k) {
      int byte = value(pos + static_cast<std::size_t>(k / 6));
      if ((byte >> (5 - k % 6)) & 1) g.add_edge(i, j);
    }
  return g;
}

}  // namespace sts
