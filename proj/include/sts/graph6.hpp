#pragma once

// graph6 text encoding for undirected simple graphs (orders up to 62 use the
// single-byte size prefix; larger orders are encoded for completeness).

#include <string>
#include <string_view>

#include "sts/model.hpp"

namespace sts {

std::string to_graph6(const DenseGraph& g);
// Accepts an optional ">>graph6<<" header and trailing newline.
DenseGraph from_graph6(std::string_view text);

}  // namespace sts
