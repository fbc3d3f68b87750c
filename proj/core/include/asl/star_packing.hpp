#pragma once

#include <cstdint>
#include <vector>

#include "asl/class_spec.hpp"

namespace asl {

struct PackedStar {
  int32_t center = 0;
  std::vector<int32_t> leaves;  // ascending
  Support edges;                // edge coordinates, ascending
};

// Greedy construction of edge-disjoint s-stars in the complete graph on p
// vertices: repeatedly center a star at a vertex whose current degree leaves
// at least s unused incident edges. The resulting count is at least
// p(p-1-s)/(2s).
std::vector<PackedStar> greedy_star_packing(int32_t p, int32_t s);

// The constructive lower bound p(p-1-s)/(2s) on N(p, s).
double star_packing_bound(int32_t p, int32_t s);

}  // namespace asl
