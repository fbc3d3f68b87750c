#include "asl/star_packing.hpp"

#include <algorithm>
#include <stdexcept>

namespace asl {

double star_packing_bound(int32_t p, int32_t s) {
  return static_cast<double>(p) * (p - 1 - s) / (2.0 * s);
}

std::vector<PackedStar> greedy_star_packing(int32_t p, int32_t s) {
  if (s < 2 || s > p - 1) throw std::invalid_argument("greedy_star_packing: need 2 <= s <= p-1");
  std::vector<std::vector<int8_t>> used(p + 1, std::vector<int8_t>(p + 1, 0));
  std::vector<int32_t> degree(p + 1, 0);
  std::vector<PackedStar> out;
  for (;;) {
    // lowest-index vertex that can still host a star (>= s unused edges)
    int32_t center = 0;
    for (int32_t v = 1; v <= p; ++v)
      if (degree[v] <= p - 1 - s) {
        center = v;
        break;
      }
    if (center == 0) break;
    PackedStar star;
    star.center = center;
    for (int32_t w = 1; w <= p && static_cast<int32_t>(star.leaves.size()) < s; ++w) {
      if (w == center || used[center][w]) continue;
      star.leaves.push_back(w);
    }
    for (int32_t w : star.leaves) {
      used[center][w] = used[w][center] = 1;
      ++degree[center];
      ++degree[w];
      star.edges.push_back(edge_index(p, center, w));
    }
    std::sort(star.edges.begin(), star.edges.end());
    out.push_back(std::move(star));
  }
  return out;
}

}  // namespace asl
