#include "asl/nonadaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "asl/errors.hpp"

namespace asl {

namespace {

// Sum in ascending index order so production and brute-force oracles add the
// same values in the same order.
double support_sum(const Support& s, const std::vector<double>& y) {
  double total = 0.0;
  for (Coord i : s) total += y[i - 1];
  return total;
}

bool better(double cand_sum, const Support& cand, double best_sum, const Support& best) {
  if (cand_sum != best_sum) return cand_sum > best_sum;
  return cand < best;  // lexicographically smallest canonical support wins ties
}

Support ml_sset(const ClassSpec& spec, const std::vector<double>& y) {
  std::vector<Coord> idx(spec.n);
  std::iota(idx.begin(), idx.end(), 1);
  std::stable_sort(idx.begin(), idx.end(), [&](Coord a, Coord b) {
    if (y[a - 1] != y[b - 1]) return y[a - 1] > y[b - 1];
    return a < b;
  });
  Support out(idx.begin(), idx.begin() + spec.s);
  std::sort(out.begin(), out.end());
  return out;
}

Support ml_interval(const ClassSpec& spec, const std::vector<double>& y) {
  Support best, cur(spec.s);
  double best_sum = -std::numeric_limits<double>::infinity();
  for (int32_t a = 1; a + spec.s - 1 <= spec.n; ++a) {
    for (int32_t j = 0; j < spec.s; ++j) cur[j] = a + j;
    const double s = support_sum(cur, y);
    if (best.empty() || better(s, cur, best_sum, best)) {
      best = cur;
      best_sum = s;
    }
  }
  return best;
}

// k best non-overlapping length-s windows by dynamic programming over suffix
// starts; reconstruction prefers placing a tile as early as possible, which
// yields the lexicographically smallest support among ties.
Support ml_union_intervals(const ClassSpec& spec, const std::vector<double>& y) {
  const int32_t n = spec.n, s = spec.s, k = spec.k;
  const int32_t lim = n - s + 1;
  std::vector<double> w(lim + 1, 0.0);
  for (int32_t a = 1; a <= lim; ++a) {
    double acc = 0.0;
    for (int32_t j = 0; j < s; ++j) acc += y[a + j - 1];
    w[a] = acc;
  }
  const double ninf = -std::numeric_limits<double>::infinity();
  // h[j][t]: best total of j tiles with starts >= t
  std::vector<std::vector<double>> h(k + 1, std::vector<double>(n + s + 2, ninf));
  for (int32_t t = 1; t <= n + s + 1; ++t) h[0][t] = 0.0;
  for (int32_t j = 1; j <= k; ++j)
    for (int32_t t = n + 1; t >= 1; --t) {
      double best = (t + 1 <= n + 1) ? h[j][t + 1] : ninf;
      if (t <= lim && h[j - 1][t + s] > ninf) best = std::max(best, w[t] + h[j - 1][t + s]);
      h[j][t] = best;
    }
  Support out;
  int32_t t = 1;
  for (int32_t j = k; j >= 1; --j) {
    while (!(t <= lim && h[j][t] == w[t] + h[j - 1][t + s])) ++t;
    for (int32_t x = 0; x < s; ++x) out.push_back(t + x);
    t += s;
  }
  return out;
}

Support ml_star(const ClassSpec& spec, const std::vector<double>& y) {
  const int32_t p = spec.p, s = spec.s;
  Support best;
  double best_sum = -std::numeric_limits<double>::infinity();
  for (int32_t c = 1; c <= p; ++c) {
    // top-s incident edges by value, index ascending on ties
    std::vector<Coord> edges;
    edges.reserve(p - 1);
    for (int32_t w = 1; w <= p; ++w)
      if (w != c) edges.push_back(edge_index(p, c, w));
    std::stable_sort(edges.begin(), edges.end(), [&](Coord a, Coord b) {
      if (y[a - 1] != y[b - 1]) return y[a - 1] > y[b - 1];
      return a < b;
    });
    Support cand(edges.begin(), edges.begin() + s);
    std::sort(cand.begin(), cand.end());
    const double sum = support_sum(cand, y);
    if (best.empty() || better(sum, cand, best_sum, best)) {
      best = cand;
      best_sum = sum;
    }
  }
  return best;
}

Support ml_brute_force(const ClassSpec& spec, const std::vector<double>& y, uint64_t cap) {
  std::vector<Support> members;
  try {
    members = enumerate_class(spec, cap);
  } catch (const RefusalError&) {
    throw RefusalError("ml_estimate: " + spec.to_string() +
                       " has no exact algorithm and exceeds the brute-force cap");
  }
  Support best;
  double best_sum = -std::numeric_limits<double>::infinity();
  for (const auto& m : members) {
    const double s = support_sum(m, y);
    if (best.empty() || better(s, m, best_sum, best)) {
      best = m;
      best_sum = s;
    }
  }
  return best;
}

}  // namespace

Support ml_estimate(const ClassSpec& spec, const std::vector<double>& y, uint64_t brute_force_cap) {
  spec.validate();
  if (static_cast<int32_t>(y.size()) != spec.n)
    throw std::invalid_argument("ml_estimate: need one observation per coordinate");
  switch (spec.kind) {
    case ClassKind::SSet: return ml_sset(spec, y);
    case ClassKind::SInterval: return ml_interval(spec, y);
    case ClassKind::UnionIntervals: return ml_union_intervals(spec, y);
    case ClassKind::SStar: return ml_star(spec, y);
    case ClassKind::UnionStars:
    case ClassKind::Submatrix:
      return ml_brute_force(spec, y, brute_force_cap);
  }
  throw std::invalid_argument("ml_estimate: unknown class kind");
}

RunResult run_nonadaptive(const ClassSpec& spec, const SignalInstance& signal, double m, Rng& rng,
                          uint64_t brute_force_cap) {
  if (signal.n != spec.n) throw std::invalid_argument("run_nonadaptive: signal dimension mismatch");
  if (!(m > 0.0)) throw std::domain_error("run_nonadaptive: m must be positive");
  const double b = m / spec.n;
  const double noise = 1.0 / std::sqrt(b);
  std::vector<double> y(spec.n);
  for (int32_t i = 1; i <= spec.n; ++i)
    y[i - 1] = (signal.contains(i) ? signal.mu : 0.0) + rng.normal() * noise;
  RunResult res;
  res.estimate = ml_estimate(spec, y, brute_force_cap);
  res.hamming = hamming(res.estimate, signal.support);
  res.tests_run = spec.n;
  res.total_precision = m;  // n observations at b = m/n each, exactly m in total
  return res;
}

double nonadaptive_design_objective(const std::vector<Support>& members, int32_t n,
                                    const std::vector<double>& b) {
  if (static_cast<int32_t>(b.size()) != n)
    throw std::invalid_argument("nonadaptive_design_objective: b must have length n");
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& s : members) {
    double total = 0.0;
    for (const auto& s2 : members) {
      if (&s2 == &s) continue;
      size_t i = 0, j = 0;
      while (i < s.size() || j < s2.size()) {
        if (i < s.size() && j < s2.size() && s[i] == s2[j]) {
          ++i;
          ++j;
        } else if (j >= s2.size() || (i < s.size() && s[i] < s2[j])) {
          total += b[s[i] - 1];
          ++i;
        } else {
          total += b[s2[j] - 1];
          ++j;
        }
      }
    }
    worst = std::min(worst, total);
  }
  return worst;
}

}  // namespace asl
