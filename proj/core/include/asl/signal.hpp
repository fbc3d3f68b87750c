#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "asl/rng.hpp"

namespace asl {

using Coord = int32_t;                // 1-based coordinate in {1..n}
using Support = std::vector<Coord>;   // sorted ascending, no duplicates

// Ground-truth signal: x_i = mu on the support, 0 elsewhere.
struct SignalInstance {
  int32_t n = 0;
  double mu = 0.0;
  Support support;

  SignalInstance() = default;
  SignalInstance(int32_t n_, double mu_, Support support_)
      : n(n_), mu(mu_), support(std::move(support_)) {
    validate();
  }

  void validate() const {
    if (n <= 0) throw std::invalid_argument("SignalInstance: n must be positive");
    if (!(mu > 0.0)) throw std::invalid_argument("SignalInstance: mu must be positive");
    Coord prev = 0;
    for (Coord i : support) {
      if (i < 1 || i > n) throw std::invalid_argument("SignalInstance: support index out of [1, n]");
      if (i <= prev) throw std::invalid_argument("SignalInstance: support must be strictly increasing");
      prev = i;
    }
  }

  bool contains(Coord i) const {
    return std::binary_search(support.begin(), support.end(), i);
  }
};

struct Observation {
  Coord index = 0;
  double precision = 0.0;
  double value = 0.0;
};

// Running account of precision spent. `spent` uses compensated summation so
// that >1e6 tiny precisions accumulate without drift; insertion order is the
// accumulation order. The cap (cap_factor * budget) is advisory: callers that
// enforce it abort a trial once spent exceeds it.
class BudgetLedger {
 public:
  explicit BudgetLedger(double budget_m, double cap_factor = 10.0)
      : budget_(budget_m), cap_(cap_factor > 0 ? cap_factor * budget_m : -1.0) {
    if (!(budget_m > 0)) throw std::invalid_argument("BudgetLedger: budget must be positive");
  }

  void record(const Observation& obs) {
    // Kahan summation.
    const double y = obs.precision - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
    ++count_;
  }

  double spent() const { return sum_; }
  uint64_t count() const { return count_; }
  double budget() const { return budget_; }
  bool has_cap() const { return cap_ > 0; }
  double cap() const { return cap_; }
  bool cap_exceeded() const { return has_cap() && sum_ > cap_; }

 private:
  double budget_ = 0.0;
  double cap_ = -1.0;
  double sum_ = 0.0;
  double comp_ = 0.0;
  uint64_t count_ = 0;
};

// One noisy look at coordinate `index`: value = x_index + gamma^{-1/2} W.
// Pure function of (signal, index, gamma, stream position). Does not touch
// any ledger; recording is the caller's contract.
inline Observation measure(const SignalInstance& signal, Coord index, double gamma, Rng& rng) {
  if (index < 1 || index > signal.n) throw std::domain_error("measure: index out of range");
  if (!(gamma > 0.0)) throw std::domain_error("measure: gamma must be positive");
  const double mean = signal.contains(index) ? signal.mu : 0.0;
  return Observation{index, gamma, mean + rng.normal() / std::sqrt(gamma)};
}

// |a triangle b| for sorted index sets.
inline int hamming(const Support& a, const Support& b) {
  size_t i = 0, j = 0;
  int d = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++d;
      ++i;
    } else {
      ++d;
      ++j;
    }
  }
  d += static_cast<int>((a.size() - i) + (b.size() - j));
  return d;
}

}  // namespace asl
