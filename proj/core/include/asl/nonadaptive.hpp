#pragma once

#include <vector>

#include "asl/class_spec.hpp"
#include "asl/driver.hpp"
#include "asl/rng.hpp"

namespace asl {

// Maximum-likelihood support estimate from one observation per coordinate at
// equal precision: argmax over members of the sum of observed values, ties
// broken by the lexicographically smallest support. Exact algorithms per
// class; unions of stars and submatrices fall back to brute force under the
// enumeration cap and refuse above it.
Support ml_estimate(const ClassSpec& spec, const std::vector<double>& y,
                    uint64_t brute_force_cap = 1'000'000);

// Uniform design b_i = m/n (optimal for symmetric classes), one observation
// per coordinate, then ml_estimate.
RunResult run_nonadaptive(const ClassSpec& spec, const SignalInstance& signal, double m, Rng& rng,
                          uint64_t brute_force_cap = 1'000'000);

// The quantity the uniform design maximizes for symmetric classes:
// min over S of sum over S' != S of sum_{i in S triangle S'} b_i.
// Used by design-optimality checks.
double nonadaptive_design_objective(const std::vector<Support>& members, int32_t n,
                                    const std::vector<double>& b);

}  // namespace asl
