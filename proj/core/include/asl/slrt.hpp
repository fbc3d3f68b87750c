#pragma once

#include <cstdint>

#include "asl/signal.hpp"

namespace asl {

// Wald boundaries l = ln(beta/(1-alpha)), u = ln((1-beta)/alpha).
// Requires alpha, beta in (0,1) with alpha + beta < 1, except the degenerate
// alpha = beta = 1/2 where both boundaries collapse to 0 (stop after the first
// increment, decided by its sign).
std::pair<double, double> slrt_boundaries(double alpha, double beta);

// Gaussian log-likelihood ratio of a single observation y at precision gamma:
// gamma*mu*y - gamma*mu^2/2.
inline double llr_increment(double y, double mu, double gamma) {
  return gamma * mu * y - 0.5 * gamma * mu * mu;
}

struct SlrtConfig {
  double alpha = 0.0;
  double beta = 0.0;
  double mu = 0.0;
  double gamma = 0.0;  // per-observation precision
  double l = 0.0;
  double u = 0.0;

  static SlrtConfig make(double alpha, double beta, double mu, double gamma);
};

struct SlrtOutcome {
  bool decision = false;    // 1 iff the upper boundary was crossed
  int64_t samples = 0;
  double llr_final = 0.0;
  double precision_spent = 0.0;  // samples * gamma
  bool truncated = false;        // ledger cap aborted the walk mid-test
};

// Sequential test of x_index = 0 vs x_index = mu at fixed per-observation
// precision. Accumulates llr increments over fresh measurements until the
// cumulative value leaves (l, u); every measurement is recorded in the ledger.
// If the ledger cap is exceeded mid-walk the test stops, flagged truncated,
// decided by the sign of the current llr.
SlrtOutcome run_slrt(const SignalInstance& signal, Coord index, const SlrtConfig& config,
                     BudgetLedger& ledger, Rng& rng);

// The Wald characterization of expected precision spend (limits as gamma->0):
// lower_* are the exact-boundary-hit values, upper_* the transparent bounds
// (2/mu^2) ln(1/beta) and (2/mu^2) ln(1/alpha), valid for alpha, beta <= 1/2.
struct PrecisionBounds {
  double lower_h0 = 0.0;
  double lower_h1 = 0.0;
  double upper_h0 = 0.0;
  double upper_h1 = 0.0;
};
PrecisionBounds expected_precision_bounds(double alpha, double beta, double mu);

}  // namespace asl
