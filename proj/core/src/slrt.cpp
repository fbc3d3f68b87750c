#include "asl/slrt.hpp"

#include <cmath>
#include <stdexcept>

namespace asl {

std::pair<double, double> slrt_boundaries(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0))
    throw std::domain_error("slrt_boundaries: alpha, beta must lie in (0, 1)");
  if (alpha + beta > 1.0)
    throw std::domain_error("slrt_boundaries: alpha + beta must not exceed 1");
  return {std::log(beta / (1.0 - alpha)), std::log((1.0 - beta) / alpha)};
}

SlrtConfig SlrtConfig::make(double alpha, double beta, double mu, double gamma) {
  if (!(mu > 0.0)) throw std::domain_error("SlrtConfig: mu must be positive");
  if (!(gamma > 0.0)) throw std::domain_error("SlrtConfig: gamma must be positive");
  auto [l, u] = slrt_boundaries(alpha, beta);
  return SlrtConfig{alpha, beta, mu, gamma, l, u};
}

SlrtOutcome run_slrt(const SignalInstance& signal, Coord index, const SlrtConfig& config,
                     BudgetLedger& ledger, Rng& rng) {
  if (index < 1 || index > signal.n) throw std::domain_error("run_slrt: index out of range");
  const double gamma = config.gamma;
  const double mu = config.mu;
  const double mean = signal.contains(index) ? signal.mu : 0.0;
  const double noise_scale = 1.0 / std::sqrt(gamma);
  const double drift = -0.5 * gamma * mu * mu;
  const double gain = gamma * mu;

  SlrtOutcome out;
  double z = 0.0;
  Observation obs{index, gamma, 0.0};
  // Always take at least one sample; with l = u = 0 the first increment's
  // sign decides.
  do {
    obs.value = mean + rng.normal() * noise_scale;
    ledger.record(obs);
    z += gain * obs.value + drift;
    ++out.samples;
    if (ledger.cap_exceeded()) {
      out.truncated = true;
      break;
    }
  } while (z > config.l && z < config.u);

  out.llr_final = z;
  out.precision_spent = static_cast<double>(out.samples) * gamma;
  out.decision = out.truncated ? (z >= 0.0) : (z >= config.u);
  return out;
}

PrecisionBounds expected_precision_bounds(double alpha, double beta, double mu) {
  if (!(alpha > 0.0 && alpha <= 0.5 && beta > 0.0 && beta <= 0.5))
    throw std::domain_error("expected_precision_bounds: alpha, beta must lie in (0, 1/2]");
  if (!(mu > 0.0)) throw std::domain_error("expected_precision_bounds: mu must be positive");
  const double c = 2.0 / (mu * mu);
  PrecisionBounds b;
  b.lower_h0 = c * (alpha * std::log(alpha / (1.0 - beta)) +
                    (1.0 - alpha) * std::log((1.0 - alpha) / beta));
  b.lower_h1 = c * ((1.0 - beta) * std::log((1.0 - beta) / alpha) +
                    beta * std::log(beta / (1.0 - alpha)));
  b.upper_h0 = c * std::log(1.0 / beta);
  b.upper_h1 = c * std::log(1.0 / alpha);
  return b;
}

}  // namespace asl
