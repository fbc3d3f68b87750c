#include "asl/driver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asl {

namespace {

double clamp_prob(double v, int32_t& warnings) {
  if (v > 0.5) {
    ++warnings;
    return 0.5;
  }
  return v;
}

}  // namespace

std::pair<double, double> AllocationRule::error_probs(int32_t, Phase phase) const {
  double alpha = 0.0, beta = 0.0;
  switch (kind) {
    case Kind::UnstructuredEpsilon:
      alpha = target / (2.0 * n);
      beta = target / (2.0 * s_eff);
      break;
    case Kind::StructuredDelta:
    case Kind::CappedStructuredDelta: {
      const double d = (kind == Kind::CappedStructuredDelta) ? target / 2.0 : target;
      alpha = d / (4.0 * n);
      beta = (phase == Phase::Search) ? d / (2.0 * l_total) : d / (4.0 * s_eff);
      break;
    }
  }
  return {clamp_prob(alpha, clamp_warnings), clamp_prob(beta, clamp_warnings)};
}

AllocationRule AllocationRule::for_class(const ClassSpec& spec, double target) {
  AllocationRule r;
  r.target = target;
  r.n = spec.n;
  r.s_eff = spec.support_size();
  switch (spec.kind) {
    case ClassKind::SSet:
      r.kind = Kind::UnstructuredEpsilon;
      r.l_total = 1;
      break;
    case ClassKind::SInterval:
      r.kind = Kind::StructuredDelta;
      r.l_total = 1;
      break;
    case ClassKind::UnionIntervals:
      r.kind = Kind::StructuredDelta;
      r.l_total = spec.k;
      break;
    case ClassKind::SStar:
      r.kind = Kind::CappedStructuredDelta;
      r.l_total = 1;
      break;
    case ClassKind::UnionStars:
      r.kind = Kind::CappedStructuredDelta;
      r.l_total = spec.k;
      break;
    case ClassKind::Submatrix:
      r.kind = Kind::CappedStructuredDelta;
      r.l_total = 1;
      break;
  }
  return r;
}

int32_t default_j_cap(const ClassSpec& spec, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("default_j_cap: delta must be in (0,1)");
  const double per_star = static_cast<double>(spec.n) / spec.s;
  switch (spec.kind) {
    case ClassKind::SStar:
    case ClassKind::Submatrix:
      return static_cast<int32_t>(std::ceil(per_star * std::log(2.0 / delta)));
    case ClassKind::UnionStars:
      return static_cast<int32_t>(std::ceil(per_star * std::log(2.0 * spec.k / delta)));
    default:
      return 0;  // deterministic searches are uncapped
  }
}

RunResult run_adaptive(const ClassSpec& spec, Strategy& strategy, const AllocationRule& rule,
                       const SignalInstance& signal, double eta, BudgetLedger& ledger, Rng& rng,
                       std::vector<TraceEntry>* trace) {
  if (signal.n != spec.n) throw std::invalid_argument("run_adaptive: signal dimension mismatch");
  if (!(eta > 0.0)) throw std::domain_error("run_adaptive: eta must be positive");
  const double gamma = eta / (signal.mu * signal.mu);
  const double spent_before = ledger.spent();

  ConsistencyTracker tracker(spec);
  RunResult res;
  int32_t t = 0;
  while (tracker.verdict() == Verdict::Many) {
    if (ledger.cap_exceeded()) {
      res.truncated = true;
      break;
    }
    const auto q = strategy.next_query(rng);
    if (!q) break;
    ++t;
    const auto [alpha, beta] = rule.error_probs(t, q->phase);
    const SlrtConfig cfg = SlrtConfig::make(alpha, beta, signal.mu, gamma);
    const SlrtOutcome out = run_slrt(signal, q->coord, cfg, ledger, rng);
    if (q->phase == Phase::Search) res.search_precision += out.precision_spent;
    else res.refine_precision += out.precision_spent;
    tracker.update(q->coord, out.decision);
    strategy.feed_label(q->coord, out.decision);
    if (trace) trace->push_back({t, q->coord, q->phase, out.decision});
    if (out.truncated) {
      res.truncated = true;
      break;
    }
  }
  res.tests_run = t;
  res.total_precision = ledger.spent() - spent_before;
  if (tracker.verdict() == Verdict::Unique) res.estimate = tracker.unique_support();
  res.hamming = hamming(res.estimate, signal.support);
  return res;
}

RunResult run_with_labeler(const ClassSpec& spec, Strategy& strategy, const Labeler& labeler,
                           const Support& true_support, Rng& rng, std::vector<TraceEntry>* trace) {
  ConsistencyTracker tracker(spec);
  RunResult res;
  int32_t t = 0;
  while (tracker.verdict() == Verdict::Many) {
    const auto q = strategy.next_query(rng);
    if (!q) break;
    ++t;
    const bool label = labeler(q->coord);
    tracker.update(q->coord, label);
    strategy.feed_label(q->coord, label);
    if (trace) trace->push_back({t, q->coord, q->phase, label});
  }
  res.tests_run = t;
  if (tracker.verdict() == Verdict::Unique) res.estimate = tracker.unique_support();
  res.hamming = hamming(res.estimate, true_support);
  return res;
}

RunResult run_noiseless(const ClassSpec& spec, Strategy& strategy, const Support& true_support,
                        Rng& rng, std::vector<TraceEntry>* trace) {
  const auto truth = [&true_support](Coord c) {
    return std::binary_search(true_support.begin(), true_support.end(), c);
  };
  return run_with_labeler(spec, strategy, truth, true_support, rng, trace);
}

}  // namespace asl
