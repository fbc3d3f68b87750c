#pragma once

#include <functional>
#include <optional>

#include "asl/consistency.hpp"
#include "asl/signal.hpp"
#include "asl/slrt.hpp"
#include "asl/strategies.hpp"

namespace asl {

// Per-test error probability schedules. Outputs depend only on (t, phase,
// class parameters), never on true labels.
struct AllocationRule {
  enum class Kind {
    UnstructuredEpsilon,    // alpha_t = eps/2n,  beta_t = eps/2s
    StructuredDelta,        // alpha_t = delta/4n, beta_t = delta/2l (search), delta/4|S| (refine)
    CappedStructuredDelta,  // as StructuredDelta with delta -> delta/2 (paired with J caps)
  };

  Kind kind = Kind::UnstructuredEpsilon;
  double target = 0.1;  // eps or delta
  int32_t n = 0;
  int32_t s_eff = 0;    // |S|: s for single-object classes, k*s for unions
  int32_t l_total = 1;  // signal entries sought across search phases (k for unions, else 1)

  // Exact plug-in of the schedule; values outside (0, 1/2] are clamped to 1/2
  // and counted.
  std::pair<double, double> error_probs(int32_t t, Phase phase) const;

  mutable int32_t clamp_warnings = 0;

  // The schedule each class uses: unstructured for s-sets, structured for
  // intervals, capped structured for the classes with J-capped searches.
  static AllocationRule for_class(const ClassSpec& spec, double target);
};

// J caps from the class analyses: (n/s) ln(2/delta) for stars and
// submatrices, (n/s) ln(2k/delta) for unions of stars; 0 (uncapped) for the
// deterministic searches.
int32_t default_j_cap(const ClassSpec& spec, double delta);

struct RunResult {
  Support estimate;           // unique consistent set, or empty
  int32_t hamming = 0;
  double total_precision = 0.0;
  int32_t tests_run = 0;
  bool truncated = false;
  double search_precision = 0.0;
  double refine_precision = 0.0;
};

// Algorithm: run the noiseless strategy, replacing each query by an SLRT at
// the scheduled (alpha_t, beta_t); the test decision feeds back as the label.
// gamma = eta / mu^2 per test. Stops when the tracker verdict leaves Many,
// the strategy is exhausted, or the ledger cap aborts the trial.
RunResult run_adaptive(const ClassSpec& spec, Strategy& strategy, const AllocationRule& rule,
                       const SignalInstance& signal, double eta, BudgetLedger& ledger, Rng& rng,
                       std::vector<TraceEntry>* trace = nullptr);

// Same loop with labels from an arbitrary source; used with truthful labels
// to run the noiseless procedures directly.
using Labeler = std::function<bool(Coord)>;
RunResult run_with_labeler(const ClassSpec& spec, Strategy& strategy, const Labeler& labeler,
                           const Support& true_support, Rng& rng,
                           std::vector<TraceEntry>* trace = nullptr);

// Noiseless run against a ground-truth support (truthful labels).
RunResult run_noiseless(const ClassSpec& spec, Strategy& strategy, const Support& true_support,
                        Rng& rng, std::vector<TraceEntry>* trace = nullptr);

}  // namespace asl
