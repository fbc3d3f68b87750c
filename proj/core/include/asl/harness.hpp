#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "asl/bounds.hpp"
#include "asl/class_spec.hpp"
#include "asl/driver.hpp"
#include "asl/nonadaptive.hpp"
#include "asl/slrt.hpp"

namespace asl {

enum class Procedure { Adaptive, NonAdaptive };
enum class SupportSelection { UniformOverClass, FixedList, CornerCases };

struct ExperimentConfig {
  ClassSpec spec;
  Procedure procedure = Procedure::Adaptive;
  std::vector<double> mu_grid;  // one entry for a plain run
  double m = 0.0;
  double target = 0.1;                       // eps (Hamming) or delta (ProbError)
  Metric metric = Metric::ProbError;
  double eta = 0.01;                         // gamma = eta / mu^2
  int32_t trials = 100;
  uint64_t base_seed = 1;
  SupportSelection support_selection = SupportSelection::UniformOverClass;
  std::vector<Support> fixed_supports;
  double budget_cap_factor = 10.0;           // <= 0 disables the hard cap
  int32_t threads = 0;                       // 0: ASL_THREADS or hardware
  bool record_wall_time = false;             // wall_ms column stays 0 unless set

  void validate() const;
};

struct TrialOutcome {
  int32_t hamming = 0;
  bool exact = false;
  double precision = 0.0;
  bool truncated = false;
  int32_t tests = 0;
  bool full_size = false;  // |estimate| == |S|
};

struct Summary {
  double mu = 0.0;
  Procedure procedure = Procedure::Adaptive;
  int32_t trials = 0;
  double mean_hamming = 0.0;
  double hamming_ci = 0.0;    // 95% normal half-width
  double err_prob = 0.0;
  double err_ci = 0.0;        // 95% Wilson half-width
  double mean_precision = 0.0;
  double prec_ci = 0.0;
  double trunc_rate = 0.0;
  uint64_t seed = 0;
  double wall_ms = 0.0;
};

// Wilson 95% interval half-width for x successes out of t.
double wilson_half_width(int64_t x, int64_t t);

// Per-trial results for one mu; deterministic in (config, mu, grid_index)
// regardless of thread count. grid_index keys the per-trial seeds so sweep
// points use disjoint streams.
std::vector<TrialOutcome> run_trials_detailed(const ExperimentConfig& config, double mu,
                                              int32_t grid_index = 0);

Summary summarize(const std::vector<TrialOutcome>& outcomes, double mu, Procedure procedure,
                  uint64_t seed);

// Single-mu entry point (uses mu_grid[0]).
Summary run_trials(const ExperimentConfig& config);

struct SweepResult {
  std::vector<Summary> rows;
  // smallest grid mu with err_prob <= level; NaN when none qualifies
  double threshold_at(double level) const;
};

SweepResult phase_sweep(const ExperimentConfig& config);

struct CalibrationRow {
  double gamma = 0.0;
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double gamma_mean_n_h0 = 0.0;
  double gamma_mean_n_h1 = 0.0;
  PrecisionBounds bounds;
  int32_t trials = 0;
};

// Empirical SLRT error rates and precision against the closed-form sandwich,
// per gamma in the grid (10^4-trial scale runs in seconds).
std::vector<CalibrationRow> slrt_calibration(double mu, double alpha, double beta,
                                             const std::vector<double>& gammas, int32_t trials,
                                             uint64_t base_seed, int32_t threads = 0);

std::string calibration_csv(const std::vector<CalibrationRow>& rows);

// Stable CSV schema:
// class,n,s,k,p,n1,n2,procedure,mu,m,target,trials,mean_hamming,hamming_ci,
// err_prob,err_ci,mean_precision,prec_ci,trunc_rate,seed,wall_ms
std::string summaries_csv(const ExperimentConfig& config, const std::vector<Summary>& rows);

// Support samplers (exposed for tests).
Support sample_support(const ClassSpec& spec, Rng& rng);
std::vector<Support> corner_case_supports(const ClassSpec& spec);

// Worker resolution: explicit > ASL_THREADS > hardware_concurrency.
int32_t resolve_threads(int32_t requested);

}  // namespace asl
