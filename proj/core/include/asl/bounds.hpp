#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asl/class_spec.hpp"

namespace asl {

enum class Metric { Hamming, ProbError };
enum class Direction { Sufficient, NecessaryNonAdaptive, NecessaryAdaptive };

struct BoundQuery {
  ClassSpec spec;
  double m = 0.0;                 // precision budget
  double target = 0.1;            // epsilon (Hamming) or delta (ProbError)
  Metric metric = Metric::ProbError;
  Direction direction = Direction::Sufficient;
  bool include_empty_set = false; // adds the empty set to the class where the
                                  // corresponding result needs it
  bool use_greedy_packing = false;  // N(p,s) from the greedy construction
                                    // instead of the p(p-1-s)/(2s) bound
};

struct BoundTerm {
  std::string name;
  double value = 0.0;  // an addend of mu^2
};

struct BoundResult {
  double mu_threshold = 0.0;
  std::string formula_id;  // proposition tag
  std::vector<BoundTerm> terms;
  std::vector<std::string> notes;

  double mu_squared() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.value;
    return s;
  }
};

// Sufficient signal magnitude for the adaptive procedure. ProbError targets
// plug delta into the per-class formulas; Hamming targets on structured
// classes use delta = epsilon / |S|.
BoundResult sufficient_mu(const BoundQuery& query);

// Necessary magnitude for any non-adaptive procedure, via the symmetric
// (sub)class cardinalities. Refuses when the transparency condition
// 1 + sqrt(2) <= (1 - 2 eps) ln(|C|-1) fails for eps < 1/2; returns the
// trivial 0 threshold when eps >= 1/2.
BoundResult necessary_mu_nonadaptive(const BoundQuery& query);

// Necessary magnitude for any adaptive procedure; combinations limited to
// those with a proof (refusal otherwise, naming the nearest result).
BoundResult necessary_mu_adaptive(const BoundQuery& query);

// Dispatch on query.direction.
BoundResult bound_mu(const BoundQuery& query);

// Fano-type error lower bound: (tau M / (1 + tau M)) (1 + (a + sqrt(a/2)) / ln tau),
// clamped at 0; tau defaults to 1/M.
double fano_error_lower_bound(double M, double a, std::optional<double> tau = std::nullopt);

// One row of the scaling-law table (constants omitted, natural logs),
// instantiated at the query's parameters; omega_n terms stay symbolic.
struct ScalingRow {
  std::string class_name;
  std::string nonadaptive_necessary;
  std::string adaptive_necessary;
  std::string adaptive_sufficient;
  double nonadaptive_necessary_value = 0.0;
  double adaptive_necessary_value = 0.0;
  double adaptive_sufficient_value = 0.0;
  std::string note;
};

std::vector<ScalingRow> scaling_table(const std::vector<ClassSpec>& specs, double m);
std::string scaling_table_csv(const std::vector<ScalingRow>& rows);

}  // namespace asl
