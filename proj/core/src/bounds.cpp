#include "asl/bounds.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "asl/errors.hpp"
#include "asl/star_packing.hpp"

namespace asl {

namespace {

double log_binomial(double n, double k) {
  if (k < 0 || k > n) throw std::domain_error("log_binomial: k out of range");
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

// ln(C - 1) where ln C = logc; exact when C is small enough to exponentiate.
double log_cardinality_minus_one(double logc) {
  if (logc < 40.0) {
    const double c = std::exp(logc);
    if (c <= 2.0 + 1e-9)
      throw RefusalError("necessary_mu_nonadaptive: the symmetric subclass has fewer than "
                         "three members, Prop-10-style reductions do not apply");
    return std::log(c - 1.0);
  }
  return logc;  // C - 1 ~ C far beyond double granularity
}

BoundResult make_result(std::string id, std::vector<BoundTerm> terms) {
  BoundResult r;
  r.formula_id = std::move(id);
  r.terms = std::move(terms);
  double sq = 0.0;
  for (const auto& t : r.terms) sq += t.value;
  r.mu_threshold = std::sqrt(std::max(0.0, sq));
  return r;
}

void check_target(double t, const char* what) {
  if (!(t > 0.0 && t < 1.0)) throw std::domain_error(std::string(what) + " must lie in (0, 1)");
}

double n_of(const ClassSpec& s) { return static_cast<double>(s.n); }

double star_count_value(const BoundQuery& q) {
  if (q.use_greedy_packing)
    return static_cast<double>(greedy_star_packing(q.spec.p, q.spec.s).size());
  return star_packing_bound(q.spec.p, q.spec.s);
}

}  // namespace

BoundResult sufficient_mu(const BoundQuery& query) {
  const ClassSpec& c = query.spec;
  c.validate();
  if (!(query.m > 0.0)) throw std::domain_error("sufficient_mu: m must be positive");
  check_target(query.target, "sufficient_mu: target");
  const double n = n_of(c), m = query.m, s = c.s, k = c.k;

  if (c.kind == ClassKind::SSet) {
    // Hamming target; a ProbError target is honored through the same formula
    // since the expected Hamming distance dominates the error probability.
    const double eps = query.target;
    BoundResult r = make_result(
        "prop2",
        {{"2n/m ln(2s/eps)", 2.0 * n / m * std::log(2.0 * s / eps)},
         {"2s/m ln(2n/eps)", 2.0 * s / m * std::log(2.0 * n / eps)}});
    if (query.metric == Metric::ProbError)
      r.notes.push_back("prob-error target served by the Hamming bound (P(error) <= E|diff|)");
    return r;
  }

  // structured classes: delta is the error-probability target; a Hamming
  // target epsilon tightens it to epsilon/|S|
  double delta = query.target;
  std::vector<std::string> notes;
  if (query.metric == Metric::Hamming) {
    delta = query.target / c.support_size();
    notes.push_back("Hamming target: delta set to eps/|S|");
  }

  BoundResult r;
  switch (c.kind) {
    case ClassKind::SInterval:
      r = make_result("prop4",
                      {{"2n/(sm) ln(2/delta)", 2.0 * n / (s * m) * std::log(2.0 / delta)},
                       {"2s/m ln(4n/delta)", 2.0 * s / m * std::log(4.0 * n / delta)}});
      break;
    case ClassKind::UnionIntervals:
      r = make_result("prop5",
                      {{"2n/(sm) ln(2k/delta)", 2.0 * n / (s * m) * std::log(2.0 * k / delta)},
                       {"2ks/m ln(4n/delta)", 2.0 * k * s / m * std::log(4.0 * n / delta)}});
      break;
    case ClassKind::SStar: {
      const double l4 = std::log(4.0 / delta);
      r = make_result("prop6",
                      {{"2n/(sm) ln^2(4/delta)", 2.0 * n / (s * m) * l4 * l4},
                       {"2s/m ln(8n/delta)", 2.0 * s / m * std::log(8.0 * n / delta)},
                       {"sqrt(32n)/m ln(8s/delta)", std::sqrt(32.0 * n) / m * std::log(8.0 * s / delta)}});
      break;
    }
    case ClassKind::UnionStars: {
      const double l4k = std::log(4.0 * k / delta);
      r = make_result(
          "prop7",
          {{"2n(1+delta k)/(sm) ln^2(4k/delta)", 2.0 * n * (1.0 + delta * k) / (s * m) * l4k * l4k},
           {"2ks/m ln(8n/delta)", 2.0 * k * s / m * std::log(8.0 * n / delta)},
           {"k sqrt(32n)/m ln(8ks/delta)",
            k * std::sqrt(32.0 * n) / m * std::log(8.0 * k * s / delta)}});
      if (delta * k > 0.5)
        r.notes.push_back("delta*k exceeds 1/2: the (1 + delta k) coefficient degrades this bound");
      break;
    }
    case ClassKind::Submatrix: {
      const double l4 = std::log(4.0 / delta);
      r = make_result(
          "prop8",
          {{"2n/(sm) ln^2(4/delta)", 2.0 * n / (s * m) * l4 * l4},
           {"2s/m ln(8n/delta)", 2.0 * s / m * std::log(8.0 * n / delta)},
           {"2(n1+n2)/m ln(8s/delta)",
            2.0 * (c.n1 + c.n2) / m * std::log(8.0 * s / delta)}});
      break;
    }
    default:
      throw RefusalError("sufficient_mu: unsupported class");
  }
  for (auto& note : notes) r.notes.push_back(note);
  return r;
}

BoundResult necessary_mu_nonadaptive(const BoundQuery& query) {
  const ClassSpec& c = query.spec;
  c.validate();
  if (!(query.m > 0.0)) throw std::domain_error("necessary_mu_nonadaptive: m must be positive");
  const double eps = query.target;
  check_target(eps, "necessary_mu_nonadaptive: epsilon");
  const double n = n_of(c), m = query.m;
  const double ssize = c.support_size();

  if (eps >= 0.5) {
    // the (1 - 2 eps) factor vanishes; the method gives only the trivial bound
    BoundResult r = make_result("prop10", {{"(1-2eps) factor vanished", 0.0}});
    r.notes.push_back("eps >= 1/2: trivial threshold");
    return r;
  }

  // log cardinality of the symmetric (sub)class used in the reduction
  double logc = 0.0;
  std::string subclass;
  switch (c.kind) {
    case ClassKind::SSet:
      logc = log_binomial(n, c.s);
      subclass = "all s-sets";
      break;
    case ClassKind::SInterval:
      if (c.n / c.s < 2) throw RefusalError("necessary_mu_nonadaptive: subclass has one member");
      logc = std::log(static_cast<double>(c.n / c.s));
      subclass = "disjoint consecutive intervals (n/s members)";
      break;
    case ClassKind::UnionIntervals:
      logc = log_binomial(c.n / c.s, c.k);
      subclass = "unions of disjoint consecutive intervals (C(n/s, k))";
      break;
    case ClassKind::SStar:
      logc = log_binomial(c.p, c.s + 1);
      subclass = "distinct-vertex stars (C(p, s+1) lower bound)";
      break;
    case ClassKind::UnionStars:
      if (static_cast<int64_t>(c.k) * (c.s + 1) > c.p)
        throw RefusalError("necessary_mu_nonadaptive: needs k(s+1) <= p");
      logc = log_binomial(c.p, static_cast<double>(c.k) * (c.s + 1));
      subclass = "distinct-vertex star unions (C(p, k(s+1)) lower bound)";
      break;
    case ClassKind::Submatrix: {
      const double rs = std::sqrt(static_cast<double>(c.s));
      const int32_t r = static_cast<int32_t>(std::llround(rs));
      if (r * r != c.s || r > c.n1 || r > c.n2)
        throw RefusalError(
            "necessary_mu_nonadaptive: submatrix reduction needs square s with sqrt(s) <= n1, n2");
      logc = log_binomial(c.n1, r) + log_binomial(c.n2, r);
      subclass = "sqrt(s) x sqrt(s) submatrices";
      break;
    }
  }
  const double logM = log_cardinality_minus_one(logc);
  BoundResult r = make_result(
      "prop11", {{"(1-2eps) n/(2|S|m) ln(|C|-1)",
                  (1.0 - 2.0 * eps) * n / (2.0 * ssize * m) * logM}});
  r.notes.push_back("subclass: " + subclass);
  if (1.0 + std::sqrt(2.0) > (1.0 - 2.0 * eps) * logM)
    r.notes.push_back(
        "transparency condition 1+sqrt(2) <= (1-2eps) ln(|C|-1) fails; "
        "value reported from the unsimplified reduction");
  return r;
}

BoundResult necessary_mu_adaptive(const BoundQuery& query) {
  const ClassSpec& c = query.spec;
  c.validate();
  if (!(query.m > 0.0)) throw std::domain_error("necessary_mu_adaptive: m must be positive");
  const double eps = query.target;
  check_target(eps, "necessary_mu_adaptive: epsilon");
  const double n = n_of(c), m = query.m, s = c.s, k = c.k;

  switch (c.kind) {
    case ClassKind::SSet: {
      if (query.metric != Metric::Hamming)
        throw RefusalError("necessary_mu_adaptive: s-sets proven for the Hamming metric only (nearest: the s-set Hamming bound)");
      BoundResult r = make_result(
          "prop12",
          {{"2(n-s)/m (ln s + ln((n-s)/(n+1)) + ln(1/2eps))",
            2.0 * (n - s) / m *
                (std::log(s) + std::log((n - s) / (n + 1.0)) + std::log(1.0 / (2.0 * eps)))}});
      r.notes.push_back("class enlarged to cardinality s-1 or s");
      return r;
    }
    case ClassKind::SInterval: {
      if (query.metric == Metric::ProbError) {
        if (!query.include_empty_set) {
          BoundResult r =
              make_result("prop13", {{"(1-eps)^2 n/(2sm)",
                                      (1.0 - eps) * (1.0 - eps) * n / (2.0 * s * m)}});
          r.notes.push_back("loose in eps; interval estimation is as hard as detection");
          return r;
        }
        return make_result("prop14i", {{"2n/(sm) ln(1/2eps)",
                                        2.0 * n / (s * m) * std::log(1.0 / (2.0 * eps))}});
      }
      if (!query.include_empty_set)
        throw RefusalError(
            "necessary_mu_adaptive: interval Hamming bound includes the empty set (nearest: prop14ii)");
      return make_result(
          "prop14ii",
          {{"2(n-s)/(sm) (ln((n-s)/(n+s)) + ln(s/8eps))",
            2.0 * (n - s) / (s * m) *
                (std::log((n - s) / (n + s)) + std::log(s / (8.0 * eps)))}});
    }
    case ClassKind::UnionIntervals: {
      if (query.metric != Metric::Hamming)
        throw RefusalError(
            "necessary_mu_adaptive: unions of intervals proven for the Hamming metric only (nearest: prop15)");
      BoundResult r = make_result(
          "prop15",
          {{"2(n-sk)/(sm) (ln k + ln((n-sk)/(n+s)) + ln(s/8eps))",
            2.0 * (n - s * k) / (s * m) *
                (std::log(k) + std::log((n - s * k) / (n + s)) + std::log(s / (8.0 * eps)))}});
      r.notes.push_back("class enlarged to unions of k or k-1 intervals");
      return r;
    }
    case ClassKind::SStar: {
      if (query.metric != Metric::ProbError)
        throw RefusalError(
            "necessary_mu_adaptive: single stars proven for prob-error only (nearest: prop16; for Hamming use ustars with k=1)");
      const double N = star_count_value(query);
      BoundResult r = make_result(
          "prop16", {{"(1-eps)^2 N(p,s)/(2m)", (1.0 - eps) * (1.0 - eps) * N / (2.0 * m)}});
      r.notes.push_back(query.use_greedy_packing ? "N(p,s) from greedy packing"
                                                 : "N(p,s) from the p(p-1-s)/(2s) bound");
      return r;
    }
    case ClassKind::UnionStars: {
      if (query.metric != Metric::Hamming)
        throw RefusalError(
            "necessary_mu_adaptive: unions of stars proven for the Hamming metric only (nearest: prop17)");
      const double N = star_count_value(query);
      if (N <= k) throw RefusalError("necessary_mu_adaptive: N(p,s) <= k leaves no slack");
      BoundResult r = make_result(
          "prop17",
          {{"2(N-k)/m (ln k + ln((N-k)/(N+1)) + ln(s/8eps))",
            2.0 * (N - k) / m *
                (std::log(k) + std::log((N - k) / (N + 1.0)) + std::log(s / (8.0 * eps)))}});
      r.notes.push_back(query.use_greedy_packing ? "N(p,s) from greedy packing"
                                                 : "N(p,s) from the p(p-1-s)/(2s) bound");
      r.notes.push_back("class enlarged to unions of k or k-1 stars");
      return r;
    }
    case ClassKind::Submatrix: {
      // the reductions tile the matrix with disjoint size-s submatrices
      const bool coverable = [&] {
        for (int32_t s1 = 1; s1 <= c.s; ++s1) {
          if (c.s % s1 != 0) continue;
          const int32_t s2 = c.s / s1;
          if (s1 <= c.n1 && s2 <= c.n2 && c.n1 % s1 == 0 && c.n2 % s2 == 0) return true;
        }
        return false;
      }();
      if (!coverable)
        throw RefusalError(
            "necessary_mu_adaptive: matrix not coverable by disjoint size-s submatrices (prop18/19)");
      if (query.metric == Metric::ProbError) {
        if (!query.include_empty_set) {
          BoundResult r = make_result(
              "prop18", {{"(1-eps)^2 n/(2sm)", (1.0 - eps) * (1.0 - eps) * n / (2.0 * s * m)}});
          r.notes.push_back("loose in eps");
          return r;
        }
        return make_result("prop19i", {{"2n/(sm) ln(1/2eps)",
                                        2.0 * n / (s * m) * std::log(1.0 / (2.0 * eps))}});
      }
      if (!query.include_empty_set)
        throw RefusalError(
            "necessary_mu_adaptive: submatrix Hamming bound includes the empty set (nearest: prop19ii)");
      return make_result(
          "prop19ii",
          {{"2(n-s)/(sm) (ln((n-s)/(n+s)) + ln(s/8eps))",
            2.0 * (n - s) / (s * m) *
                (std::log((n - s) / (n + s)) + std::log(s / (8.0 * eps)))}});
    }
  }
  throw RefusalError("necessary_mu_adaptive: unsupported class");
}

BoundResult bound_mu(const BoundQuery& query) {
  switch (query.direction) {
    case Direction::Sufficient: return sufficient_mu(query);
    case Direction::NecessaryNonAdaptive: return necessary_mu_nonadaptive(query);
    case Direction::NecessaryAdaptive: return necessary_mu_adaptive(query);
  }
  throw std::invalid_argument("bound_mu: unknown direction");
}

double fano_error_lower_bound(double M, double a, std::optional<double> tau_opt) {
  if (!(M >= 1.0)) throw std::domain_error("fano_error_lower_bound: M must be >= 1");
  if (!(a >= 0.0)) throw std::domain_error("fano_error_lower_bound: a must be >= 0");
  const double tau = tau_opt.value_or(1.0 / M);
  if (!(tau > 0.0 && tau < 1.0))
    throw std::domain_error("fano_error_lower_bound: tau must lie in (0, 1)");
  const double v = tau * M / (1.0 + tau * M) * (1.0 + (a + std::sqrt(a / 2.0)) / std::log(tau));
  return std::max(0.0, v);
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::vector<ScalingRow> scaling_table(const std::vector<ClassSpec>& specs, double m) {
  std::vector<ScalingRow> rows;
  for (const auto& c : specs) {
    const double n = c.n, s = c.s, k = c.k;
    ScalingRow r;
    r.note = "order-only; unspecified constants fixed to 1; omega_n terms symbolic";
    switch (c.kind) {
      case ClassKind::SSet:
        r.class_name = "s-sets";
        r.nonadaptive_necessary = "sqrt(log n)";
        r.adaptive_necessary = "sqrt(n/m log s)";
        r.adaptive_sufficient = "sqrt(n/m log s)";
        r.nonadaptive_necessary_value = std::sqrt(std::log(n));
        r.adaptive_necessary_value = std::sqrt(n / m * std::log(s));
        r.adaptive_sufficient_value = std::sqrt(n / m * std::log(s));
        break;
      case ClassKind::SInterval:
      case ClassKind::UnionIntervals: {
        const double kk = (c.kind == ClassKind::SInterval) ? 1.0 : k;
        r.class_name = (c.kind == ClassKind::SInterval) ? "s-intervals (union row, k=1)"
                                                        : "unions of k disjoint s-intervals";
        r.nonadaptive_necessary = "sqrt(n/(sm) log(n/ks))";
        r.adaptive_necessary = "sqrt(n/(sm) log ks)";
        r.adaptive_sufficient = "sqrt(n/(sm) log ks)";
        r.nonadaptive_necessary_value = std::sqrt(n / (s * m) * std::log(n / (kk * s)));
        r.adaptive_necessary_value = std::sqrt(n / (s * m) * std::log(kk * s));
        r.adaptive_sufficient_value = std::sqrt(n / (s * m) * std::log(kk * s));
        break;
      }
      case ClassKind::SStar:
      case ClassKind::UnionStars: {
        const double kk = (c.kind == ClassKind::SStar) ? 1.0 : k;
        r.class_name = (c.kind == ClassKind::SStar) ? "s-stars (union row, k=1)"
                                                    : "unions of k disjoint s-stars";
        r.nonadaptive_necessary = "sqrt(n/m log(sqrt(n)/ks))";
        r.adaptive_necessary = "sqrt(n/(sm) log ks)";
        r.adaptive_sufficient = "sqrt(n/(sm) log^2 ks)";
        r.nonadaptive_necessary_value = std::sqrt(n / m * std::log(std::sqrt(n) / (kk * s)));
        r.adaptive_necessary_value = std::sqrt(n / (s * m) * std::log(kk * s));
        {
          const double lg = std::log(kk * s);
          r.adaptive_sufficient_value = std::sqrt(n / (s * m) * lg * lg);
        }
        break;
      }
      case ClassKind::Submatrix: {
        r.class_name = "s-submatrices of a sqrt(n) x sqrt(n) matrix";
        r.nonadaptive_necessary = "sqrt(n/(sqrt(s)m) log(n/s))";
        r.adaptive_necessary = "sqrt(n/(sm) log s)";
        r.adaptive_sufficient = "sqrt(n/(sm) log^2 s)";
        r.nonadaptive_necessary_value = std::sqrt(n / (std::sqrt(s) * m) * std::log(n / s));
        r.adaptive_necessary_value = std::sqrt(n / (s * m) * std::log(s));
        {
          const double lg = std::log(s);
          r.adaptive_sufficient_value = std::sqrt(n / (s * m) * lg * lg);
        }
        break;
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string scaling_table_csv(const std::vector<ScalingRow>& rows) {
  std::ostringstream os;
  os << "class,nonadaptive_necessary,adaptive_necessary,adaptive_sufficient,"
        "nonadaptive_necessary_value,adaptive_necessary_value,adaptive_sufficient_value,note\n";
  for (const auto& r : rows) {
    os << '"' << r.class_name << "\",\"" << r.nonadaptive_necessary << "\",\""
       << r.adaptive_necessary << "\",\"" << r.adaptive_sufficient << "\","
       << fmt(r.nonadaptive_necessary_value) << ',' << fmt(r.adaptive_necessary_value) << ','
       << fmt(r.adaptive_sufficient_value) << ",\"" << r.note << "\"\n";
  }
  return os.str();
}

}  // namespace asl
