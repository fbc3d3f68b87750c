#include "asl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "asl/errors.hpp"
#include "asl/star_packing.hpp"

namespace asl {

namespace {

// distinct s-subset of {1..n}, sorted
Support sample_subset(int32_t n, int32_t s, Rng& rng) {
  std::vector<Coord> idx(n);
  std::iota(idx.begin(), idx.end(), 1);
  for (int32_t j = 0; j < s; ++j) {
    const int32_t r = j + static_cast<int32_t>(rng.uniform_below(n - j));
    std::swap(idx[j], idx[r]);
  }
  Support out(idx.begin(), idx.begin() + s);
  std::sort(out.begin(), out.end());
  return out;
}

Support star_edges(int32_t p, int32_t center, const std::vector<int32_t>& leaves) {
  Support out;
  out.reserve(leaves.size());
  for (int32_t w : leaves) out.push_back(edge_index(p, center, w));
  std::sort(out.begin(), out.end());
  return out;
}

Support sample_star(int32_t p, int32_t s, Rng& rng) {
  const int32_t center = 1 + static_cast<int32_t>(rng.uniform_below(p));
  std::vector<int32_t> others;
  others.reserve(p - 1);
  for (int32_t w = 1; w <= p; ++w)
    if (w != center) others.push_back(w);
  for (int32_t j = 0; j < s; ++j) {
    const int32_t r = j + static_cast<int32_t>(rng.uniform_below(others.size() - j));
    std::swap(others[j], others[r]);
  }
  return star_edges(p, center, {others.begin(), others.begin() + s});
}

template <typename T>
void merge_into(Support& acc, const T& more) {
  acc.insert(acc.end(), more.begin(), more.end());
  std::sort(acc.begin(), acc.end());
}

}  // namespace

Support sample_support(const ClassSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case ClassKind::SSet:
      return sample_subset(spec.n, spec.s, rng);
    case ClassKind::SInterval: {
      const int32_t a = 1 + static_cast<int32_t>(rng.uniform_below(spec.n - spec.s + 1));
      Support out(spec.s);
      std::iota(out.begin(), out.end(), a);
      return out;
    }
    case ClassKind::UnionIntervals: {
      // sorted k-subset of {1..n-k(s-1)} maps bijectively onto tile placements
      const int32_t domain = spec.n - spec.k * (spec.s - 1);
      Support a = sample_subset(domain, spec.k, rng);
      Support out;
      for (int32_t j = 0; j < spec.k; ++j) {
        const int32_t start = a[j] + j * (spec.s - 1);
        for (int32_t x = 0; x < spec.s; ++x) out.push_back(start + x);
      }
      return out;
    }
    case ClassKind::SStar:
      return sample_star(spec.p, spec.s, rng);
    case ClassKind::UnionStars: {
      // i.i.d. stars with rejection until edge-disjoint; near-uniform over
      // decompositions, which is what "sampled S" reports
      for (int attempt = 0; attempt < 1000; ++attempt) {
        Support acc;
        bool ok = true;
        for (int32_t j = 0; j < spec.k && ok; ++j) {
          Support st = sample_star(spec.p, spec.s, rng);
          for (Coord e : st)
            if (std::binary_search(acc.begin(), acc.end(), e)) {
              ok = false;
              break;
            }
          if (ok) merge_into(acc, st);
        }
        if (ok) return acc;
      }
      // dense regime: take k random stars of a fresh greedy packing
      auto packing = greedy_star_packing(spec.p, spec.s);
      if (static_cast<int32_t>(packing.size()) < spec.k)
        throw std::runtime_error("sample_support: cannot place k disjoint stars");
      for (int32_t j = 0; j < spec.k; ++j) {
        const int32_t r = j + static_cast<int32_t>(rng.uniform_below(packing.size() - j));
        std::swap(packing[j], packing[r]);
      }
      Support acc;
      for (int32_t j = 0; j < spec.k; ++j) merge_into(acc, packing[j].edges);
      return acc;
    }
    case ClassKind::Submatrix: {
      // factorization weighted by the number of members it contributes
      std::vector<std::pair<int32_t, int32_t>> facts;
      std::vector<double> logw;
      for (int32_t s1 = 1; s1 <= spec.s; ++s1) {
        if (spec.s % s1 != 0) continue;
        const int32_t s2 = spec.s / s1;
        if (s1 > spec.n1 || s2 > spec.n2) continue;
        facts.push_back({s1, s2});
        logw.push_back(std::lgamma(spec.n1 + 1.0) - std::lgamma(s1 + 1.0) -
                       std::lgamma(spec.n1 - s1 + 1.0) + std::lgamma(spec.n2 + 1.0) -
                       std::lgamma(s2 + 1.0) - std::lgamma(spec.n2 - s2 + 1.0));
      }
      const double mx = *std::max_element(logw.begin(), logw.end());
      std::vector<double> w(logw.size());
      double total = 0.0;
      for (size_t i = 0; i < logw.size(); ++i) total += w[i] = std::exp(logw[i] - mx);
      double u = rng.uniform() * total;
      size_t pick = 0;
      for (; pick + 1 < w.size() && u > w[pick]; ++pick) u -= w[pick];
      const auto [s1, s2] = facts[pick];
      const Support rows = sample_subset(spec.n1, s1, rng);
      const Support cols = sample_subset(spec.n2, s2, rng);
      Support out;
      for (int32_t r : rows)
        for (int32_t c : cols) out.push_back((r - 1) * spec.n2 + c);
      std::sort(out.begin(), out.end());
      return out;
    }
  }
  throw std::invalid_argument("sample_support: unknown class kind");
}

std::vector<Support> corner_case_supports(const ClassSpec& spec) {
  std::vector<Support> out;
  auto add = [&](Support s) {
    std::sort(s.begin(), s.end());
    if (std::find(out.begin(), out.end(), s) == out.end() && spec.is_member(s))
      out.push_back(std::move(s));
  };
  switch (spec.kind) {
    case ClassKind::SSet: {
      Support first(spec.s), last(spec.s);
      std::iota(first.begin(), first.end(), 1);
      std::iota(last.begin(), last.end(), spec.n - spec.s + 1);
      add(first);
      add(last);
      if (spec.s >= 2 && spec.n > spec.s) {
        Support spread(first.begin(), first.end() - 1);
        spread.push_back(spec.n);
        add(spread);
      }
      break;
    }
    case ClassKind::SInterval: {
      Support first(spec.s), last(spec.s);
      std::iota(first.begin(), first.end(), 1);
      std::iota(last.begin(), last.end(), spec.n - spec.s + 1);
      add(first);
      add(last);
      break;
    }
    case ClassKind::UnionIntervals: {
      Support left, right, spread;
      for (int32_t j = 0; j < spec.k; ++j)
        for (int32_t x = 0; x < spec.s; ++x) {
          left.push_back(j * spec.s + 1 + x);
          right.push_back(spec.n - (spec.k - j) * spec.s + 1 + x);
        }
      add(left);
      add(right);
      for (int32_t j = 0; j + 1 < spec.k; ++j)
        for (int32_t x = 0; x < spec.s; ++x) spread.push_back(j * spec.s + 1 + x);
      for (int32_t x = 0; x < spec.s; ++x) spread.push_back(spec.n - spec.s + 1 + x);
      add(spread);
      break;
    }
    case ClassKind::SStar: {
      std::vector<int32_t> low, high;
      for (int32_t w = 2; w <= spec.s + 1; ++w) low.push_back(w);
      for (int32_t w = spec.p - spec.s; w <= spec.p - 1; ++w) high.push_back(w);
      add(star_edges(spec.p, 1, low));
      add(star_edges(spec.p, spec.p, high));
      break;
    }
    case ClassKind::UnionStars: {
      const auto packing = greedy_star_packing(spec.p, spec.s);
      if (static_cast<int32_t>(packing.size()) >= spec.k) {
        Support acc;
        for (int32_t j = 0; j < spec.k; ++j) merge_into(acc, packing[j].edges);
        add(acc);
        Support acc2;
        for (int32_t j = 0; j < spec.k; ++j)
          merge_into(acc2, packing[packing.size() - 1 - j].edges);
        add(acc2);
      }
      break;
    }
    case ClassKind::Submatrix: {
      // most-square admissible factorization
      int32_t bs1 = -1;
      for (int32_t s1 = 1; s1 <= spec.s; ++s1) {
        if (spec.s % s1 != 0) continue;
        const int32_t s2 = spec.s / s1;
        if (s1 > spec.n1 || s2 > spec.n2) continue;
        if (bs1 < 0 || std::abs(s1 - s2) < std::abs(bs1 - spec.s / bs1)) bs1 = s1;
      }
      const int32_t bs2 = spec.s / bs1;
      Support tl, br;
      for (int32_t r = 1; r <= bs1; ++r)
        for (int32_t c = 1; c <= bs2; ++c) tl.push_back((r - 1) * spec.n2 + c);
      for (int32_t r = spec.n1 - bs1 + 1; r <= spec.n1; ++r)
        for (int32_t c = spec.n2 - bs2 + 1; c <= spec.n2; ++c) br.push_back((r - 1) * spec.n2 + c);
      add(tl);
      add(br);
      break;
    }
  }
  if (out.empty()) throw std::runtime_error("corner_case_supports: no valid corner member found");
  return out;
}

void ExperimentConfig::validate() const {
  spec.validate();
  if (mu_grid.empty()) throw std::invalid_argument("ExperimentConfig: mu_grid must be non-empty");
  for (size_t i = 0; i < mu_grid.size(); ++i) {
    if (!(mu_grid[i] > 0)) throw std::invalid_argument("ExperimentConfig: mu must be positive");
    if (i > 0 && mu_grid[i] <= mu_grid[i - 1])
      throw std::invalid_argument("ExperimentConfig: mu_grid must be strictly increasing");
  }
  if (!(m > 0)) throw std::invalid_argument("ExperimentConfig: m must be positive");
  if (trials < 1) throw std::invalid_argument("ExperimentConfig: trials must be >= 1");
  if (!(target > 0 && target < 1))
    throw std::invalid_argument("ExperimentConfig: target must lie in (0, 1)");
  if (!(eta > 0)) throw std::invalid_argument("ExperimentConfig: eta must be positive");
  if (support_selection == SupportSelection::FixedList && fixed_supports.empty())
    throw std::invalid_argument("ExperimentConfig: FixedList needs fixed_supports");
}

int32_t resolve_threads(int32_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ASL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int32_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int32_t>(hw) : 1;
}

double wilson_half_width(int64_t x, int64_t t) {
  if (t <= 0) return 0.0;
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double z2 = z * z;
  const double phat = static_cast<double>(x) / t;
  const double denom = 1.0 + z2 / t;
  const double half = z * std::sqrt(phat * (1.0 - phat) / t + z2 / (4.0 * t * t)) / denom;
  return half;
}

namespace {

TrialOutcome run_one_trial(const ExperimentConfig& config, double mu, int32_t grid_index,
                           int32_t trial) {
  const uint64_t key = (static_cast<uint64_t>(grid_index) << 32) | static_cast<uint32_t>(trial);
  Rng rng = Rng::for_trial(config.base_seed, key);

  Support support;
  switch (config.support_selection) {
    case SupportSelection::UniformOverClass:
      support = sample_support(config.spec, rng);
      break;
    case SupportSelection::FixedList:
      support = config.fixed_supports[trial % config.fixed_supports.size()];
      break;
    case SupportSelection::CornerCases: {
      const auto corners = corner_case_supports(config.spec);
      support = corners[trial % corners.size()];
      break;
    }
  }
  const SignalInstance signal(config.spec.n, mu, support);

  TrialOutcome o;
  if (config.procedure == Procedure::Adaptive) {
    // A Hamming target tightens the per-test schedule: one test error costs
    // up to two support errors (the size constraint forces a compensating
    // coordinate), so the unstructured schedule gets eps/2; structured
    // classes run at the error-probability target delta = eps/|S|.
    const bool structured = config.spec.kind != ClassKind::SSet;
    double alloc_target = config.target;
    if (config.metric == Metric::Hamming)
      alloc_target = structured ? config.target / config.spec.support_size()
                                : config.target / 2.0;
    const AllocationRule rule = AllocationRule::for_class(config.spec, alloc_target);
    const int32_t j_cap = default_j_cap(config.spec, alloc_target);
    auto strategy = make_strategy(config.spec, j_cap);
    BudgetLedger ledger(config.m, config.budget_cap_factor);
    const RunResult r = run_adaptive(config.spec, *strategy, rule, signal, config.eta, ledger, rng);
    o.hamming = r.hamming;
    o.exact = r.hamming == 0;
    o.precision = r.total_precision;
    o.truncated = r.truncated;
    o.tests = r.tests_run;
    o.full_size = r.estimate.size() == support.size();
  } else {
    const RunResult r = run_nonadaptive(config.spec, signal, config.m, rng);
    o.hamming = r.hamming;
    o.exact = r.hamming == 0;
    o.precision = r.total_precision;
    o.truncated = false;
    o.tests = r.tests_run;
    o.full_size = r.estimate.size() == support.size();
  }
  return o;
}

}  // namespace

std::vector<TrialOutcome> run_trials_detailed(const ExperimentConfig& config, double mu,
                                              int32_t grid_index) {
  config.validate();
  const int32_t trials = config.trials;
  std::vector<TrialOutcome> out(trials);
  const int32_t workers = std::min<int32_t>(resolve_threads(config.threads), trials);
  if (workers <= 1) {
    for (int32_t i = 0; i < trials; ++i) out[i] = run_one_trial(config, mu, grid_index, i);
    return out;
  }
  std::atomic<int32_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int32_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const int32_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= trials) return;
        out[i] = run_one_trial(config, mu, grid_index, i);
      }
    });
  for (auto& t : pool) t.join();
  return out;
}

Summary summarize(const std::vector<TrialOutcome>& outcomes, double mu, Procedure procedure,
                  uint64_t seed) {
  Summary s;
  s.mu = mu;
  s.procedure = procedure;
  s.trials = static_cast<int32_t>(outcomes.size());
  s.seed = seed;
  if (outcomes.empty()) return s;
  const double t = static_cast<double>(outcomes.size());
  double sum_h = 0, sum_p = 0;
  int64_t errors = 0, truncs = 0;
  for (const auto& o : outcomes) {
    sum_h += o.hamming;
    sum_p += o.precision;
    errors += !o.exact;
    truncs += o.truncated;
  }
  s.mean_hamming = sum_h / t;
  s.mean_precision = sum_p / t;
  s.err_prob = static_cast<double>(errors) / t;
  s.trunc_rate = static_cast<double>(truncs) / t;
  double var_h = 0, var_p = 0;
  for (const auto& o : outcomes) {
    var_h += (o.hamming - s.mean_hamming) * (o.hamming - s.mean_hamming);
    var_p += (o.precision - s.mean_precision) * (o.precision - s.mean_precision);
  }
  if (outcomes.size() > 1) {
    var_h /= (t - 1.0);
    var_p /= (t - 1.0);
  } else {
    var_h = var_p = 0.0;
  }
  const double z = 1.959963984540054;
  s.hamming_ci = z * std::sqrt(var_h / t);
  s.prec_ci = z * std::sqrt(var_p / t);
  s.err_ci = wilson_half_width(errors, outcomes.size());
  return s;
}

Summary run_trials(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto outcomes = run_trials_detailed(config, config.mu_grid.front(), 0);
  Summary s = summarize(outcomes, config.mu_grid.front(), config.procedure, config.base_seed);
  if (config.record_wall_time) {
    const auto t1 = std::chrono::steady_clock::now();
    s.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  return s;
}

double SweepResult::threshold_at(double level) const {
  for (const auto& r : rows)
    if (r.err_prob <= level) return r.mu;
  return std::numeric_limits<double>::quiet_NaN();
}

SweepResult phase_sweep(const ExperimentConfig& config) {
  config.validate();
  if (config.mu_grid.size() < 3)
    throw std::invalid_argument("phase_sweep: grid length must be >= 3");
  SweepResult res;
  for (size_t gi = 0; gi < config.mu_grid.size(); ++gi) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto outcomes = run_trials_detailed(config, config.mu_grid[gi], static_cast<int32_t>(gi));
    Summary s = summarize(outcomes, config.mu_grid[gi], config.procedure, config.base_seed);
    if (config.record_wall_time) {
      const auto t1 = std::chrono::steady_clock::now();
      s.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    }
    res.rows.push_back(s);
  }
  return res;
}

std::vector<CalibrationRow> slrt_calibration(double mu, double alpha, double beta,
                                             const std::vector<double>& gammas, int32_t trials,
                                             uint64_t base_seed, int32_t threads) {
  if (trials < 1) throw std::invalid_argument("slrt_calibration: trials must be >= 1");
  for (size_t i = 1; i < gammas.size(); ++i)
    if (gammas[i] >= gammas[i - 1])
      throw std::invalid_argument("slrt_calibration: gamma grid must be decreasing");
  std::vector<CalibrationRow> rows;
  const SignalInstance h0(1, mu, {});
  const SignalInstance h1(1, mu, {1});
  const int32_t workers = std::min<int32_t>(resolve_threads(threads), trials);
  for (size_t gi = 0; gi < gammas.size(); ++gi) {
    const double gamma = gammas[gi];
    const SlrtConfig cfg = SlrtConfig::make(alpha, beta, mu, gamma);
    std::vector<int64_t> n0(trials), n1(trials);
    std::vector<int8_t> d0(trials), d1(trials);
    auto body = [&](int32_t i) {
      Rng rng = Rng::for_trial(base_seed, (static_cast<uint64_t>(gi) << 33) | (uint64_t(i) << 1));
      BudgetLedger ledger(1.0, -1.0);  // uncapped
      const auto o0 = run_slrt(h0, 1, cfg, ledger, rng);
      n0[i] = o0.samples;
      d0[i] = o0.decision;
      Rng rng1 = Rng::for_trial(base_seed, (static_cast<uint64_t>(gi) << 33) | (uint64_t(i) << 1) | 1);
      BudgetLedger ledger1(1.0, -1.0);
      const auto o1 = run_slrt(h1, 1, cfg, ledger1, rng1);
      n1[i] = o1.samples;
      d1[i] = o1.decision;
    };
    if (workers <= 1) {
      for (int32_t i = 0; i < trials; ++i) body(i);
    } else {
      std::atomic<int32_t> next{0};
      std::vector<std::thread> pool;
      for (int32_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (;;) {
            const int32_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= trials) return;
            body(i);
          }
        });
      for (auto& t : pool) t.join();
    }
    CalibrationRow row;
    row.gamma = gamma;
    row.trials = trials;
    int64_t fp = 0, fn = 0, s0 = 0, s1 = 0;
    for (int32_t i = 0; i < trials; ++i) {
      fp += d0[i] == 1;
      fn += d1[i] == 0;
      s0 += n0[i];
      s1 += n1[i];
    }
    row.alpha_hat = static_cast<double>(fp) / trials;
    row.beta_hat = static_cast<double>(fn) / trials;
    row.gamma_mean_n_h0 = gamma * static_cast<double>(s0) / trials;
    row.gamma_mean_n_h1 = gamma * static_cast<double>(s1) / trials;
    row.bounds = expected_precision_bounds(alpha, beta, mu);
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string calibration_csv(const std::vector<CalibrationRow>& rows) {
  std::ostringstream os;
  os << "gamma,alpha_hat,beta_hat,gamma_mean_n_h0,gamma_mean_n_h1,"
        "lower_h0,upper_h0,lower_h1,upper_h1,trials\n";
  for (const auto& r : rows)
    os << fmt_double(r.gamma) << ',' << fmt_double(r.alpha_hat) << ',' << fmt_double(r.beta_hat)
       << ',' << fmt_double(r.gamma_mean_n_h0) << ',' << fmt_double(r.gamma_mean_n_h1) << ','
       << fmt_double(r.bounds.lower_h0) << ',' << fmt_double(r.bounds.upper_h0) << ','
       << fmt_double(r.bounds.lower_h1) << ',' << fmt_double(r.bounds.upper_h1) << ','
       << r.trials << '\n';
  return os.str();
}

std::string summaries_csv(const ExperimentConfig& config, const std::vector<Summary>& rows) {
  std::ostringstream os;
  os << "class,n,s,k,p,n1,n2,procedure,mu,m,target,trials,mean_hamming,hamming_ci,"
        "err_prob,err_ci,mean_precision,prec_ci,trunc_rate,seed,wall_ms\n";
  const ClassSpec& c = config.spec;
  for (const auto& r : rows) {
    os << c.kind_name() << ',' << c.n << ',' << c.s << ','
       << (c.kind == ClassKind::UnionIntervals || c.kind == ClassKind::UnionStars ? c.k : 0) << ','
       << c.p << ',' << c.n1 << ',' << c.n2 << ','
       << (r.procedure == Procedure::Adaptive ? "adaptive" : "nonadaptive") << ','
       << fmt_double(r.mu) << ',' << fmt_double(config.m) << ',' << fmt_double(config.target)
       << ',' << r.trials << ',' << fmt_double(r.mean_hamming) << ',' << fmt_double(r.hamming_ci)
       << ',' << fmt_double(r.err_prob) << ',' << fmt_double(r.err_ci) << ','
       << fmt_double(r.mean_precision) << ',' << fmt_double(r.prec_ci) << ','
       << fmt_double(r.trunc_rate) << ',' << r.seed << ',' << fmt_double(r.wall_ms) << '\n';
  }
  return os.str();
}

}  // namespace asl
