#include <doctest.h>

#include <cmath>

#include "asl/bounds.hpp"
#include "asl/errors.hpp"
#include "asl/rng.hpp"
#include "asl/star_packing.hpp"

using namespace asl;

namespace {

BoundQuery q(ClassSpec spec, double m, double target, Metric metric, Direction dir,
             bool empty_set = false) {
  BoundQuery out;
  out.spec = std::move(spec);
  out.m = m;
  out.target = target;
  out.metric = metric;
  out.direction = dir;
  out.include_empty_set = empty_set;
  return out;
}

}  // namespace

TEST_CASE("sufficient: s-sets worked value and 1/sqrt(m) scaling") {
  // independent scalar evaluation: sqrt(2 ln 200 + 0.02 ln 20000)
  const double direct = std::sqrt(2.0 * std::log(200.0) + 0.02 * std::log(20000.0));
  const auto r = sufficient_mu(q(ClassSpec::sset(1000, 10), 1000, 0.1, Metric::Hamming,
                                Direction::Sufficient));
  CHECK(r.formula_id == "prop2");
  CHECK(r.mu_threshold == doctest::Approx(direct).epsilon(1e-12));
  CHECK(r.mu_threshold == doctest::Approx(3.2855).epsilon(1e-3));

  const auto r4 = sufficient_mu(q(ClassSpec::sset(1000, 10), 4000, 0.1, Metric::Hamming,
                                 Direction::Sufficient));
  CHECK(r4.mu_threshold == doctest::Approx(r.mu_threshold / 2.0).epsilon(1e-12));
}

TEST_CASE("sufficient: interval worked value") {
  const double direct = std::sqrt(0.125 * std::log(20.0) + 0.03125 * std::log(40960.0));
  const auto r = sufficient_mu(q(ClassSpec::interval(1024, 16), 1024, 0.1, Metric::ProbError,
                                Direction::Sufficient));
  CHECK(r.formula_id == "prop4");
  CHECK(r.mu_threshold == doctest::Approx(direct).epsilon(1e-12));
  CHECK(r.mu_threshold == doctest::Approx(0.8404).epsilon(1e-3));
}

TEST_CASE("sufficient: Hamming target tightens delta to eps/|S|") {
  const auto prob = sufficient_mu(q(ClassSpec::interval(1024, 16), 1024, 0.1 / 16.0,
                                   Metric::ProbError, Direction::Sufficient));
  const auto ham = sufficient_mu(q(ClassSpec::interval(1024, 16), 1024, 0.1, Metric::Hamming,
                                  Direction::Sufficient));
  CHECK(ham.mu_threshold == doctest::Approx(prob.mu_threshold).epsilon(1e-12));
}

TEST_CASE("nonadaptive necessary: worked values") {
  {
    const auto r = necessary_mu_nonadaptive(q(ClassSpec::sset(100, 2), 100, 0.1,
                                             Metric::ProbError, Direction::NecessaryNonAdaptive));
    const double direct = std::sqrt(0.8 * 0.25 * std::log(4949.0));
    CHECK(r.mu_threshold == doctest::Approx(direct).epsilon(1e-12));
    CHECK(r.mu_threshold == doctest::Approx(1.3044).epsilon(1e-3));
  }
  {
    const auto r = necessary_mu_nonadaptive(q(ClassSpec::interval(100, 10), 100, 0.1,
                                             Metric::ProbError, Direction::NecessaryNonAdaptive));
    const double direct = std::sqrt(0.8 * 0.05 * std::log(9.0));
    CHECK(r.mu_threshold == doctest::Approx(direct).epsilon(1e-12));
    CHECK(r.mu_threshold == doctest::Approx(0.2965).epsilon(1e-3));
  }
}

TEST_CASE("nonadaptive necessary: eps >= 1/2 gives the trivial zero threshold") {
  const auto r = necessary_mu_nonadaptive(q(ClassSpec::sset(100, 2), 100, 0.5, Metric::ProbError,
                                           Direction::NecessaryNonAdaptive));
  CHECK(r.mu_threshold == 0.0);
}

TEST_CASE("nonadaptive necessary: failed transparency condition is flagged") {
  // (1-2eps) ln(|C|-1) < 1 + sqrt(2): value still reported, with a warning note
  const auto r = necessary_mu_nonadaptive(q(ClassSpec::interval(100, 10), 100, 0.4,
                                           Metric::ProbError, Direction::NecessaryNonAdaptive));
  CHECK(r.mu_threshold > 0.0);
  bool flagged = false;
  for (const auto& note : r.notes) flagged |= note.find("transparency") != std::string::npos;
  CHECK(flagged);
  // a near-singleton subclass has no reduction at all
  CHECK_THROWS_AS(necessary_mu_nonadaptive(q(ClassSpec::interval(6, 3), 10, 0.1,
                                            Metric::ProbError, Direction::NecessaryNonAdaptive)),
                  RefusalError);
}

TEST_CASE("adaptive necessary: worked values") {
  {
    const auto r = necessary_mu_adaptive(q(ClassSpec::sset(100, 10), 100, 0.1, Metric::Hamming,
                                          Direction::NecessaryAdaptive));
    const double direct =
        std::sqrt(1.8 * (std::log(10.0) + std::log(90.0 / 101.0) + std::log(5.0)));
    CHECK(r.formula_id == "prop12");
    CHECK(r.mu_threshold == doctest::Approx(direct).epsilon(1e-12));
    CHECK(r.mu_threshold == doctest::Approx(2.6141).epsilon(1e-3));
  }
  {
    const auto r = necessary_mu_adaptive(q(ClassSpec::interval(100, 10), 100, 0.05,
                                          Metric::ProbError, Direction::NecessaryAdaptive, true));
    const double direct = std::sqrt(0.2 * std::log(10.0));
    CHECK(r.formula_id == "prop14i");
    CHECK(r.mu_threshold == doctest::Approx(direct).epsilon(1e-12));
    CHECK(r.mu_threshold == doctest::Approx(0.6786).epsilon(1e-3));
  }
}

TEST_CASE("adaptive necessary: (1-eps) factor vanishes at eps -> 1") {
  const auto r = necessary_mu_adaptive(q(ClassSpec::interval(100, 10), 100, 0.999999,
                                        Metric::ProbError, Direction::NecessaryAdaptive));
  CHECK(r.formula_id == "prop13");
  CHECK(r.mu_threshold == doctest::Approx(0.0).epsilon(1e-4));
}

TEST_CASE("adaptive necessary: unsupported combinations refuse, naming a proposition") {
  try {
    necessary_mu_adaptive(q(ClassSpec::sset(100, 10), 100, 0.1, Metric::ProbError,
                           Direction::NecessaryAdaptive));
    FAIL("expected refusal");
  } catch (const RefusalError& e) {
    CHECK(std::string(e.what()).find("Hamming") != std::string::npos);
  }
  CHECK_THROWS_AS(necessary_mu_adaptive(q(ClassSpec::union_intervals(100, 5, 2), 100, 0.1,
                                         Metric::ProbError, Direction::NecessaryAdaptive)),
                  RefusalError);
  CHECK_THROWS_AS(necessary_mu_adaptive(q(ClassSpec::star(20, 4), 100, 0.1, Metric::Hamming,
                                         Direction::NecessaryAdaptive)),
                  RefusalError);
}

TEST_CASE("adaptive necessary: N(p,s) flag switches to the greedy packing count") {
  auto base = q(ClassSpec::star(20, 4), 100, 0.1, Metric::ProbError, Direction::NecessaryAdaptive);
  const auto with_bound = necessary_mu_adaptive(base);
  base.use_greedy_packing = true;
  const auto with_greedy = necessary_mu_adaptive(base);
  const double nb = star_packing_bound(20, 4);
  const double ng = double(greedy_star_packing(20, 4).size());
  CHECK(with_bound.mu_threshold == doctest::Approx(0.9 * std::sqrt(nb / 200.0)).epsilon(1e-12));
  CHECK(with_greedy.mu_threshold == doctest::Approx(0.9 * std::sqrt(ng / 200.0)).epsilon(1e-12));
  CHECK(ng >= nb - 1e-9);
}

TEST_CASE("terms itemization: mu^2 equals the sum of reported terms exactly") {
  std::vector<BoundQuery> queries = {
      q(ClassSpec::sset(1000, 10), 1000, 0.1, Metric::Hamming, Direction::Sufficient),
      q(ClassSpec::star(64, 8), 2016, 0.1, Metric::ProbError, Direction::Sufficient),
      q(ClassSpec::union_stars(64, 8, 3), 2016, 0.1, Metric::ProbError, Direction::Sufficient),
      q(ClassSpec::submatrix(32, 32, 16), 1024, 0.1, Metric::ProbError, Direction::Sufficient),
      q(ClassSpec::sset(100, 10), 100, 0.1, Metric::Hamming, Direction::NecessaryAdaptive),
      q(ClassSpec::sset(100, 2), 100, 0.1, Metric::ProbError, Direction::NecessaryNonAdaptive),
  };
  for (const auto& query : queries) {
    const auto r = bound_mu(query);
    CHECK(r.mu_threshold == std::sqrt(r.mu_squared()));
    CHECK(!r.terms.empty());
  }
}

TEST_CASE("monotonicity: thresholds non-increasing in m and in the target") {
  const std::vector<double> ms = {500, 1000, 2000, 4000};
  const std::vector<double> targets = {0.02, 0.05, 0.1, 0.2};
  std::vector<BoundQuery> base = {
      q(ClassSpec::sset(2000, 12), 1, 0.1, Metric::Hamming, Direction::Sufficient),
      q(ClassSpec::interval(1024, 16), 1, 0.1, Metric::ProbError, Direction::Sufficient),
      q(ClassSpec::union_intervals(1024, 16, 4), 1, 0.1, Metric::ProbError, Direction::Sufficient),
      q(ClassSpec::star(64, 8), 1, 0.1, Metric::ProbError, Direction::Sufficient),
      q(ClassSpec::sset(2000, 12), 1, 0.1, Metric::Hamming, Direction::NecessaryAdaptive),
      q(ClassSpec::sset(2000, 12), 1, 0.1, Metric::ProbError, Direction::NecessaryNonAdaptive),
  };
  for (auto query : base) {
    double prev = 1e300;
    for (double m : ms) {
      query.m = m;
      const double v = bound_mu(query).mu_threshold;
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
    query.m = 1000;
    prev = 1e300;
    for (double t : targets) {
      query.target = t;
      const double v = bound_mu(query).mu_threshold;
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("cross-consistency: adaptive necessary <= sufficient at matched Hamming targets") {
  // 50-point grid over classes and parameters with s <= n^0.4
  int points = 0;
  const double eps = 0.1;
  for (int ni : {256, 1024, 4096, 16384}) {
    for (int si : {2, 3, 4, 6, 8, 12, 16}) {
      if (std::pow(double(ni), 0.4) < si) continue;
      const double m = ni;
      {
        const auto nec = necessary_mu_adaptive(q(ClassSpec::sset(ni, si), m, eps, Metric::Hamming,
                                                Direction::NecessaryAdaptive));
        const auto suf = sufficient_mu(q(ClassSpec::sset(ni, si), m, eps, Metric::Hamming,
                                        Direction::Sufficient));
        CHECK(nec.mu_threshold <= suf.mu_threshold);
        ++points;
      }
      {
        const auto nec = necessary_mu_adaptive(q(ClassSpec::interval(ni, si), m, eps,
                                                Metric::Hamming, Direction::NecessaryAdaptive,
                                                true));
        const auto suf = sufficient_mu(q(ClassSpec::interval(ni, si), m, eps, Metric::Hamming,
                                        Direction::Sufficient));
        CHECK(nec.mu_threshold <= suf.mu_threshold);
        ++points;
      }
      if (si >= 3 && 2 * si <= ni) {
        const auto nec = necessary_mu_adaptive(q(ClassSpec::union_intervals(ni, si, 2), m, eps,
                                                Metric::Hamming, Direction::NecessaryAdaptive));
        const auto suf = sufficient_mu(q(ClassSpec::union_intervals(ni, si, 2), m, eps,
                                        Metric::Hamming, Direction::Sufficient));
        CHECK(nec.mu_threshold <= suf.mu_threshold);
        ++points;
      }
    }
  }
  // star and submatrix classes on their own parameter grids
  for (int p : {24, 48, 64, 96}) {
    for (int s : {4, 6, 8}) {
      const ClassSpec star2 = ClassSpec::union_stars(p, s, 2);
      const double m = star2.n;
      const auto nec = necessary_mu_adaptive(q(star2, m, eps, Metric::Hamming,
                                              Direction::NecessaryAdaptive));
      const auto suf = sufficient_mu(q(star2, m, eps, Metric::Hamming, Direction::Sufficient));
      CHECK(nec.mu_threshold <= suf.mu_threshold);
      ++points;
    }
  }
  for (int side : {16, 32, 64}) {
    for (int s : {4, 16}) {
      const ClassSpec sm = ClassSpec::submatrix(side, side, s);
      const auto nec = necessary_mu_adaptive(q(sm, sm.n, eps, Metric::Hamming,
                                              Direction::NecessaryAdaptive, true));
      const auto suf = sufficient_mu(q(sm, sm.n, eps, Metric::Hamming, Direction::Sufficient));
      CHECK(nec.mu_threshold <= suf.mu_threshold);
      ++points;
    }
  }
  CHECK(points >= 50);
}

TEST_CASE("nonadaptive/adaptive gap grows like sqrt(log n / log s) along n = m") {
  double prev_ratio = 0.0;
  for (int e = 10; e <= 20; e += 2) {
    const int n = 1 << e;
    const int s = std::max(2, int(std::pow(double(n), 0.25)));
    const auto na = necessary_mu_nonadaptive(q(ClassSpec::sset(n, s), n, 0.1, Metric::ProbError,
                                              Direction::NecessaryNonAdaptive));
    const auto ad = necessary_mu_adaptive(q(ClassSpec::sset(n, s), n, 0.1, Metric::Hamming,
                                           Direction::NecessaryAdaptive));
    const double ratio = na.mu_threshold / ad.mu_threshold;
    CHECK(ratio > prev_ratio * 0.999);  // increasing over the grid
    prev_ratio = ratio;
  }
}

TEST_CASE("sufficient: union-of-stars bound warns when delta*k degrades it") {
  const auto r = sufficient_mu(q(ClassSpec::union_stars(64, 8, 3), 2016, 0.3, Metric::ProbError,
                               Direction::Sufficient));
  bool warned = false;
  for (const auto& note : r.notes) warned |= note.find("delta*k") != std::string::npos;
  CHECK(warned);
  const auto quiet = sufficient_mu(q(ClassSpec::union_stars(64, 8, 3), 2016, 0.1,
                                    Metric::ProbError, Direction::Sufficient));
  for (const auto& note : quiet.notes) CHECK(note.find("delta*k") == std::string::npos);
}

TEST_CASE("fano: examples") {
  CHECK(fano_error_lower_bound(2, 0.0) == doctest::Approx(0.5));
  CHECK(fano_error_lower_bound(100, 0.0) == doctest::Approx(0.5));
  const double M = std::exp(4.0);
  const double direct = 0.5 * (1.0 - (1.0 + std::sqrt(0.5)) / 4.0);
  CHECK(fano_error_lower_bound(M, 1.0) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(fano_error_lower_bound(M, 1.0) == doctest::Approx(0.2866).epsilon(1e-3));
  CHECK(fano_error_lower_bound(10, 1e6) == 0.0);  // clamped
  CHECK_THROWS_AS(fano_error_lower_bound(10, 1.0, 1.5), std::domain_error);
}

TEST_CASE("scaling table: rows instantiate the tabulated laws") {
  const auto rows = scaling_table(
      {ClassSpec::sset(4096, 8), ClassSpec::union_intervals(4096, 16, 4),
       ClassSpec::union_stars(64, 8, 3), ClassSpec::submatrix(64, 64, 16)},
      4096.0);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].class_name == "s-sets");
  CHECK(rows[0].nonadaptive_necessary == "sqrt(log n)");
  // s-sets at n = m: adaptive columns agree, nonadaptive keeps the log n factor
  CHECK(rows[0].adaptive_necessary_value == doctest::Approx(rows[0].adaptive_sufficient_value));
  CHECK(rows[0].nonadaptive_necessary_value > rows[0].adaptive_sufficient_value);
  // union-of-stars sufficient column carries the squared log
  const double n = 64 * 63 / 2.0;
  CHECK(rows[2].adaptive_sufficient_value ==
        doctest::Approx(std::sqrt(n / (8 * 4096.0) * std::pow(std::log(24.0), 2))));
  // all three interval columns share the 1/sqrt(s) factor: scaling check at 4x s
  const auto rows_s = scaling_table({ClassSpec::union_intervals(4096, 64, 4)}, 4096.0);
  const double f = rows_s[0].nonadaptive_necessary_value / rows[1].nonadaptive_necessary_value;
  CHECK(f < 0.75);  // larger s shrinks all columns
  const std::string csv = scaling_table_csv(rows);
  CHECK(csv.find("class,") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}
