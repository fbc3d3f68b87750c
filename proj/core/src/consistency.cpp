#include "asl/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace asl {

namespace {

// Saturated binomial "how many ways": 0, 1, or 2 (= "two or more").
int sat_choose(int64_t n, int64_t r) {
  if (r < 0 || r > n) return 0;
  if (r == 0 || r == n) return 1;
  return 2;
}

int sat_add(int a, int b) { return std::min(a + b, 2); }
int sat_mul(int a, int b) { return std::min(a * b, 2); }

class EngineBase {
 public:
  virtual ~EngineBase() = default;
  // `labels`: 0 unlabeled, 1 labeled zero, 2 labeled one.
  virtual void recompute(const std::vector<int8_t>& labels) = 0;
  Verdict verdict = Verdict::Many;
  Support unique;
};

// ---------------------------------------------------------------- s-sets ----
// Consistency count is C(free, s - positives): zero, one or many decided from
// the counters alone.
class SSetEngine final : public EngineBase {
 public:
  SSetEngine(int32_t n, int32_t s) : n_(n), s_(s) {}

  void recompute(const std::vector<int8_t>& labels) override {
    int32_t pos = 0, neg = 0;
    for (int32_t i = 1; i <= n_; ++i) {
      if (labels[i] == 2) ++pos;
      else if (labels[i] == 1) ++neg;
    }
    const int32_t need = s_ - pos;
    const int32_t free = n_ - pos - neg;
    const int c = sat_choose(free, need);
    if (c == 0) {
      verdict = Verdict::None;
    } else if (c == 1) {
      verdict = Verdict::Unique;
      unique.clear();
      for (int32_t i = 1; i <= n_; ++i)
        if (labels[i] == 2 || (need == free && labels[i] == 0)) unique.push_back(i);
    } else {
      verdict = Verdict::Many;
    }
  }

 private:
  int32_t n_, s_;
};

// ------------------------------------------------------------- intervals ----
// Feasible start positions, killed incrementally: a positive at j narrows the
// window to [j-s+1, j]; a negative at j kills starts in [j-s+1, j].
class IntervalEngine final : public EngineBase {
 public:
  IntervalEngine(int32_t n, int32_t s)
      : n_(n), s_(s), lim_(n - s + 1), alive_(lim_ + 1, 1), count_(lim_), lo_(1), hi_(lim_) {
    refresh(nullptr);
  }

  void recompute(const std::vector<int8_t>& labels) override { refresh(&labels); }

  void observe(Coord j, bool label) {
    if (label) {
      shrink_to(std::max<int32_t>(lo_, j - s_ + 1), std::min<int32_t>(hi_, j));
    } else {
      for (int32_t a = std::max<int32_t>(lo_, j - s_ + 1); a <= std::min<int32_t>(hi_, j); ++a)
        kill(a);
    }
  }

 private:
  void shrink_to(int32_t nlo, int32_t nhi) {
    if (nlo > nhi) {
      for (int32_t a = lo_; a <= hi_; ++a) kill(a);
      lo_ = 1;
      hi_ = 0;
      return;
    }
    for (int32_t a = lo_; a < nlo; ++a) kill(a);
    for (int32_t a = nhi + 1; a <= hi_; ++a) kill(a);
    lo_ = nlo;
    hi_ = nhi;
  }

  void kill(int32_t a) {
    if (a >= 1 && a <= lim_ && alive_[a]) {
      alive_[a] = 0;
      --count_;
    }
  }

  // observe() has already applied the label; this just refreshes the verdict.
  void refresh(const std::vector<int8_t>*) {
    if (count_ <= 0) {
      verdict = Verdict::None;
    } else if (count_ == 1) {
      verdict = Verdict::Unique;
      for (int32_t a = std::max<int32_t>(1, lo_); a <= hi_; ++a)
        if (alive_[a]) {
          unique.resize(s_);
          for (int32_t j = 0; j < s_; ++j) unique[j] = a + j;
          break;
        }
    } else {
      verdict = Verdict::Many;
    }
  }

  int32_t n_, s_, lim_;
  std::vector<int8_t> alive_;
  int32_t count_, lo_, hi_;
};

// ---------------------------------------------------- unions of intervals ----
// Members are placements of k non-overlapping length-s tiles. The count of
// placements consistent with the labels is a left-to-right DP: a tile may not
// cover a negative, and the next tile must start no later than the next
// uncovered positive. Counts are exact in uint64 when the parameters make that
// safe (checked against an a-priori bound); otherwise a saturating scan with
// early exit is used.
class UnionIntervalsEngine final : public EngineBase {
 public:
  UnionIntervalsEngine(int32_t n, int32_t s, int32_t k) : n_(n), s_(s), k_(k), lim_(n - s + 1) {
    const double log2_bound =
        (std::lgamma(double(n_ + k_ + 1)) - std::lgamma(double(k_ + 1)) - std::lgamma(double(n_ + 1))) /
            std::log(2.0) +
        std::log2(double(n_) + 2.0) + 2.0;
    exact_ok_ = log2_bound < 62.0;
  }

  void recompute(const std::vector<int8_t>& labels) override {
    // next positive at or after t
    nextpos_.assign(n_ + 2, n_ + 1);
    for (int32_t t = n_; t >= 1; --t)
      nextpos_[t] = (labels[t] == 2) ? t : nextpos_[t + 1];
    // clean[a]: tile [a, a+s-1] avoids negatives
    clean_.assign(lim_ + 2, 0);
    int32_t negs_in_window = 0;
    for (int32_t i = 1; i <= n_ && i <= s_; ++i) negs_in_window += labels[i] == 1;
    for (int32_t a = 1; a <= lim_; ++a) {
      clean_[a] = negs_in_window == 0;
      if (a + s_ <= n_) negs_in_window += labels[a + s_] == 1;
      negs_in_window -= labels[a] == 1;
    }
    if (exact_ok_) exact_dp();
    else saturating_dp();
  }

 private:
  void exact_dp() {
    // g[j][t] = number of ways to place j tiles with starts >= t covering all
    // positives >= t and avoiding negatives.
    g_.assign(k_ + 1, std::vector<uint64_t>(n_ + s_ + 2, 0));
    for (int32_t t = n_ + 1; t >= 1; --t) g_[0][t] = nextpos_[std::min(t, n_ + 1)] > n_ ? 1 : 0;
    g_[0][n_ + 1] = 1;
    for (int32_t j = 1; j <= k_; ++j) {
      // suffix sums of h[a] = clean[a] * g[j-1][a+s]
      std::vector<uint64_t> suf(lim_ + 2, 0);
      for (int32_t a = lim_; a >= 1; --a)
        suf[a] = suf[a + 1] + (clean_[a] ? g_[j - 1][a + s_] : 0);
      for (int32_t t = 1; t <= n_ + 1; ++t) {
        const int32_t hi = std::min(nextpos_[std::min(t, n_ + 1)], lim_);
        g_[j][t] = (t <= hi) ? suf[t] - suf[hi + 1] : 0;
      }
    }
    const uint64_t total = g_[k_][1];
    finish(total >= 2 ? 2 : static_cast<int>(total),
           [this](int32_t t, int32_t j) { return reconstruct_exact(t, j); });
  }

  void saturating_dp() {
    g_.assign(k_ + 1, std::vector<uint64_t>(n_ + s_ + 2, 0));
    for (int32_t t = n_ + 1; t >= 1; --t) g_[0][t] = nextpos_[std::min(t, n_ + 1)] > n_ ? 1 : 0;
    g_[0][n_ + 1] = 1;
    for (int32_t j = 1; j <= k_; ++j) {
      for (int32_t t = n_ + 1; t >= 1; --t) {
        const int32_t hi = std::min(nextpos_[std::min(t, n_ + 1)], lim_);
        uint64_t acc = 0;
        for (int32_t a = t; a <= hi && acc < 2; ++a)
          if (clean_[a]) acc = std::min<uint64_t>(acc + g_[j - 1][a + s_], 2);
        g_[j][t] = acc;
      }
    }
    const uint64_t total = g_[k_][1];
    finish(static_cast<int>(total),
           [this](int32_t t, int32_t j) { return reconstruct_exact(t, j); });
  }

  int32_t reconstruct_exact(int32_t t, int32_t j) {
    // unique path: the single start a contributing to g[j][t]
    const int32_t hi = std::min(nextpos_[std::min(t, n_ + 1)], lim_);
    for (int32_t a = t; a <= hi; ++a)
      if (clean_[a] && g_[j - 1][a + s_] > 0) return a;
    throw std::logic_error("uintervals reconstruction failed");
  }

  template <typename NextStart>
  void finish(int total, NextStart next_start) {
    if (total == 0) {
      verdict = Verdict::None;
    } else if (total == 1) {
      verdict = Verdict::Unique;
      unique.clear();
      int32_t t = 1;
      for (int32_t j = k_; j >= 1; --j) {
        const int32_t a = next_start(t, j);
        for (int32_t x = 0; x < s_; ++x) unique.push_back(a + x);
        t = a + s_;
      }
    } else {
      verdict = Verdict::Many;
    }
  }

  int32_t n_, s_, k_, lim_;
  bool exact_ok_;
  std::vector<int32_t> nextpos_;
  std::vector<int8_t> clean_;
  std::vector<std::vector<uint64_t>> g_;
};

// ----------------------------------------------------------------- stars ----
// A consistent star is a feasible (center, completion) pair; pairs map to
// distinct edge sets for s >= 2, so the per-center saturated counts add up.
class StarEngine final : public EngineBase {
 public:
  StarEngine(int32_t p, int32_t s) : p_(p), s_(s) {}

  void recompute(const std::vector<int8_t>& labels) override {
    const int32_t n = edge_count(p_);
    std::vector<int32_t> pos(p_ + 1, 0), neg(p_ + 1, 0);
    int32_t pos_total = 0;
    for (Coord e = 1; e <= n; ++e) {
      if (labels[e] == 0) continue;
      auto [u, v] = edge_vertices(p_, e);
      if (labels[e] == 2) {
        ++pos[u];
        ++pos[v];
        ++pos_total;
      } else {
        ++neg[u];
        ++neg[v];
      }
    }
    int total = 0;
    int32_t the_center = 0;
    bool center_forced_full = false;
    for (int32_t v = 1; v <= p_; ++v) {
      if (pos[v] != pos_total) continue;  // some positive edge misses v
      const int32_t need = s_ - pos[v];
      const int32_t free = (p_ - 1) - pos[v] - neg[v];
      const int c = sat_choose(free, need);
      if (c >= 1 && total == 0) {
        the_center = v;
        center_forced_full = (need == free && need > 0);
      }
      total = sat_add(total, c);
      if (total >= 2) break;
    }
    if (total == 0) {
      verdict = Verdict::None;
    } else if (total == 1) {
      verdict = Verdict::Unique;
      unique.clear();
      for (Coord e = 1; e <= n; ++e) {
        if (labels[e] == 2) unique.push_back(e);
        else if (center_forced_full && labels[e] == 0) {
          auto [u, v] = edge_vertices(p_, e);
          if (u == the_center || v == the_center) unique.push_back(e);
        }
      }
    } else {
      verdict = Verdict::Many;
    }
  }

 private:
  int32_t p_, s_;
};

// ------------------------------------------------------- unions of stars ----
// Distinct consistent sets are counted by a bounded witness search (stop at
// two): assign each positive edge to an endpoint, hand out remaining whole
// stars, and fill deficits from unlabeled edges. Completed sets are
// deduplicated because different decompositions can produce the same union.
class UnionStarsEngine final : public EngineBase {
 public:
  UnionStarsEngine(int32_t p, int32_t s, int32_t k) : p_(p), s_(s), k_(k) {
    inc_.resize(p_ + 1);
    for (int32_t u = 1; u <= p_; ++u)
      for (int32_t v = 1; v <= p_; ++v)
        if (v != u) inc_[u].push_back(edge_index(p_, u, v));
    extra_.assign(p_ + 1, 0);
  }

  void recompute(const std::vector<int8_t>& labels) override {
    labels_ = &labels;
    pos_ids_.clear();
    pos_ends_.clear();
    avail_.assign(p_ + 1, 0);
    const int32_t n = edge_count(p_);
    for (Coord e = 1; e <= n; ++e) {
      if (labels[e] == 2) {
        pos_ids_.push_back(e);
        pos_ends_.push_back(edge_vertices(p_, e));
      } else if (labels[e] == 0) {
        auto [u, v] = edge_vertices(p_, e);
        ++avail_[u];
        ++avail_[v];
      }
    }
    found_.clear();
    const int32_t target = k_ * s_;
    if (static_cast<int32_t>(pos_ids_.size()) <= target) {
      load_.assign(p_ + 1, 0);
      sum_ceil_ = 0;
      chosen_.assign(n + 1, 0);
      assign_rec(0);
    }
    if (found_.empty()) {
      verdict = Verdict::None;
    } else if (found_.size() == 1) {
      verdict = Verdict::Unique;
      unique = *found_.begin();
    } else {
      verdict = Verdict::Many;
    }
  }

 private:
  bool done() const { return found_.size() >= 2; }

  void bump(int32_t v, int dir) {
    sum_ceil_ -= (load_[v] + s_ - 1) / s_;
    load_[v] += dir;
    sum_ceil_ += (load_[v] + s_ - 1) / s_;
  }

  void assign_rec(size_t i) {
    if (done() || sum_ceil_ > k_) return;
    if (i == pos_ends_.size()) {
      extras_rec(1, k_ - sum_ceil_);
      return;
    }
    const auto [u, v] = pos_ends_[i];
    for (int32_t c : {u, v}) {
      bump(c, +1);
      assign_rec(i + 1);
      bump(c, -1);
      if (done()) return;
    }
  }

  // Distribute `left` whole extra stars over vertices >= vfirst (multiset).
  void extras_rec(int32_t vfirst, int32_t left) {
    if (done()) return;
    if (left == 0) {
      fills_prepare();
      return;
    }
    for (int32_t v = vfirst; v <= p_; ++v) {
      // an extra star at v needs s unlabeled edges at v beyond the deficit
      // already implied by loads; exact contention is checked in the fill DFS
      if (avail_[v] < s_) continue;
      extra_[v] += 1;
      extras_rec(v, left - 1);
      extra_[v] -= 1;
      if (done()) return;
    }
  }

  void fills_prepare() {
    deficit_vertices_.clear();
    for (int32_t v = 1; v <= p_; ++v) {
      const int32_t stars = (load_[v] + s_ - 1) / s_ + extra_[v];
      const int32_t f = stars * s_ - load_[v];
      if (f < 0) return;
      if (f > 0) {
        if (f > avail_[v]) return;  // necessary condition; contention checked below
        deficit_vertices_.push_back({v, f});
      }
    }
    base_.assign(pos_ids_.begin(), pos_ids_.end());
    fill_rec(0);
  }

  void fill_rec(size_t di) {
    if (done()) return;
    if (di == deficit_vertices_.size()) {
      Support u = base_;
      std::sort(u.begin(), u.end());
      found_.insert(std::move(u));
      return;
    }
    const auto [v, f] = deficit_vertices_[di];
    // candidate unlabeled, unchosen edges at v
    cand_buf_.clear();
    for (Coord e : inc_[v])
      if ((*labels_)[e] == 0 && !chosen_[e]) cand_buf_.push_back(e);
    if (static_cast<int32_t>(cand_buf_.size()) < f) return;
    std::vector<Coord> cand = cand_buf_;
    choose_rec(di, cand, 0, f);
  }

  void choose_rec(size_t di, const std::vector<Coord>& cand, size_t from, int32_t left) {
    if (done()) return;
    if (left == 0) {
      fill_rec(di + 1);
      return;
    }
    for (size_t i = from; i + left <= cand.size(); ++i) {
      const Coord e = cand[i];
      chosen_[e] = 1;
      base_.push_back(e);
      choose_rec(di, cand, i + 1, left - 1);
      base_.pop_back();
      chosen_[e] = 0;
      if (done()) return;
    }
  }

  int32_t p_, s_, k_;
  std::vector<std::vector<Coord>> inc_;
  const std::vector<int8_t>* labels_ = nullptr;
  std::vector<Coord> pos_ids_;
  std::vector<std::pair<int32_t, int32_t>> pos_ends_;
  std::vector<int32_t> avail_;
  std::vector<int32_t> load_;
  std::vector<int32_t> extra_;
  int32_t sum_ceil_ = 0;
  std::vector<int8_t> chosen_;
  std::vector<Coord> base_, cand_buf_;
  std::vector<std::pair<int32_t, int32_t>> deficit_vertices_;
  std::set<Support> found_;
};

// ------------------------------------------------------------ submatrices ----
// Rectangles S1 x S2 with |S1||S2| = s. Positives pin rows/cols, negatives
// exclude them or, when both endpoints are free, forbid picking row and column
// together; those joint constraints are resolved by a pruned search capped at
// two witnesses.
class SubmatrixEngine final : public EngineBase {
 public:
  SubmatrixEngine(int32_t n1, int32_t n2, int32_t s) : n1_(n1), n2_(n2), s_(s) {
    for (int32_t s1 = 1; s1 <= s_; ++s1)
      if (s_ % s1 == 0 && s1 <= n1_ && s_ / s1 <= n2_) facts_.push_back({s1, s_ / s1});
  }

  void recompute(const std::vector<int8_t>& labels) override {
    std::vector<int8_t> prow(n1_ + 1, 0), pcol(n2_ + 1, 0);
    std::vector<std::pair<int32_t, int32_t>> negs;
    for (int32_t r = 1; r <= n1_; ++r)
      for (int32_t c = 1; c <= n2_; ++c) {
        const int8_t l = labels[(r - 1) * n2_ + c];
        if (l == 2) {
          prow[r] = 1;
          pcol[c] = 1;
        } else if (l == 1) {
          negs.push_back({r, c});
        }
      }
    std::vector<int8_t> xrow(n1_ + 1, 0), xcol(n2_ + 1, 0);
    bool contradiction = false;
    for (auto [r, c] : negs) {
      if (prow[r] && pcol[c]) contradiction = true;
      else if (prow[r]) xcol[c] = 1;
      else if (pcol[c]) xrow[r] = 1;
    }
    if (contradiction) {
      verdict = Verdict::None;
      return;
    }
    free_rows_.clear();
    free_cols_.clear();
    int32_t pr = 0, pc = 0;
    for (int32_t r = 1; r <= n1_; ++r) {
      if (prow[r]) ++pr;
      else if (!xrow[r]) free_rows_.push_back(r);
    }
    for (int32_t c = 1; c <= n2_; ++c) {
      if (pcol[c]) ++pc;
      else if (!xcol[c]) free_cols_.push_back(c);
    }
    // residual negatives: both endpoints free; conflict masks over free cols
    col_pos_.assign(n2_ + 1, -1);
    for (size_t i = 0; i < free_cols_.size(); ++i) col_pos_[free_cols_[i]] = static_cast<int32_t>(i);
    row_conflicts_.assign(n1_ + 1, {});
    bool any_residual = false;
    for (auto [r, c] : negs) {
      if (prow[r] || pcol[c]) continue;
      if (col_pos_[c] < 0) continue;  // column already excluded
      bool row_free = !xrow[r] && !prow[r];
      if (!row_free) continue;
      row_conflicts_[r].push_back(col_pos_[c]);
      any_residual = true;
    }

    int total = 0;
    witness_count_ = 0;
    for (auto [s1, s2] : facts_) {
      const int32_t a = s1 - pr, b = s2 - pc;
      if (a < 0 || b < 0) continue;
      if (a > static_cast<int32_t>(free_rows_.size()) || b > static_cast<int32_t>(free_cols_.size()))
        continue;
      int c;
      if (!any_residual) {
        c = sat_mul(sat_choose(static_cast<int32_t>(free_rows_.size()), a),
                    sat_choose(static_cast<int32_t>(free_cols_.size()), b));
        if (c >= 1 && witness_count_ == 0) {
          // record the lexicographically first witness for reconstruction
          witness_rows_.assign(free_rows_.begin(), free_rows_.begin() + a);
          witness_cols_.assign(free_cols_.begin(), free_cols_.begin() + b);
          witness_count_ = 1;
        }
      } else {
        c = count_with_conflicts(a, b);
      }
      total = sat_add(total, c);
      if (total >= 2) break;
    }
    if (total == 0) {
      verdict = Verdict::None;
    } else if (total == 1) {
      verdict = Verdict::Unique;
      unique.clear();
      std::vector<int32_t> rows, cols;
      for (int32_t r = 1; r <= n1_; ++r)
        if (prow[r]) rows.push_back(r);
      for (int32_t c = 1; c <= n2_; ++c)
        if (pcol[c]) cols.push_back(c);
      rows.insert(rows.end(), witness_rows_.begin(), witness_rows_.end());
      cols.insert(cols.end(), witness_cols_.begin(), witness_cols_.end());
      std::sort(rows.begin(), rows.end());
      std::sort(cols.begin(), cols.end());
      for (int32_t r : rows)
        for (int32_t c : cols) unique.push_back((r - 1) * n2_ + c);
      std::sort(unique.begin(), unique.end());
    } else {
      verdict = Verdict::Many;
    }
  }

 private:
  // Count (up to 2) choices of `a` free rows and `b` free cols such that no
  // residual negative has both its row and column selected. Column kills are
  // reference-counted so select/deselect is O(conflicts of the row).
  int count_with_conflicts(int32_t a, int32_t b) {
    sel_rows_.clear();
    kill_count_.assign(free_cols_.size(), 0);
    alive_cols_ = static_cast<int32_t>(free_cols_.size());
    int found = 0;
    rows_rec(0, a, b, found);
    return found;
  }

  void select_row(int32_t r) {
    for (int32_t j : row_conflicts_[r])
      if (kill_count_[j]++ == 0) --alive_cols_;
  }
  void deselect_row(int32_t r) {
    for (int32_t j : row_conflicts_[r])
      if (--kill_count_[j] == 0) ++alive_cols_;
  }

  void rows_rec(size_t from, int32_t left, int32_t b, int& found) {
    if (found >= 2) return;
    if (left == 0) {
      const int cb = sat_choose(alive_cols_, b);
      if (cb == 0) return;
      if (witness_count_ == 0) {
        witness_rows_ = sel_rows_;
        witness_cols_.clear();
        for (size_t j = 0; j < free_cols_.size() && static_cast<int32_t>(witness_cols_.size()) < b; ++j)
          if (kill_count_[j] == 0) witness_cols_.push_back(free_cols_[j]);
        witness_count_ = 1;
      }
      found = sat_add(found, cb);
      return;
    }
    for (size_t i = from; i + left <= free_rows_.size(); ++i) {
      const int32_t r = free_rows_[i];
      select_row(r);
      if (alive_cols_ >= b) {
        sel_rows_.push_back(r);
        rows_rec(i + 1, left - 1, b, found);
        sel_rows_.pop_back();
      }
      deselect_row(r);
      if (found >= 2) return;
    }
  }

  int32_t n1_, n2_, s_;
  std::vector<std::pair<int32_t, int32_t>> facts_;
  std::vector<int32_t> free_rows_, free_cols_, col_pos_;
  std::vector<std::vector<int32_t>> row_conflicts_;
  std::vector<int32_t> kill_count_;
  int32_t alive_cols_ = 0;
  std::vector<int32_t> sel_rows_, witness_rows_, witness_cols_;
  int witness_count_ = 0;
};

}  // namespace

struct ConsistencyTracker::Impl {
  ClassSpec spec;
  std::vector<int8_t> labels;  // index 1..n; 0 unlabeled, 1 zero, 2 one
  int32_t labeled = 0;

  std::unique_ptr<SSetEngine> sset;
  std::unique_ptr<IntervalEngine> interval;
  std::unique_ptr<UnionIntervalsEngine> uintervals;
  std::unique_ptr<StarEngine> star;
  std::unique_ptr<UnionStarsEngine> ustars;
  std::unique_ptr<SubmatrixEngine> submat;

  EngineBase* engine = nullptr;

  explicit Impl(ClassSpec s) : spec(std::move(s)) {
    spec.validate();
    labels.assign(static_cast<size_t>(spec.n) + 1, 0);
    switch (spec.kind) {
      case ClassKind::SSet:
        sset = std::make_unique<SSetEngine>(spec.n, spec.s);
        engine = sset.get();
        break;
      case ClassKind::SInterval:
        interval = std::make_unique<IntervalEngine>(spec.n, spec.s);
        engine = interval.get();
        break;
      case ClassKind::UnionIntervals:
        uintervals = std::make_unique<UnionIntervalsEngine>(spec.n, spec.s, spec.k);
        engine = uintervals.get();
        break;
      case ClassKind::SStar:
        star = std::make_unique<StarEngine>(spec.p, spec.s);
        engine = star.get();
        break;
      case ClassKind::UnionStars:
        ustars = std::make_unique<UnionStarsEngine>(spec.p, spec.s, spec.k);
        engine = ustars.get();
        break;
      case ClassKind::Submatrix:
        submat = std::make_unique<SubmatrixEngine>(spec.n1, spec.n2, spec.s);
        engine = submat.get();
        break;
    }
    engine->recompute(labels);
  }
};

ConsistencyTracker::ConsistencyTracker(ClassSpec spec) : impl_(std::make_unique<Impl>(std::move(spec))) {}
ConsistencyTracker::ConsistencyTracker(ConsistencyTracker&&) noexcept = default;
ConsistencyTracker& ConsistencyTracker::operator=(ConsistencyTracker&&) noexcept = default;
ConsistencyTracker::~ConsistencyTracker() = default;

Verdict ConsistencyTracker::update(Coord index, bool label) {
  if (index < 1 || index > impl_->spec.n)
    throw std::domain_error("ConsistencyTracker::update: index out of range");
  const int8_t want = label ? 2 : 1;
  const int8_t cur = impl_->labels[index];
  if (cur == want) return impl_->engine->verdict;  // identical relabel: no-op
  if (cur != 0)
    throw std::logic_error("ConsistencyTracker::update: conflicting relabel of coordinate " +
                           std::to_string(index));
  impl_->labels[index] = want;
  ++impl_->labeled;
  if (impl_->interval) impl_->interval->observe(index, label);
  impl_->engine->recompute(impl_->labels);
  return impl_->engine->verdict;
}

Verdict ConsistencyTracker::verdict() const { return impl_->engine->verdict; }

const Support& ConsistencyTracker::unique_support() const {
  if (impl_->engine->verdict != Verdict::Unique)
    throw std::logic_error("unique_support: verdict is not Unique");
  return impl_->engine->unique;
}

const ClassSpec& ConsistencyTracker::spec() const { return impl_->spec; }

bool ConsistencyTracker::is_labeled(Coord index) const {
  return index >= 1 && index <= impl_->spec.n && impl_->labels[index] != 0;
}

int32_t ConsistencyTracker::labeled_count() const { return impl_->labeled; }

}  // namespace asl
