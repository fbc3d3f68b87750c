#include "asl/strategies.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace asl {

namespace {

// Uniform draws without replacement over {1..n} (Fisher-Yates on the live
// list), with O(1) removal of specific coordinates queried elsewhere.
class DrawPool {
 public:
  explicit DrawPool(int32_t n) : items_(n), pos_(n + 1) {
    for (int32_t i = 1; i <= n; ++i) {
      items_[i - 1] = i;
      pos_[i] = i - 1;
    }
  }

  bool empty() const { return items_.empty(); }
  size_t size() const { return items_.size(); }

  void remove(Coord c) {
    const int32_t p = pos_[c];
    if (p < 0) return;
    const Coord last = items_.back();
    items_[p] = last;
    pos_[last] = p;
    items_.pop_back();
    pos_[c] = -1;
  }

  Coord draw(Rng& rng) {
    const Coord c = items_[rng.uniform_below(items_.size())];
    remove(c);
    return c;
  }

 private:
  std::vector<Coord> items_;
  std::vector<int32_t> pos_;
};

// search grid 1, s+1, 2s+1, ... plus a final point at n-s+1 when n is not a
// multiple of s, so every interval contains a grid point
std::vector<Coord> interval_grid(int32_t n, int32_t s) {
  std::vector<Coord> g;
  for (int32_t c = 1; c <= n; c += s) g.push_back(c);
  const Coord last = n - s + 1;
  if (std::find(g.begin(), g.end(), last) == g.end()) g.push_back(last);
  return g;
}

class ScanStrategy final : public Strategy {
 public:
  explicit ScanStrategy(const ClassSpec& spec) : n_(spec.n) {}

  std::optional<Query> next_query(Rng&) override {
    if (next_ > n_) return std::nullopt;
    note_emitted(Phase::Search);
    return Query{next_++, Phase::Search};
  }

  void feed_label(Coord, bool) override {}

 private:
  int32_t n_;
  Coord next_ = 1;
};

// Shared by intervals and unions of intervals: grid search for positives,
// then a leftward walk from each hit; a rightward walk is kept as a totality
// fallback for label sequences corrupted by test errors.
class IntervalFamilyStrategy final : public Strategy {
 public:
  IntervalFamilyStrategy(const ClassSpec& spec, int32_t hits_wanted)
      : n_(spec.n), s_(spec.s), hits_wanted_(hits_wanted), grid_(interval_grid(spec.n, spec.s)),
        queried_(spec.n + 1, 0) {}

  std::optional<Query> next_query(Rng&) override {
    for (;;) {
      switch (mode_) {
        case Mode::GridSearch: {
          while (gi_ < grid_.size() && queried_[grid_[gi_]]) ++gi_;
          if (gi_ < grid_.size()) {
            const Coord c = grid_[gi_++];
            pending_ = c;
            queried_[c] = 1;
            note_emitted(Phase::Search);
            return Query{c, Phase::Search};
          }
          // grid exhausted with fewer hits than wanted: the tracker resolves
          // to None once every grid point is labeled
          if (static_cast<int32_t>(hits_.size()) < hits_wanted_) return std::nullopt;
          start_left_walks();
          break;
        }
        case Mode::LeftWalk: {
          if (ci_ >= hits_.size()) {
            start_right_walks();
            break;
          }
          if (cursor_ < 1 || queried_[cursor_]) {
            advance_component_left();
            break;
          }
          queried_[cursor_] = 1;
          note_emitted(Phase::Refine);
          return Query{cursor_, Phase::Refine};
        }
        case Mode::RightWalk: {
          if (ci_ >= hits_.size()) {
            mode_ = Mode::Done;
            break;
          }
          if (cursor_ > n_ || queried_[cursor_]) {
            advance_component_right();
            break;
          }
          queried_[cursor_] = 1;
          note_emitted(Phase::Refine);
          return Query{cursor_, Phase::Refine};
        }
        case Mode::Done:
          return std::nullopt;
      }
    }
  }

  void feed_label(Coord coord, bool label) override {
    switch (mode_) {
      case Mode::GridSearch:
        if (label && coord == pending_) {
          hits_.push_back(coord);
          if (static_cast<int32_t>(hits_.size()) == hits_wanted_) start_left_walks();
        }
        break;
      case Mode::LeftWalk:
        ++steps_;
        // s-1 positive steps pin the left endpoint; no need to see the zero
        if (label && steps_ < s_ - 1) --cursor_;
        else advance_component_left();
        break;
      case Mode::RightWalk:
        ++steps_;
        if (label && steps_ < s_ - 1) ++cursor_;
        else advance_component_right();
        break;
      case Mode::Done:
        break;
    }
  }

 private:
  enum class Mode { GridSearch, LeftWalk, RightWalk, Done };

  void start_left_walks() {
    mode_ = Mode::LeftWalk;
    ci_ = 0;
    steps_ = 0;
    cursor_ = hits_.empty() ? 0 : hits_[0] - 1;
  }

  void advance_component_left() {
    ++ci_;
    steps_ = 0;
    if (ci_ < hits_.size()) cursor_ = hits_[ci_] - 1;
    else start_right_walks();
  }

  void start_right_walks() {
    mode_ = Mode::RightWalk;
    ci_ = 0;
    steps_ = 0;
    cursor_ = hits_.empty() ? n_ + 1 : hits_[0] + 1;
  }

  void advance_component_right() {
    ++ci_;
    steps_ = 0;
    if (ci_ < hits_.size()) cursor_ = hits_[ci_] + 1;
    else mode_ = Mode::Done;
  }

  int32_t n_, s_, hits_wanted_;
  std::vector<Coord> grid_;
  std::vector<int8_t> queried_;
  size_t gi_ = 0;
  Mode mode_ = Mode::GridSearch;
  Coord pending_ = 0;
  std::vector<Coord> hits_;
  size_t ci_ = 0;
  Coord cursor_ = 0;
  int32_t steps_ = 0;
};

class StarStrategy final : public Strategy {
 public:
  StarStrategy(const ClassSpec& spec, int32_t j_cap)
      : p_(spec.p), n_(spec.n), j_cap_(j_cap), pool_(spec.n), queried_(spec.n + 1, 0) {}

  std::optional<Query> next_query(Rng& rng) override {
    if (mode_ == Mode::Search) {
      if (j_cap_ > 0 && draws_ >= j_cap_) {
        failed_ = true;
        mode_ = Mode::Done;
        return std::nullopt;
      }
      if (pool_.empty()) {
        failed_ = true;
        mode_ = Mode::Done;
        return std::nullopt;
      }
      const Coord c = pool_.draw(rng);
      ++draws_;
      queried_[c] = 1;
      note_emitted(Phase::Search);
      return Query{c, Phase::Search};
    }
    while (qi_ < queue_.size()) {
      const Coord c = queue_[qi_++];
      if (queried_[c]) continue;
      queried_[c] = 1;
      note_emitted(Phase::Refine);
      return Query{c, Phase::Refine};
    }
    mode_ = Mode::Done;
    return std::nullopt;
  }

  void feed_label(Coord coord, bool label) override {
    if (mode_ == Mode::Search && label) {
      auto [u, v] = edge_vertices(p_, coord);
      queue_.clear();
      for (int32_t w = 1; w <= p_; ++w) {
        if (w != u && w != v) queue_.push_back(edge_index(p_, u, w));
      }
      for (int32_t w = 1; w <= p_; ++w) {
        if (w != u && w != v) queue_.push_back(edge_index(p_, v, w));
      }
      std::sort(queue_.begin(), queue_.begin() + (p_ - 2));
      std::sort(queue_.begin() + (p_ - 2), queue_.end());
      qi_ = 0;
      mode_ = Mode::Refine;
    }
  }

 private:
  enum class Mode { Search, Refine, Done };
  int32_t p_, n_, j_cap_;
  DrawPool pool_;
  std::vector<int8_t> queried_;
  int32_t draws_ = 0;
  Mode mode_ = Mode::Search;
  std::vector<Coord> queue_;
  size_t qi_ = 0;
};

// Alternating search and refinement. Refinement first exhausts all edges at
// the endpoints of the newest search hit, then keeps probing edges incident
// to any vertex whose discovered signal degree lies in [1, s-1] (partly
// explored stars). When no such edge remains and fewer than k*s signal edges
// are known, a new search phase starts, up to k phases in total.
class UnionStarsStrategy final : public Strategy {
 public:
  UnionStarsStrategy(const ClassSpec& spec, int32_t j_cap)
      : p_(spec.p), s_(spec.s), k_(spec.k), n_(spec.n), j_cap_(j_cap), pool_(spec.n),
        queried_(spec.n + 1, 0), cnt_(spec.p + 1, 0) {}

  std::optional<Query> next_query(Rng& rng) override {
    for (;;) {
      switch (mode_) {
        case Mode::Search: {
          if (j_cap_ > 0 && draws_in_phase_ >= j_cap_) {
            failed_ = true;
            mode_ = Mode::Done;
            return std::nullopt;
          }
          if (pool_.empty()) {
            failed_ = true;
            mode_ = Mode::Done;
            return std::nullopt;
          }
          const Coord c = pool_.draw(rng);
          ++draws_in_phase_;
          queried_[c] = 1;
          note_emitted(Phase::Search);
          return Query{c, Phase::Search};
        }
        case Mode::Endpoint: {
          while (qi_ < queue_.size()) {
            const Coord c = queue_[qi_++];
            if (queried_[c]) continue;
            queried_[c] = 1;
            pool_.remove(c);
            note_emitted(Phase::Refine);
            return Query{c, Phase::Refine};
          }
          mode_ = Mode::Xtilde;
          break;
        }
        case Mode::Xtilde: {
          const Coord c = smallest_open_edge();
          if (c != 0) {
            queried_[c] = 1;
            pool_.remove(c);
            note_emitted(Phase::Refine);
            return Query{c, Phase::Refine};
          }
          if (positives_ < k_ * s_ && phases_ < k_) {
            ++phases_;
            draws_in_phase_ = 0;
            mode_ = Mode::Search;
            break;
          }
          mode_ = Mode::Done;
          break;
        }
        case Mode::Done:
          return std::nullopt;
      }
    }
  }

  void feed_label(Coord coord, bool label) override {
    if (label) {
      auto [u, v] = edge_vertices(p_, coord);
      ++cnt_[u];
      ++cnt_[v];
      ++positives_;
      if (mode_ == Mode::Search) {
        queue_.clear();
        for (int32_t w = 1; w <= p_; ++w)
          if (w != u) queue_.push_back(edge_index(p_, u, w));
        for (int32_t w = 1; w <= p_; ++w)
          if (w != v && w != u) queue_.push_back(edge_index(p_, v, w));
        std::sort(queue_.begin(), queue_.end());
        qi_ = 0;
        mode_ = Mode::Endpoint;
      }
    }
  }

 private:
  enum class Mode { Search, Endpoint, Xtilde, Done };

  bool open_vertex(int32_t v) const { return cnt_[v] >= 1 && cnt_[v] <= s_ - 1; }

  Coord smallest_open_edge() const {
    Coord best = 0;
    for (int32_t v = 1; v <= p_; ++v) {
      if (!open_vertex(v)) continue;
      for (int32_t w = 1; w <= p_; ++w) {
        if (w == v) continue;
        const Coord e = edge_index(p_, v, w);
        if (!queried_[e] && (best == 0 || e < best)) best = e;
      }
    }
    return best;
  }

  int32_t p_, s_, k_, n_, j_cap_;
  DrawPool pool_;
  std::vector<int8_t> queried_;
  std::vector<int32_t> cnt_;
  int32_t positives_ = 0;
  int32_t draws_in_phase_ = 0;
  int32_t phases_ = 1;
  Mode mode_ = Mode::Search;
  std::vector<Coord> queue_;
  size_t qi_ = 0;
};

class SubmatrixStrategy final : public Strategy {
 public:
  SubmatrixStrategy(const ClassSpec& spec, int32_t j_cap)
      : n1_(spec.n1), n2_(spec.n2), j_cap_(j_cap), pool_(spec.n), queried_(spec.n + 1, 0) {}

  std::optional<Query> next_query(Rng& rng) override {
    if (mode_ == Mode::Search) {
      if (j_cap_ > 0 && draws_ >= j_cap_) {
        failed_ = true;
        mode_ = Mode::Done;
        return std::nullopt;
      }
      if (pool_.empty()) {
        failed_ = true;
        mode_ = Mode::Done;
        return std::nullopt;
      }
      const Coord c = pool_.draw(rng);
      ++draws_;
      queried_[c] = 1;
      note_emitted(Phase::Search);
      return Query{c, Phase::Search};
    }
    while (qi_ < queue_.size()) {
      const Coord c = queue_[qi_++];
      if (queried_[c]) continue;
      queried_[c] = 1;
      note_emitted(Phase::Refine);
      return Query{c, Phase::Refine};
    }
    mode_ = Mode::Done;
    return std::nullopt;
  }

  void feed_label(Coord coord, bool label) override {
    if (mode_ == Mode::Search && label) {
      const int32_t r = (coord - 1) / n2_ + 1;
      const int32_t c = (coord - 1) % n2_ + 1;
      queue_.clear();
      for (int32_t j = 1; j <= n2_; ++j)
        if (j != c) queue_.push_back((r - 1) * n2_ + j);
      for (int32_t i = 1; i <= n1_; ++i)
        if (i != r) queue_.push_back((i - 1) * n2_ + c);
      qi_ = 0;
      mode_ = Mode::Refine;
    }
  }

 private:
  enum class Mode { Search, Refine, Done };
  int32_t n1_, n2_, j_cap_;
  DrawPool pool_;
  std::vector<int8_t> queried_;
  int32_t draws_ = 0;
  Mode mode_ = Mode::Search;
  std::vector<Coord> queue_;
  size_t qi_ = 0;
};

}  // namespace

std::unique_ptr<Strategy> scan_strategy(const ClassSpec& spec) {
  if (spec.kind != ClassKind::SSet) throw std::invalid_argument("scan_strategy: expects sset");
  return std::make_unique<ScanStrategy>(spec);
}

std::unique_ptr<Strategy> interval_strategy(const ClassSpec& spec) {
  if (spec.kind != ClassKind::SInterval) throw std::invalid_argument("interval_strategy: expects interval");
  return std::make_unique<IntervalFamilyStrategy>(spec, 1);
}

std::unique_ptr<Strategy> union_intervals_strategy(const ClassSpec& spec) {
  if (spec.kind != ClassKind::UnionIntervals)
    throw std::invalid_argument("union_intervals_strategy: expects uintervals");
  return std::make_unique<IntervalFamilyStrategy>(spec, spec.k);
}

std::unique_ptr<Strategy> star_strategy(const ClassSpec& spec, int32_t j_cap) {
  if (spec.kind != ClassKind::SStar) throw std::invalid_argument("star_strategy: expects star");
  return std::make_unique<StarStrategy>(spec, j_cap);
}

std::unique_ptr<Strategy> union_stars_strategy(const ClassSpec& spec, int32_t j_cap) {
  if (spec.kind != ClassKind::UnionStars)
    throw std::invalid_argument("union_stars_strategy: expects ustars");
  return std::make_unique<UnionStarsStrategy>(spec, j_cap);
}

std::unique_ptr<Strategy> submatrix_strategy(const ClassSpec& spec, int32_t j_cap) {
  if (spec.kind != ClassKind::Submatrix)
    throw std::invalid_argument("submatrix_strategy: expects submat");
  return std::make_unique<SubmatrixStrategy>(spec, j_cap);
}

std::unique_ptr<Strategy> make_strategy(const ClassSpec& spec, int32_t j_cap) {
  switch (spec.kind) {
    case ClassKind::SSet: return scan_strategy(spec);
    case ClassKind::SInterval: return interval_strategy(spec);
    case ClassKind::UnionIntervals: return union_intervals_strategy(spec);
    case ClassKind::SStar: return star_strategy(spec, j_cap);
    case ClassKind::UnionStars: return union_stars_strategy(spec, j_cap);
    case ClassKind::Submatrix: return submatrix_strategy(spec, j_cap);
  }
  throw std::invalid_argument("make_strategy: unknown class kind");
}

std::string trace_to_csv(const std::vector<TraceEntry>& trace) {
  std::ostringstream os;
  os << "t,coord,phase,label\n";
  for (const auto& e : trace)
    os << e.t << ',' << e.coord << ',' << (e.phase == Phase::Search ? "search" : "refine") << ','
       << (e.label ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace asl
