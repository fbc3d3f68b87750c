#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asl/class_spec.hpp"
#include "asl/rng.hpp"

namespace asl {

enum class Phase { Search, Refine };

struct Query {
  Coord coord = 0;
  Phase phase = Phase::Search;
};

// A noiseless query strategy: emits coordinates to probe and consumes binary
// labels. Strategies never request a coordinate twice. They are self-contained
// bookkeeping; the caller owns the stopping rule (the ConsistencyTracker) and
// stops asking once the verdict leaves Many.
class Strategy {
 public:
  virtual ~Strategy() = default;

  // Next coordinate to probe, or nullopt when the strategy has nothing left
  // to offer (including capped searches that failed to find a signal entry).
  virtual std::optional<Query> next_query(Rng& rng) = 0;

  virtual void feed_label(Coord coord, bool label) = 0;

  // A capped random search ran out of draws without a hit: the procedure
  // fails and the estimate is empty.
  bool failed() const { return failed_; }

  int32_t queries_made() const { return queries_made_; }
  int32_t search_queries() const { return search_queries_; }

 protected:
  void note_emitted(Phase phase) {
    ++queries_made_;
    if (phase == Phase::Search) ++search_queries_;
  }
  bool failed_ = false;
  int32_t queries_made_ = 0;
  int32_t search_queries_ = 0;
};

// Per-class constructions. j_cap bounds each random search phase for the star
// and submatrix strategies; <= 0 means "no cap" (exhaustive draw).
std::unique_ptr<Strategy> scan_strategy(const ClassSpec& spec);
std::unique_ptr<Strategy> interval_strategy(const ClassSpec& spec);
std::unique_ptr<Strategy> union_intervals_strategy(const ClassSpec& spec);
std::unique_ptr<Strategy> star_strategy(const ClassSpec& spec, int32_t j_cap);
std::unique_ptr<Strategy> union_stars_strategy(const ClassSpec& spec, int32_t j_cap);
std::unique_ptr<Strategy> submatrix_strategy(const ClassSpec& spec, int32_t j_cap);

std::unique_ptr<Strategy> make_strategy(const ClassSpec& spec, int32_t j_cap = 0);

// One (query, label) event of a run, for trace export.
struct TraceEntry {
  int32_t t = 0;
  Coord coord = 0;
  Phase phase = Phase::Search;
  bool label = false;
};

std::string trace_to_csv(const std::vector<TraceEntry>& trace);

}  // namespace asl
