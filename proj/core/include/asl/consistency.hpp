#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "asl/class_spec.hpp"

namespace asl {

enum class Verdict { Many, Unique, None };

// Incremental record of (coordinate, binary label) pairs with the three-state
// verdict that implements the stopping rule: Unique iff exactly one member of
// the class agrees with every label, None iff no member does, Many otherwise.
// The verdict is recomputed on every update; brute-force enumeration is the
// test oracle, never the production path.
class ConsistencyTracker {
 public:
  explicit ConsistencyTracker(ClassSpec spec);
  ConsistencyTracker(const ConsistencyTracker&) = delete;
  ConsistencyTracker& operator=(const ConsistencyTracker&) = delete;
  ConsistencyTracker(ConsistencyTracker&&) noexcept;
  ConsistencyTracker& operator=(ConsistencyTracker&&) noexcept;
  ~ConsistencyTracker();

  // Relabeling a coordinate identically is a no-op; a conflicting relabel is a
  // driver bug and throws std::logic_error.
  Verdict update(Coord index, bool label);

  Verdict verdict() const;
  // Valid only when verdict() == Unique.
  const Support& unique_support() const;

  const ClassSpec& spec() const;
  bool is_labeled(Coord index) const;
  int32_t labeled_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace asl
