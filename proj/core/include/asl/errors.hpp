#pragma once

#include <stdexcept>
#include <string>

namespace asl {

// Capability refusal: the request is well-formed but the library declines to
// answer it (cardinality caps, bound combinations that have no formula).
// Distinct from std::invalid_argument / std::domain_error so the CLI can map
// it to its own exit code.
class RefusalError : public std::runtime_error {
 public:
  explicit RefusalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace asl
