#pragma once

#include <stdexcept>
#include <string>

namespace urnflow {

// Operation not defined for the given model variant (e.g. EPPF evaluation
// on a model specified only through its structural distribution).
class unsupported_operation : public std::logic_error {
 public:
  explicit unsupported_operation(const std::string& what)
      : std::logic_error(what) {}
};

// A bounded sampling loop (rejection or stick truncation) exhausted its
// attempt budget.  Carries enough context to diagnose the parameter corner.
class sampling_error : public std::runtime_error {
 public:
  explicit sampling_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace urnflow
