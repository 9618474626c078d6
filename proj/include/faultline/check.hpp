#pragma once

#include <string>

#include "faultline/errors.hpp"
#include "faultline/value.hpp"

namespace faultline {

/// Assertion helpers for test bodies run under exploration. Failures raise
/// AssertionFailure, which the explorer reports as a failed iteration;
/// any other exception type counts as an errored iteration instead.
inline void test_assert(bool condition, const std::string& message) {
  if (!condition) throw AssertionFailure(message);
}

inline void assert_equal(const Value& actual, const Value& expected,
                         const std::string& label = "value") {
  if (actual == expected) return;
  throw AssertionFailure(label + ": expected " + display_form(expected).dump() +
                         ", got " + display_form(actual).dump());
}

}  // namespace faultline
