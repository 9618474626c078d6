#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "faultline/digest.hpp"
#include "faultline/value.hpp"

namespace faultline {

/// Identity of one intercepted invocation. Repeated calls with identical
/// method and arguments are told apart by a 0-based ordinal.
struct CallDescriptor {
  std::string method_fqn;
  std::string args_digest;
  std::string args_preview;
  std::uint64_t ordinal = 0;

  bool operator==(const CallDescriptor&) const = default;
};

struct CallSiteId {
  std::string value;

  auto operator<=>(const CallSiteId&) const = default;
};

inline std::string digest_arguments(const std::vector<Value>& args) {
  Value arr = Value::array();
  for (const auto& a : args) arr.push_back(a);
  return sha1_hex(canonical_json(arr));
}

inline CallDescriptor make_descriptor(std::string method_fqn,
                                      const std::vector<Value>& args,
                                      std::uint64_t ordinal) {
  CallDescriptor d;
  d.method_fqn = std::move(method_fqn);
  d.args_digest = digest_arguments(args);
  d.args_preview = preview_arguments(args);
  d.ordinal = ordinal;
  return d;
}

/// Stable digest over method, canonical arguments, and ordinal. Identical
/// descriptors map to the same id across iterations and process runs.
inline CallSiteId resolve_call_site_id(const CallDescriptor& d) {
  return CallSiteId{sha1_hex(d.method_fqn + "\n" + d.args_digest + "\n" +
                             std::to_string(d.ordinal))};
}

}  // namespace faultline
