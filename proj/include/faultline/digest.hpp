#pragma once

#include <string>
#include <string_view>

#include "faultline/detail/sha1.hpp"

namespace faultline {

/// Hex digest used everywhere an identity must be stable across runs.
inline std::string sha1_hex(std::string_view data) {
  static constexpr char kHex[] = "0123456789abcdef";
  const auto bytes = detail::sha1_bytes(data);
  std::string out;
  out.reserve(40);
  for (auto b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0x0F]);
  }
  return out;
}

}  // namespace faultline
