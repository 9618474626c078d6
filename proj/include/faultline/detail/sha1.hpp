#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace faultline::detail {

// Self-contained SHA-1 (FIPS 180-1). Used for call-site and test-block
// digests; collision resistance at desk scale is all that is required.
inline std::array<std::uint8_t, 20> sha1_bytes(std::string_view data) {
  auto rotl = [](std::uint32_t x, unsigned n) -> std::uint32_t {
    return (x << n) | (x >> (32u - n));
  };

  std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u,
                        0xC3D2E1F0u};

  const std::uint64_t bit_len = static_cast<std::uint64_t>(data.size()) * 8u;

  // Message plus padding: 0x80, zeros, 64-bit big-endian length.
  std::string padded(data);
  padded.push_back(static_cast<char>(0x80));
  while (padded.size() % 64 != 56) padded.push_back('\0');
  for (int i = 7; i >= 0; --i)
    padded.push_back(static_cast<char>((bit_len >> (8 * i)) & 0xFFu));

  std::uint32_t w[80];
  for (std::size_t chunk = 0; chunk < padded.size(); chunk += 64) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(padded.data() + chunk);
    for (int t = 0; t < 16; ++t) {
      w[t] = (static_cast<std::uint32_t>(p[4 * t]) << 24) |
             (static_cast<std::uint32_t>(p[4 * t + 1]) << 16) |
             (static_cast<std::uint32_t>(p[4 * t + 2]) << 8) |
             static_cast<std::uint32_t>(p[4 * t + 3]);
    }
    for (int t = 16; t < 80; ++t)
      w[t] = rotl(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1);

    std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
    for (int t = 0; t < 80; ++t) {
      std::uint32_t f, k;
      if (t < 20) {
        f = (b & c) | (~b & d);
        k = 0x5A827999u;
      } else if (t < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1u;
      } else if (t < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDCu;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6u;
      }
      const std::uint32_t tmp = rotl(a, 5) + f + e + k + w[t];
      e = d;
      d = c;
      c = rotl(b, 30);
      b = a;
      a = tmp;
    }
    h[0] += a;
    h[1] += b;
    h[2] += c;
    h[3] += d;
    h[4] += e;
  }

  std::array<std::uint8_t, 20> out{};
  for (int i = 0; i < 5; ++i) {
    out[4 * i] = static_cast<std::uint8_t>(h[i] >> 24);
    out[4 * i + 1] = static_cast<std::uint8_t>(h[i] >> 16);
    out[4 * i + 2] = static_cast<std::uint8_t>(h[i] >> 8);
    out[4 * i + 3] = static_cast<std::uint8_t>(h[i]);
  }
  return out;
}

}  // namespace faultline::detail
