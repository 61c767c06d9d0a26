#ifndef STARKWG_HASH_HPP
#define STARKWG_HASH_HPP

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <string_view>

namespace starkwg {

// FNV-1a, 64-bit: tiny, dependency-free, stable across platforms. Used for
// config hashes and grid fingerprints in output records; not cryptographic.
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(std::string_view s,
                             std::uint64_t h = 1469598103934665603ull) {
  return fnv1a64(s.data(), s.size(), h);
}

inline std::uint64_t fnv1a64_append(std::uint64_t h, double x) {
  unsigned char buf[sizeof(double)];
  std::memcpy(buf, &x, sizeof(double));
  return fnv1a64(buf, sizeof(double), h);
}

inline std::uint64_t fnv1a64_append(std::uint64_t h, std::int64_t x) {
  unsigned char buf[sizeof(std::int64_t)];
  std::memcpy(buf, &x, sizeof(std::int64_t));
  return fnv1a64(buf, sizeof(std::int64_t), h);
}

}  // namespace starkwg

#endif
