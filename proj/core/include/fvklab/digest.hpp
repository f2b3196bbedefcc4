#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace fvklab {

/// 64-bit FNV-1a, stable across platforms and runs.
class Fnv1a {
 public:
  Fnv1a& add_bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  Fnv1a& add(std::string_view s) { return add_bytes(s.data(), s.size()); }
  Fnv1a& add(double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    return add(bits);
  }
  Fnv1a& add(std::uint64_t x) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
    return add_bytes(b, 8);
  }
  std::uint64_t value() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::string Fnv1a::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 0; i < 16; ++i) s[15 - i] = digits[(state_ >> (4 * i)) & 0xf];
  return s;
}

}  // namespace fvklab
