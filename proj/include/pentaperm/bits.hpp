#pragma once

#include <cstdint>
#include <string>

namespace pentaperm {

// Exponents of the q^3-sized tower exceed 64 bits for large m, so exponent
// arithmetic runs on 128-bit integers throughout.
using u128 = unsigned __int128;
using i128 = __int128;

inline int parity64(uint64_t x) { return __builtin_parityll(x); }

inline int top_bit(uint64_t x) { return 63 - __builtin_clzll(x); }  // x != 0

inline int top_bit128(u128 x) {
  uint64_t hi = static_cast<uint64_t>(x >> 64);
  if (hi) return 64 + top_bit(hi);
  return top_bit(static_cast<uint64_t>(x));
}

template <typename T>
T gcd_int(T a, T b) {
  while (b) {
    T t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::string to_hex(u128 v) {
  if (v == 0) return "0";
  static const char* digits = "0123456789abcdef";
  std::string s;
  while (v) {
    s.insert(s.begin(), digits[static_cast<unsigned>(v & 0xf)]);
    v >>= 4;
  }
  return s;
}

inline std::string to_dec(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  return s;
}

inline u128 parse_hex_u128(const std::string& s, bool* ok = nullptr) {
  u128 v = 0;
  bool good = !s.empty();
  size_t start = 0;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) start = 2;
  for (size_t j = start; j < s.size(); ++j) {
    char c = s[j];
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else { good = false; break; }
    v = (v << 4) | static_cast<unsigned>(d);
  }
  if (ok) *ok = good;
  return v;
}

}  // namespace pentaperm
