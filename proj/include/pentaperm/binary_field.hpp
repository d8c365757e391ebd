#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pentaperm/bits.hpp"
#include "pentaperm/errors.hpp"
#include "pentaperm/f2_linear.hpp"

namespace pentaperm {

// An element of F_{2^m}, m <= 32: packed polynomial-basis coordinates.
// Bits at positions >= m are always zero.
struct FElem {
  uint64_t v = 0;
  bool operator==(const FElem&) const = default;
};

namespace f2poly {

// Carry-less arithmetic on bit-packed polynomials over F_2 (degree <= 63).

inline uint64_t mul(uint64_t a, uint64_t b) {
  uint64_t r = 0;
  while (b) {
    if (b & 1) r ^= a;
    a <<= 1;
    b >>= 1;
  }
  return r;
}

inline int degree(uint64_t a) { return a ? top_bit(a) : -1; }

inline uint64_t mod(uint64_t a, uint64_t p) {
  int dp = degree(p);
  while (a && degree(a) >= dp) a ^= p << (degree(a) - dp);
  return a;
}

inline uint64_t gcd(uint64_t a, uint64_t b) {
  while (b) {
    uint64_t t = mod(a, b);
    a = b;
    b = t;
  }
  return a;
}

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) { return mod(mul(a, b), p); }

// Definitive irreducibility test over F_2: p of degree m is irreducible iff
// x^(2^m) = x (mod p) and gcd(x^(2^(m/r)) - x, p) = 1 for every prime r | m.
inline bool is_irreducible(uint64_t p) {
  int m = degree(p);
  if (m < 1) return false;
  uint64_t x = mod(2, p);
  auto frob_iter = [&](int k) {
    uint64_t e = x;
    for (int j = 0; j < k; ++j) e = mulmod(e, e, p);
    return e;
  };
  if (frob_iter(m) != x) return false;
  int rem = m;
  for (int r = 2; rem > 1; ++r) {
    if (rem % r != 0) continue;
    while (rem % r == 0) rem /= r;
    if (gcd(frob_iter(m / r) ^ x, p) != 1) return false;
  }
  return true;
}

}  // namespace f2poly

// Lowest-weight irreducibles (trinomial where one exists, else pentanomial)
// for m = 1..32; entries are the full coefficient bit patterns.
inline uint64_t builtin_redpoly(int m) {
  static const int taps[33][3] = {
      {-1, -1, -1}, {0, -1, -1},  {1, -1, -1}, {1, -1, -1}, {1, -1, -1}, {2, -1, -1},
      {1, -1, -1},  {1, -1, -1},  {4, 3, 1},   {1, -1, -1}, {3, -1, -1}, {2, -1, -1},
      {3, -1, -1},  {4, 3, 1},    {5, -1, -1}, {1, -1, -1}, {5, 3, 1},   {3, -1, -1},
      {3, -1, -1},  {5, 2, 1},    {3, -1, -1}, {2, -1, -1}, {1, -1, -1}, {5, -1, -1},
      {4, 3, 1},    {3, -1, -1},  {4, 3, 1},   {5, 2, 1},   {1, -1, -1}, {2, -1, -1},
      {1, -1, -1},  {3, -1, -1},  {7, 3, 2},
  };
  if (m < 1 || m > 32) fail(Errc::UnsupportedDegree, "m must be in [1,32], got " + std::to_string(m));
  uint64_t p = (uint64_t(1) << m) | 1;
  for (int t : taps[m])
    if (t > 0) p |= uint64_t(1) << t;
  return p;
}

// Optional override file: lines of the form "m: <hex coefficient bits>".
// '#' starts a comment; blank lines ignored.
inline std::map<int, uint64_t> parse_redpoly_overrides(std::istream& in) {
  std::map<int, uint64_t> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    int m = 0;
    char colon = 0;
    std::string hex;
    if (!(ls >> m >> colon >> hex) || colon != ':')
      fail(Errc::ParseError, "override line " + std::to_string(lineno) + ": expected 'm: hex'");
    bool ok = false;
    u128 v = parse_hex_u128(hex, &ok);
    if (!ok || v > ~uint64_t(0))
      fail(Errc::ParseError, "override line " + std::to_string(lineno) + ": bad hex pattern");
    out[m] = static_cast<uint64_t>(v);
  }
  return out;
}

/**
 * F_{2^m} context, 1 <= m <= 32. Immutable after construction; all operations
 * are pure functions of (ctx, inputs), so one context may be shared freely
 * across threads.
 *
 * Multiplication strategy by size: full q x q table for m <= 8, log/exp
 * tables for m <= 16, shift-xor carry-less multiply above. All behind the
 * same contract.
 */
class FieldCtx {
 public:
  using Elem = FElem;

  explicit FieldCtx(int m) : FieldCtx(m, builtin_redpoly(m)) {}

  FieldCtx(int m, uint64_t redpoly) : m_(m), red_(redpoly) {
    if (m < 1 || m > 32) fail(Errc::UnsupportedDegree, "m must be in [1,32]");
    if (f2poly::degree(redpoly) != m)
      fail(Errc::RedPolyReducible, "reduction polynomial must have degree exactly m");
    if (!f2poly::is_irreducible(redpoly))
      fail(Errc::RedPolyReducible, "reduction polynomial is reducible over F_2");
    mask_ = (m == 64) ? ~uint64_t(0) : ((uint64_t(1) << m) - 1);
    build_tables();
    build_trace_mask();
    build_solver();
  }

  int m() const { return m_; }
  uint64_t q() const { return uint64_t(1) << m_; }
  u128 order() const { return u128(1) << m_; }
  uint64_t redpoly() const { return red_; }
  uint64_t trace_mask() const { return trace_mask_; }

  FElem zero() const { return {}; }
  FElem one() const { return {1}; }
  FElem from_bits(uint64_t bits) const { return {bits & mask_}; }
  FElem element_at(uint64_t idx) const { return {idx & mask_}; }

  FElem add(FElem x, FElem y) const { return {x.v ^ y.v}; }

  FElem mul(FElem x, FElem y) const {
    if (!multab_.empty()) return {multab_[(x.v << m_) | y.v]};
    if (!logtab_.empty()) {
      if (x.v == 0 || y.v == 0) return {};
      return {exptab_[logtab_[x.v] + logtab_[y.v]]};
    }
    return {mul_generic(x.v, y.v)};
  }

  FElem sqr(FElem x) const { return mul(x, x); }

  // Extended Euclid on bit polynomials; pow(x, 2^m - 2) agrees (tested).
  FElem inv(FElem x) const {
    if (x.v == 0) fail(Errc::ZeroInverse, "0 has no multiplicative inverse");
    uint64_t r0 = red_, r1 = x.v;
    uint64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
      int shift = f2poly::degree(r0) - f2poly::degree(r1);
      if (shift < 0) {
        std::swap(r0, r1);
        std::swap(t0, t1);
        continue;
      }
      r0 ^= r1 << shift;
      t0 ^= t1 << shift;
    }
    // r0 = gcd = 1 since red_ is irreducible and x != 0
    return {f2poly::mod(t0, red_)};
  }

  // Square-and-multiply; 0^0 := 1. Exponents up to 2^96 supported.
  FElem pow(FElem x, u128 e) const {
    if (e == 0) return one();
    if (x.v == 0) return zero();
    FElem acc = one();
    FElem base = x;
    while (e) {
      if (e & 1) acc = mul(acc, base);
      base = sqr(base);
      e >>= 1;
    }
    return acc;
  }

  // Unique square root: the inverse of Frobenius.
  FElem sqrt(FElem x) const {
    FElem r = x;
    for (int i = 0; i < m_ - 1; ++i) r = sqr(r);
    return r;
  }

  // Absolute trace Tr_{2^m}(x), via the precomputed mask.
  int trace(FElem x) const { return parity64(x.v & trace_mask_); }

  // Solve t^2 + t = c. Solvable iff Tr(c) = 0; the second solution is t + 1.
  std::optional<FElem> artin_schreier(FElem c) const {
    if (trace(c) != 0) return std::nullopt;
    FElem t{static_cast<uint64_t>(as_solver_.apply(c.v))};
    return t;
  }

  // Solutions of x^2 + a x + b = 0 in F_q, ascending bit order.
  // a != 0: empty iff Tr(b/a^2) = 1, else {a t, a t + a} with t^2 + t = b/a^2.
  // a == 0: the single solution sqrt(b).
  std::vector<FElem> solve_quadratic(FElem a, FElem b) const {
    if (a.v == 0) return {sqrt(b)};
    FElem c = mul(b, inv(sqr(a)));
    auto t = artin_schreier(c);
    if (!t) return {};
    FElem x1 = mul(a, *t);
    FElem x2 = add(x1, a);
    if (x2.v < x1.v) std::swap(x1, x2);
    return {x1, x2};
  }

  std::string hex(FElem x) const { return to_hex(x.v); }

 private:
  uint64_t mul_generic(uint64_t a, uint64_t b) const {
    // product of two degree<=31 polynomials fits 63 bits
    uint64_t r = 0;
    while (b) {
      if (b & 1) r ^= a;
      a <<= 1;
      b >>= 1;
    }
    return reduce(r);
  }

  uint64_t reduce(uint64_t a) const {
    for (int d = 2 * (m_ - 1); d >= m_; --d)
      if ((a >> d) & 1) a ^= red_ << (d - m_);
    return a;
  }

  void build_tables() {
    if (m_ <= 8) {
      size_t q = size_t(1) << m_;
      multab_.resize(q * q);
      for (size_t a = 0; a < q; ++a)
        for (size_t b = a; b < q; ++b) {
          uint8_t p = static_cast<uint8_t>(mul_generic(a, b));
          multab_[(a << m_) | b] = p;
          multab_[(b << m_) | a] = p;
        }
    } else if (m_ <= 16) {
      uint64_t q = uint64_t(1) << m_;
      uint64_t g = find_generator();
      exptab_.resize(2 * (q - 1));
      logtab_.assign(q, 0);
      uint64_t cur = 1;
      for (uint64_t i = 0; i < q - 1; ++i) {
        exptab_[i] = static_cast<uint32_t>(cur);
        exptab_[i + (q - 1)] = static_cast<uint32_t>(cur);
        logtab_[cur] = static_cast<uint32_t>(i);
        cur = mul_generic(cur, g);
      }
    }
  }

  uint64_t find_generator() const {
    uint64_t n = (uint64_t(1) << m_) - 1;
    std::vector<uint64_t> primes;
    uint64_t nn = n;
    for (uint64_t d = 2; d * d <= nn; ++d)
      while (nn % d == 0) {
        if (primes.empty() || primes.back() != d) primes.push_back(d);
        nn /= d;
      }
    if (nn > 1) primes.push_back(nn);
    for (uint64_t g = 2;; ++g) {
      bool ok = true;
      for (uint64_t p : primes) {
        uint64_t e = n / p, acc = 1, base = g;
        while (e) {
          if (e & 1) acc = mul_generic(acc, base);
          base = mul_generic(base, base);
          e >>= 1;
        }
        if (acc == 1) {
          ok = false;
          break;
        }
      }
      if (ok) return g;
    }
  }

  void build_trace_mask() {
    trace_mask_ = 0;
    for (int i = 0; i < m_; ++i) {
      uint64_t e = uint64_t(1) << i;  // basis element x^i
      uint64_t acc = 0, cur = e;
      for (int j = 0; j < m_; ++j) {
        acc ^= cur;
        cur = mul_generic(cur, cur);
      }
      // trace of every element is 0 or 1
      if (acc >> 1) fail(Errc::RedPolyReducible, "trace computation degenerated");
      if (acc & 1) trace_mask_ |= uint64_t(1) << i;
    }
  }

  void build_solver() {
    as_solver_.n = m_;
    as_solver_.img.assign(static_cast<size_t>(m_), 0);
    if (m_ & 1) {
      // Half-trace H(c) = sum c^(4^j), j = 0..(m-1)/2: H(c)^2 + H(c) = c + Tr(c).
      for (int i = 0; i < m_; ++i) {
        uint64_t e = uint64_t(1) << i;
        uint64_t acc = 0, cur = e;
        for (int j = 0; j <= (m_ - 1) / 2; ++j) {
          acc ^= cur;
          cur = mul_generic(mul_generic(cur, cur), mul_generic(cur, cur));
        }
        as_solver_.img[static_cast<size_t>(i)] = acc;
      }
    } else {
      // Even m: half-trace formula is unavailable; precompute a linear
      // right-inverse of t -> t^2 + t on its image (the trace-zero
      // hyperplane). Basis vectors of trace 1 are shifted by a fixed
      // trace-one vector w; a trace-zero input hits an even number of
      // them, so the w contributions cancel.
      F2Solver solver(m_);
      for (int i = 0; i < m_; ++i) {
        uint64_t e = uint64_t(1) << i;
        solver.add_generator(mul_generic(e, e) ^ e, e);
      }
      uint64_t w = 0;
      for (int i = 0; i < m_; ++i)
        if ((trace_mask_ >> i) & 1) {
          w = uint64_t(1) << i;
          break;
        }
      for (int i = 0; i < m_; ++i) {
        uint64_t c = uint64_t(1) << i;
        if (parity64(c & trace_mask_) != 0) c ^= w;
        auto t = solver.solve(c);  // trace-zero vectors are always in the image
        as_solver_.img[static_cast<size_t>(i)] = static_cast<uint64_t>(*t);
      }
    }
  }

  int m_;
  uint64_t red_;
  uint64_t mask_ = 0;
  uint64_t trace_mask_ = 0;
  LinearMapF2 as_solver_;
  std::vector<uint8_t> multab_;
  std::vector<uint32_t> logtab_;
  std::vector<uint32_t> exptab_;
};

// field_new per the external contract: builtin lowest-weight modulus when
// redpoly is omitted, with optional override table.
inline FieldCtx field_new(int m, std::optional<uint64_t> redpoly = std::nullopt,
                          const std::map<int, uint64_t>* overrides = nullptr) {
  if (redpoly) return FieldCtx(m, *redpoly);
  if (overrides) {
    auto it = overrides->find(m);
    if (it != overrides->end()) return FieldCtx(m, it->second);
  }
  return FieldCtx(m);
}

// Cube test in any field context with an order() method. u = v^3 for some v
// iff 3 does not divide Q-1, or u^((Q-1)/3) = 1.
template <class Ctx>
bool is_cube(const Ctx& ctx, typename Ctx::Elem u) {
  if (u == ctx.zero()) fail(Errc::ZeroInput, "is_cube is defined on nonzero elements");
  u128 n = ctx.order() - 1;
  if (n % 3 != 0) return true;
  return ctx.pow(u, n / 3) == ctx.one();
}

}  // namespace pentaperm
