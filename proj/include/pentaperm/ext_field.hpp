#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pentaperm/binary_field.hpp"
#include "pentaperm/f2_linear.hpp"
#include "pentaperm/polyring.hpp"

namespace pentaperm {

// Element of F_{q^d}, d in {2,3}: polynomial-basis coordinates over the base
// field, lowest first. Unused coordinates stay zero.
struct EElem {
  std::array<uint64_t, 3> c{};
  bool operator==(const EElem&) const = default;
};

/**
 * Degree-2/3 extension of a FieldCtx. The modulus is a monic root-free (hence
 * irreducible, degree <= 3) polynomial over F_q, found by deterministic
 * search when not supplied. Frobenius x -> x^q is realized as a precomputed
 * F_2-linear map on the packed d*m coordinates, since the permutation scans
 * apply it per element.
 *
 * Immutable after construction; operations are pure, so contexts are safe to
 * share across workers.
 */
class ExtCtx {
 public:
  using Elem = EElem;

  ExtCtx(const FieldCtx& base, int d) : ExtCtx(base, d, default_modulus(base, d)) {}

  ExtCtx(const FieldCtx& base, int d, std::vector<FElem> modulus) : base_(base), d_(d) {
    if (d != 2 && d != 3) fail(Errc::UnsupportedDegree, "extension degree must be 2 or 3");
    if (modulus.size() != static_cast<size_t>(d))
      fail(Errc::ModulusReducible, "modulus must list exactly d coefficients below the leading 1");
    mod_ = std::move(modulus);
    for (const auto& c : mod_)
      if (c.v >= base_.q()) fail(Errc::ModulusReducible, "modulus coefficient outside the base field");
    if (has_root_in_base(base_, mod_))
      fail(Errc::ModulusReducible, "modulus has a root in the base field");
    order_ = u128(1) << (base_.m() * d_);
    build_reduction_rows();
    build_frobenius();
    build_as_solver();
    find_generator_if_small();
  }

  const FieldCtx& base() const { return base_; }
  int ext_degree() const { return d_; }
  int dim_f2() const { return d_ * base_.m(); }
  u128 order() const { return order_; }
  const std::vector<FElem>& modulus() const { return mod_; }

  EElem zero() const { return {}; }
  EElem one() const { return {{1, 0, 0}}; }
  EElem embed(FElem x) const { return {{x.v, 0, 0}}; }

  bool in_base(EElem x) const { return x.c[1] == 0 && x.c[2] == 0; }

  EElem element_at(uint64_t idx) const {
    EElem e;
    uint64_t qm = base_.q() - 1;
    e.c[0] = idx & qm;
    e.c[1] = (idx >> base_.m()) & qm;
    if (d_ == 3) e.c[2] = (idx >> (2 * base_.m())) & qm;
    return e;
  }

  uint64_t pack(EElem x) const {
    return x.c[0] | (x.c[1] << base_.m()) | (d_ == 3 ? (x.c[2] << (2 * base_.m())) : 0);
  }

  u128 pack128(EElem x) const {
    return u128(x.c[0]) | (u128(x.c[1]) << base_.m()) | (u128(x.c[2]) << (2 * base_.m()));
  }

  EElem unpack128(u128 v) const {
    EElem e;
    uint64_t qm = base_.q() - 1;
    e.c[0] = static_cast<uint64_t>(v) & qm;
    e.c[1] = static_cast<uint64_t>(v >> base_.m()) & qm;
    if (d_ == 3) e.c[2] = static_cast<uint64_t>(v >> (2 * base_.m())) & qm;
    return e;
  }

  EElem add(EElem x, EElem y) const {
    return {{x.c[0] ^ y.c[0], x.c[1] ^ y.c[1], x.c[2] ^ y.c[2]}};
  }

  EElem mul(EElem x, EElem y) const {
    FElem pr[5] = {};
    for (int i = 0; i < d_; ++i) {
      if (x.c[i] == 0) continue;
      FElem xi{x.c[i]};
      for (int j = 0; j < d_; ++j)
        pr[i + j] = base_.add(pr[i + j], base_.mul(xi, FElem{y.c[j]}));
    }
    EElem out;
    for (int j = 0; j < d_; ++j) out.c[j] = pr[j].v;
    for (int e = d_; e <= 2 * (d_ - 1); ++e) {
      if (pr[e].v == 0) continue;
      const auto& row = redrow_[static_cast<size_t>(e - d_)];
      for (int j = 0; j < d_; ++j)
        out.c[j] ^= base_.mul(pr[e], row[static_cast<size_t>(j)]).v;
    }
    return out;
  }

  EElem sqr(EElem x) const { return mul(x, x); }

  EElem pow(EElem x, u128 e) const {
    if (e == 0) return one();
    if (x == zero()) return zero();
    EElem acc = one();
    EElem b = x;
    while (e) {
      if (e & 1) acc = mul(acc, b);
      b = sqr(b);
      e >>= 1;
    }
    return acc;
  }

  EElem inv(EElem x) const {
    if (x == zero()) fail(Errc::ZeroInverse, "0 has no multiplicative inverse");
    return pow(x, order_ - 2);
  }

  EElem sqrt(EElem x) const {
    EElem r = x;
    for (int i = 0; i < dim_f2() - 1; ++i) r = sqr(r);
    return r;
  }

  // x^(q^j) via the precomputed coordinate maps; agrees with pow(x, q^j).
  EElem frobenius(EElem x, int j) const {
    if (j < 0 || j >= d_) fail(Errc::UnsupportedDegree, "frobenius power must satisfy 0 <= j < d");
    if (j == 0) return x;
    return unpack128(frob_[static_cast<size_t>(j - 1)].apply(pack128(x)));
  }

  // Tr_{q^d/q}(x) = x + x^q + ... + x^(q^(d-1)), landing in F_q.
  FElem rel_trace(EElem x) const {
    EElem acc = x;
    for (int j = 1; j < d_; ++j) acc = add(acc, frobenius(x, j));
    // the sum is Frobenius-fixed, so its coordinates above 0 vanish
    if (!in_base(acc)) fail(Errc::FieldMismatch, "relative trace left the base field");
    return FElem{acc.c[0]};
  }

  // Absolute trace to F_2 by transitivity.
  int abs_trace(EElem x) const { return base_.trace(rel_trace(x)); }

  std::optional<EElem> artin_schreier(EElem c) const {
    auto t = as_solver_.solve(pack128(c));
    if (!t) return std::nullopt;
    return unpack128(*t);
  }

  std::vector<EElem> solve_quadratic(EElem a, EElem b) const {
    if (a == zero()) return {sqrt(b)};
    EElem c = mul(b, inv(sqr(a)));
    auto t = artin_schreier(c);
    if (!t) return {};
    EElem x1 = mul(a, *t);
    EElem x2 = add(x1, a);
    if (pack128(x2) < pack128(x1)) std::swap(x1, x2);
    return {x1, x2};
  }

  // Deterministic scan for the first element of multiplicative order Q-1.
  // Desk scale: Q <= 2^24.
  EElem primitive_element() const {
    if (!generator_) fail(Errc::FieldTooLarge, "primitive element search capped at Q <= 2^24");
    return *generator_;
  }

  bool same_field(const ExtCtx& other) const {
    return base_.m() == other.base_.m() && base_.redpoly() == other.base_.redpoly() &&
           d_ == other.d_ && mod_ == other.mod_;
  }

  std::string hex(EElem x) const { return to_hex(pack128(x)); }

  EElem parse_hex(const std::string& s) const {
    bool ok = false;
    u128 v = parse_hex_u128(s, &ok);
    if (!ok || v >= order_) fail(Errc::ParseError, "bad element hex: " + s);
    return unpack128(v);
  }

  static std::vector<FElem> default_modulus(const FieldCtx& base, int d) {
    if (d != 2 && d != 3) fail(Errc::UnsupportedDegree, "extension degree must be 2 or 3");
    // first root-free monic polynomial in lexicographic coefficient order
    uint64_t q = base.q();
    u128 total = 1;
    for (int j = 0; j < d; ++j) total *= q;
    for (u128 idx = 1; idx < total; ++idx) {
      std::vector<FElem> cand(static_cast<size_t>(d));
      u128 t = idx;
      for (int j = 0; j < d; ++j) {
        cand[static_cast<size_t>(j)] = FElem{static_cast<uint64_t>(t % q)};
        t /= q;
      }
      if (cand[0].v == 0) continue;  // 0 would be a root
      if (!has_root_in_base(base, cand)) return cand;
    }
    fail(Errc::ModulusReducible, "no irreducible modulus found");  // unreachable
  }

 private:
  // Root-free test without scanning: gcd(x^q - x mod f, f) is nonconstant
  // exactly when f has a root in F_q. Degree <= 3, so root-free iff
  // irreducible.
  static bool has_root_in_base(const FieldCtx& base, const std::vector<FElem>& mod_low) {
    Poly<FieldCtx> f;
    f.c = mod_low;
    f.c.push_back(base.one());
    Poly<FieldCtx> x;
    x.c = {base.zero(), base.one()};
    auto xq = poly_powmod(base, x, base.order(), f);
    auto diff = poly_add(base, xq, x);
    if (diff.is_zero()) return true;  // every base element is a root
    return poly_gcd(base, f, diff).degree() >= 1;
  }

  void build_reduction_rows() {
    // redrow_[e-d] = coordinates of t^e mod modulus, e = d .. 2(d-1)
    std::vector<FElem> cur = mod_;  // t^d
    redrow_.clear();
    redrow_.push_back(cur);
    for (int e = d_ + 1; e <= 2 * (d_ - 1); ++e) {
      // multiply by t, reduce
      std::vector<FElem> nxt(static_cast<size_t>(d_), FElem{});
      FElem top = cur[static_cast<size_t>(d_ - 1)];
      for (int j = d_ - 1; j >= 1; --j) nxt[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)];
      for (int j = 0; j < d_; ++j)
        nxt[static_cast<size_t>(j)] = base_.add(nxt[static_cast<size_t>(j)], base_.mul(top, mod_[static_cast<size_t>(j)]));
      redrow_.push_back(nxt);
      cur = nxt;
    }
  }

  void build_frobenius() {
    int n = dim_f2();
    EElem t;
    t.c[1] = 1;
    EElem tq = pow(t, base_.order());
    EElem tq2 = (d_ == 3) ? pow(tq, base_.order()) : zero();
    auto build = [&](EElem tpow) {
      LinearMapF2 map;
      map.n = n;
      map.img.assign(static_cast<size_t>(n), 0);
      for (int j = 0; j < d_; ++j) {
        EElem tj = pow(tpow, static_cast<u128>(j));
        for (int i = 0; i < base_.m(); ++i) {
          EElem e = mul(embed(FElem{uint64_t(1) << i}), tj);
          map.img[static_cast<size_t>(j * base_.m() + i)] = pack128(e);
        }
      }
      return map;
    };
    frob_.clear();
    frob_.push_back(build(tq));
    if (d_ == 3) frob_.push_back(build(tq2));
  }

  void build_as_solver() {
    int n = dim_f2();
    as_solver_ = F2Solver(n + 1);
    for (int i = 0; i < n; ++i) {
      EElem e = unpack128(u128(1) << i);
      as_solver_.add_generator(pack128(add(sqr(e), e)), u128(1) << i);
    }
  }

  void find_generator_if_small() {
    if (order_ > (u128(1) << 24)) return;
    uint64_t n = static_cast<uint64_t>(order_ - 1);
    std::vector<uint64_t> primes;
    uint64_t nn = n;
    for (uint64_t p = 2; p * p <= nn; ++p)
      while (nn % p == 0) {
        if (primes.empty() || primes.back() != p) primes.push_back(p);
        nn /= p;
      }
    if (nn > 1) primes.push_back(nn);
    for (uint64_t idx = 1; idx < order_; ++idx) {
      EElem g = element_at(idx);
      bool ok = true;
      for (uint64_t p : primes)
        if (pow(g, n / p) == one()) {
          ok = false;
          break;
        }
      if (ok) {
        generator_ = g;
        return;
      }
    }
  }

  FieldCtx base_;
  int d_;
  std::vector<FElem> mod_;
  u128 order_ = 0;
  std::vector<std::vector<FElem>> redrow_;
  std::vector<LinearMapF2> frob_;
  F2Solver as_solver_{0};
  std::optional<EElem> generator_;
};

inline ExtCtx ext_new(const FieldCtx& base, int d,
                      std::optional<std::vector<FElem>> modulus = std::nullopt) {
  if (modulus) return ExtCtx(base, d, std::move(*modulus));
  return ExtCtx(base, d);
}

// F_2-subspace of elements fixed by x -> x^(2^k): the subfield F_{2^k} when
// k divides the full degree. Returned as all 2^k elements.
inline std::vector<EElem> subfield_elements(const ExtCtx& E, int k) {
  int n = E.dim_f2();
  // columns of (Sq^k + Id) where Sq is absolute squaring
  std::vector<u128> cols(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    EElem e = E.unpack128(u128(1) << i);
    EElem s = e;
    for (int j = 0; j < k; ++j) s = E.sqr(s);
    cols[static_cast<size_t>(i)] = E.pack128(s) ^ (u128(1) << i);
  }
  auto basis = nullspace_f2(cols, n);
  std::vector<EElem> out;
  out.reserve(size_t(1) << basis.size());
  for (uint64_t mask = 0; mask < (uint64_t(1) << basis.size()); ++mask) {
    u128 v = 0;
    for (size_t b = 0; b < basis.size(); ++b)
      if ((mask >> b) & 1) v ^= basis[b];
    out.push_back(E.unpack128(v));
  }
  return out;
}

// Root of x^3 + x^2 + 1 (use_sq) or x^3 + x + 1 inside the embedded F_8,
// found through the Frobenius-fixed subspace rather than a full field scan.
// F_8 embeds in every F_{q^3}, so a root always exists; the smallest packed
// root is returned for reproducibility.
inline EElem f8_root_of(const ExtCtx& E, bool use_sq) {
  auto f8 = subfield_elements(E, 3);
  std::sort(f8.begin(), f8.end(),
            [&](const EElem& a, const EElem& b) { return E.pack128(a) < E.pack128(b); });
  for (const auto& x : f8) {
    EElem acc = E.mul(E.sqr(x), x);
    acc = E.add(acc, use_sq ? E.sqr(x) : x);
    acc = E.add(acc, E.one());
    if (acc == E.zero()) return x;
  }
  fail(Errc::ConstructionFailed, "no root of the witness cubic in the embedded F_8");
}

}  // namespace pentaperm
