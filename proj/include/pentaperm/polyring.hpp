#pragma once

#include <vector>

#include "pentaperm/bits.hpp"
#include "pentaperm/errors.hpp"

namespace pentaperm {

// Dense univariate polynomials, coefficients lowest degree first, over any
// field context providing Elem, zero(), one(), add(), mul(), inv(), order(),
// element_at(). Canonical form has no trailing zero coefficients; the zero
// polynomial is the empty vector with degree() == -1.
template <class Ctx>
struct Poly {
  using Elem = typename Ctx::Elem;
  std::vector<Elem> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
};

template <class Ctx>
Poly<Ctx> poly_trim(const Ctx& F, Poly<Ctx> f) {
  while (!f.c.empty() && f.c.back() == F.zero()) f.c.pop_back();
  return f;
}

template <class Ctx>
Poly<Ctx> poly_from(const Ctx& F, std::vector<typename Ctx::Elem> coeffs) {
  Poly<Ctx> f{std::move(coeffs)};
  return poly_trim(F, std::move(f));
}

template <class Ctx>
Poly<Ctx> poly_add(const Ctx& F, const Poly<Ctx>& f, const Poly<Ctx>& g) {
  Poly<Ctx> r;
  r.c.resize(std::max(f.c.size(), g.c.size()), F.zero());
  for (size_t i = 0; i < f.c.size(); ++i) r.c[i] = f.c[i];
  for (size_t i = 0; i < g.c.size(); ++i) r.c[i] = F.add(r.c[i], g.c[i]);
  return poly_trim(F, std::move(r));
}

template <class Ctx>
Poly<Ctx> poly_mul(const Ctx& F, const Poly<Ctx>& f, const Poly<Ctx>& g) {
  if (f.is_zero() || g.is_zero()) return {};
  Poly<Ctx> r;
  r.c.assign(f.c.size() + g.c.size() - 1, F.zero());
  for (size_t i = 0; i < f.c.size(); ++i)
    for (size_t j = 0; j < g.c.size(); ++j)
      r.c[i + j] = F.add(r.c[i + j], F.mul(f.c[i], g.c[j]));
  return poly_trim(F, std::move(r));
}

template <class Ctx>
Poly<Ctx> poly_scale(const Ctx& F, const Poly<Ctx>& f, typename Ctx::Elem s) {
  Poly<Ctx> r = f;
  for (auto& x : r.c) x = F.mul(x, s);
  return poly_trim(F, std::move(r));
}

// Division with remainder; divisor must be nonzero.
template <class Ctx>
std::pair<Poly<Ctx>, Poly<Ctx>> poly_divmod(const Ctx& F, Poly<Ctx> f, const Poly<Ctx>& g) {
  if (g.is_zero()) fail(Errc::BothZero, "division by the zero polynomial");
  Poly<Ctx> q;
  if (f.degree() >= g.degree()) q.c.assign(static_cast<size_t>(f.degree() - g.degree() + 1), F.zero());
  auto lg_inv = F.inv(g.c.back());
  while (!f.is_zero() && f.degree() >= g.degree()) {
    int shift = f.degree() - g.degree();
    auto coef = F.mul(f.c.back(), lg_inv);
    q.c[static_cast<size_t>(shift)] = coef;
    for (size_t i = 0; i < g.c.size(); ++i)
      f.c[static_cast<size_t>(shift) + i] = F.add(f.c[static_cast<size_t>(shift) + i], F.mul(coef, g.c[i]));
    f = poly_trim(F, std::move(f));
  }
  return {poly_trim(F, std::move(q)), std::move(f)};
}

template <class Ctx>
Poly<Ctx> poly_mod(const Ctx& F, Poly<Ctx> f, const Poly<Ctx>& g) {
  return poly_divmod(F, std::move(f), g).second;
}

// Monic gcd via the Euclidean algorithm.
template <class Ctx>
Poly<Ctx> poly_gcd(const Ctx& F, Poly<Ctx> f, Poly<Ctx> g) {
  if (f.is_zero() && g.is_zero()) fail(Errc::BothZero, "gcd(0, 0) is undefined");
  while (!g.is_zero()) {
    auto r = poly_mod(F, std::move(f), g);
    f = std::move(g);
    g = std::move(r);
  }
  return poly_scale(F, f, F.inv(f.c.back()));
}

// Formal derivative (characteristic-2 aware through the generic scalar sum).
template <class Ctx>
Poly<Ctx> poly_derivative(const Ctx& F, const Poly<Ctx>& f) {
  Poly<Ctx> r;
  if (f.degree() < 1) return r;
  r.c.assign(f.c.size() - 1, F.zero());
  for (size_t i = 1; i < f.c.size(); ++i) {
    // i * c_i in the prime field: odd i keeps c_i, even i kills it
    if (i & 1) r.c[i - 1] = f.c[i];
  }
  return poly_trim(F, std::move(r));
}

template <class Ctx>
typename Ctx::Elem poly_eval(const Ctx& F, const Poly<Ctx>& f, typename Ctx::Elem x) {
  auto acc = F.zero();
  for (size_t i = f.c.size(); i-- > 0;) acc = F.add(F.mul(acc, x), f.c[i]);
  return acc;
}

template <class Ctx>
Poly<Ctx> poly_powmod(const Ctx& F, Poly<Ctx> base, u128 e, const Poly<Ctx>& mod) {
  Poly<Ctx> acc;
  acc.c = {F.one()};
  base = poly_mod(F, std::move(base), mod);
  while (e) {
    if (e & 1) acc = poly_mod(F, poly_mul(F, acc, base), mod);
    base = poly_mod(F, poly_mul(F, base, base), mod);
    e >>= 1;
  }
  return acc;
}

// Resultant as the Sylvester determinant (Definition 2.1 layout: coefficient
// rows highest degree first), evaluated by Gaussian elimination over the
// field. Requires deg f > 0 and deg g > 0.
template <class Ctx>
typename Ctx::Elem resultant(const Ctx& F, const Poly<Ctx>& f, const Poly<Ctx>& g) {
  int n = f.degree(), m = g.degree();
  if (n < 1 || m < 1) fail(Errc::DegreeZeroInput, "resultant requires positive degrees");
  int N = n + m;
  std::vector<typename Ctx::Elem> M(static_cast<size_t>(N) * N, F.zero());
  auto at = [&](int r, int c) -> typename Ctx::Elem& { return M[static_cast<size_t>(r) * N + c]; };
  for (int r = 0; r < m; ++r)
    for (int j = 0; j <= n; ++j) at(r, r + j) = f.c[static_cast<size_t>(n - j)];
  for (int r = 0; r < n; ++r)
    for (int j = 0; j <= m; ++j) at(m + r, r + j) = g.c[static_cast<size_t>(m - j)];
  auto det = F.one();
  for (int col = 0; col < N; ++col) {
    int piv = -1;
    for (int r = col; r < N; ++r)
      if (!(at(r, col) == F.zero())) {
        piv = r;
        break;
      }
    if (piv < 0) return F.zero();
    if (piv != col)
      for (int j = col; j < N; ++j) std::swap(at(col, j), at(piv, j));
    det = F.mul(det, at(col, col));
    auto ic = F.inv(at(col, col));
    for (int r = col + 1; r < N; ++r) {
      if (at(r, col) == F.zero()) continue;
      auto fac = F.mul(at(r, col), ic);
      for (int j = col; j < N; ++j) at(r, j) = F.add(at(r, j), F.mul(fac, at(col, j)));
    }
  }
  return det;
}

// Same value through the Euclidean remainder sequence (characteristic 2, so
// the sign rule collapses). Kept as an independent route for cross-checks.
template <class Ctx>
typename Ctx::Elem resultant_prs(const Ctx& F, Poly<Ctx> f, Poly<Ctx> g) {
  if (f.degree() < 1 || g.degree() < 1) fail(Errc::DegreeZeroInput, "resultant requires positive degrees");
  auto acc = F.one();
  while (true) {
    if (g.is_zero()) return F.zero();
    if (g.degree() == 0) return F.mul(acc, F.pow(g.c[0], static_cast<u128>(f.degree())));
    auto r = poly_mod(F, f, g);
    int dr = r.is_zero() ? -1 : r.degree();
    // res(f, g) = lc(g)^(deg f - deg r) * res(g, r)
    acc = F.mul(acc, F.pow(g.c.back(), static_cast<u128>(f.degree() - (dr < 0 ? 0 : dr))));
    if (r.is_zero()) return F.zero();
    f = std::move(g);
    g = std::move(r);
  }
}

// All roots in the field, by exhaustive scan; multiplicities not reported.
template <class Ctx>
std::vector<typename Ctx::Elem> roots_in_field(const Ctx& F, const Poly<Ctx>& f) {
  if (F.order() > (u128(1) << 24)) fail(Errc::FieldTooLarge, "root scan capped at 2^24 elements");
  std::vector<typename Ctx::Elem> out;
  uint64_t n = static_cast<uint64_t>(F.order());
  for (uint64_t i = 0; i < n; ++i) {
    auto x = F.element_at(i);
    if (poly_eval(F, f, x) == F.zero()) out.push_back(x);
  }
  return out;
}

}  // namespace pentaperm
