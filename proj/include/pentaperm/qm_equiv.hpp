#pragma once

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pentaperm/families.hpp"
#include "pentaperm/rng.hpp"

namespace pentaperm {

// Quasi-multiplicative equivalence: f(x) = alpha * g(gamma * x^e) with
// gcd(e, q^3-1) = 1 and alpha, gamma nonzero. Tested by the two-stage
// strategy: exponent-multiset screening (Condition 1), then coefficient
// matching (Condition 2) for each surviving d.

enum class QMVerdict { Equivalent, Inequivalent, Inconclusive };

inline const char* verdict_name(QMVerdict v) {
  switch (v) {
    case QMVerdict::Equivalent: return "equivalent";
    case QMVerdict::Inequivalent: return "inequivalent";
    case QMVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct QMCertificate {
  uint64_t d = 1;  // f(x) = alpha * g(gamma * x^d) holds with this exponent
  EElem alpha, gamma;
};

struct QMReport {
  QMVerdict verdict = QMVerdict::Inconclusive;
  std::vector<uint64_t> admissible_d;  // Condition-1 survivors, f-side convention
  std::optional<QMCertificate> cert;
  std::string note;
};

inline uint64_t modstar(u128 e, uint64_t n) {
  uint64_t r = static_cast<uint64_t>(e % n);
  return r == 0 ? n : r;
}

inline uint64_t modinv_u64(uint64_t a, uint64_t n) {
  // extended Euclid; gcd(a, n) must be 1
  long long t0 = 0, t1 = 1;
  long long r0 = static_cast<long long>(n), r1 = static_cast<long long>(a % n);
  while (r1) {
    long long qt = r0 / r1;
    t0 -= qt * t1;
    std::swap(t0, t1);
    r0 -= qt * r1;
    std::swap(r0, r1);
  }
  long long t = t0;
  if (t < 0) t += static_cast<long long>(n);
  return static_cast<uint64_t>(t);
}

// Condition 1: all d in [1, n] with gcd(d, n) = 1 and {d * a_i mod* n} equal
// to {b_i} as multisets (mod* sends residue 0 to n).
inline std::vector<uint64_t> qm_condition1(std::vector<uint64_t> f_exps,
                                           std::vector<uint64_t> g_exps, uint64_t n) {
  if (n > (uint64_t(1) << 24)) fail(Errc::FieldTooLarge, "condition-1 scan capped at q^3 <= 2^24");
  std::vector<uint64_t> out;
  if (f_exps.size() != g_exps.size()) return out;
  for (auto& e : f_exps) e = modstar(e, n);
  for (auto& e : g_exps) e = modstar(e, n);
  std::sort(g_exps.begin(), g_exps.end());
  std::vector<uint64_t> mapped(f_exps.size());
  for (uint64_t d = 1; d <= n; ++d) {
    if (gcd_int<uint64_t>(d, n) != 1) continue;
    for (size_t i = 0; i < f_exps.size(); ++i)
      mapped[i] = modstar(u128(d) * f_exps[i], n);
    std::sort(mapped.begin(), mapped.end());
    if (mapped == g_exps) out.push_back(d);
  }
  return out;
}

namespace detail {

// d pairs f-terms with g-terms via d * a_i = b_{sigma(i)}; with e = d^{-1},
// the per-term equations read c_i = alpha * s_{sigma(i)} * gamma^{b_{sigma(i)}}.
struct TermPairing {
  std::vector<size_t> sigma;  // f term i matches g term sigma[i]
  bool ok = false;
};

inline TermPairing pair_terms(const Pentanomial& f, const Pentanomial& g, uint64_t d, uint64_t n) {
  TermPairing p;
  if (f.terms.size() != g.terms.size()) return p;
  std::unordered_map<uint64_t, size_t> gpos;
  for (size_t j = 0; j < g.terms.size(); ++j)
    gpos[modstar(g.terms[j].e, n)] = j;
  p.sigma.resize(f.terms.size());
  for (size_t i = 0; i < f.terms.size(); ++i) {
    uint64_t target = modstar(u128(d) * modstar(f.terms[i].e, n), n);
    auto it = gpos.find(target);
    if (it == gpos.end()) return p;
    p.sigma[i] = it->second;
  }
  p.ok = true;
  return p;
}

inline bool coeffs_match(const Pentanomial& f, const Pentanomial& g, const TermPairing& p,
                         EElem alpha, EElem gamma, uint64_t n) {
  const ExtCtx& E = *f.ctx;
  for (size_t i = 0; i < f.terms.size(); ++i) {
    uint64_t b = modstar(g.terms[p.sigma[i]].e, n);
    EElem rhs = E.mul(alpha, E.mul(g.terms[p.sigma[i]].coeff, E.pow(gamma, b)));
    if (!(f.terms[i].coeff == rhs)) return false;
  }
  return true;
}

// Baby-step giant-step discrete log in F_{q^3}^*, Q <= 2^24.
class Dlog {
 public:
  explicit Dlog(const ExtCtx& E) : E_(E), n_(static_cast<uint64_t>(E.order() - 1)) {
    omega_ = E.primitive_element();
    bs_ = 1;
    while (bs_ * bs_ < n_) ++bs_;
    baby_.reserve(bs_);
    EElem cur = E.one();
    for (uint64_t j = 0; j < bs_; ++j) {
      baby_.emplace(E.pack(cur), j);
      cur = E.mul(cur, omega_);
    }
    giant_ = E.inv(cur);  // omega^{-bs}
  }

  const EElem& omega() const { return omega_; }

  uint64_t log(EElem v) const {
    EElem cur = v;
    for (uint64_t blk = 0; blk * bs_ <= n_; ++blk) {
      auto it = baby_.find(E_.pack(cur));
      if (it != baby_.end()) return blk * bs_ + it->second;
      cur = E_.mul(cur, giant_);
    }
    fail(Errc::ConstructionFailed, "discrete log failed on a nonzero element");
  }

 private:
  const ExtCtx& E_;
  uint64_t n_;
  EElem omega_, giant_;
  uint64_t bs_ = 0;
  std::unordered_map<uint64_t, uint64_t> baby_;
};

}  // namespace detail

// Condition 2 for one admissible d: find (alpha, gamma) matching all five
// coefficients, or report none. Brute-force gamma for q^3 <= 2^18; larger
// fields substitute alpha out and solve the gamma-power equations by root
// extraction (in discrete-log coordinates).
inline std::optional<std::pair<EElem, EElem>> qm_condition2(const Pentanomial& f,
                                                            const Pentanomial& g, uint64_t d,
                                                            bool* resource_limited = nullptr) {
  const ExtCtx& E = *f.ctx;
  if (!E.same_field(*g.ctx)) fail(Errc::FieldMismatch, "pentanomials bound to different fields");
  uint64_t n = static_cast<uint64_t>(E.order() - 1);
  if (resource_limited) *resource_limited = false;
  auto pairing = detail::pair_terms(f, g, d, n);
  if (!pairing.ok) return std::nullopt;

  if (E.order() <= (u128(1) << 18)) {
    uint64_t b0 = modstar(g.terms[pairing.sigma[0]].e, n);
    EElem s0 = g.terms[pairing.sigma[0]].coeff;
    for (uint64_t idx = 1; idx < E.order(); ++idx) {
      EElem gamma = E.element_at(idx);
      EElem alpha = E.mul(f.terms[0].coeff, E.inv(E.mul(s0, E.pow(gamma, b0))));
      if (detail::coeffs_match(f, g, pairing, alpha, gamma, n)) return {{alpha, gamma}};
    }
    return std::nullopt;
  }

  if (E.order() > (u128(1) << 24)) {
    if (resource_limited) *resource_limited = true;
    return std::nullopt;
  }

  // Constraint propagation: gamma^{b_i - b_0} = (c_i s_0) / (c_0 s_i) for
  // i = 1..4, i.e. linear congruences delta_i * s = e_i (mod n) for
  // s = dlog(gamma). Merge them into one arithmetic progression and test the
  // survivors.
  detail::Dlog dl(E);
  uint64_t b0 = modstar(g.terms[pairing.sigma[0]].e, n);
  EElem s0 = g.terms[pairing.sigma[0]].coeff;
  EElem c0 = f.terms[0].coeff;
  u128 r = 0, M = 1;  // s = r (mod M); M divides n throughout
  for (size_t i = 1; i < f.terms.size(); ++i) {
    uint64_t bi = modstar(g.terms[pairing.sigma[i]].e, n);
    uint64_t delta = (bi + n - b0) % n;
    EElem v = E.mul(E.mul(f.terms[i].coeff, s0), E.inv(E.mul(c0, g.terms[pairing.sigma[i]].coeff)));
    uint64_t ev = dl.log(v);
    // substitute s = r + M j: (delta M) j = ev - delta r (mod n)
    u128 a = (u128(delta) * M) % n;
    u128 c = (u128(ev) + u128(n) - (u128(delta) * r) % n) % n;
    u128 gg = gcd_int<u128>(a == 0 ? u128(n) : a, u128(n));
    if (c % gg != 0) return std::nullopt;
    if (a == 0) continue;  // constraint already implied by the progression
    u128 n2 = n / gg;
    u128 j0 = ((c / gg) % n2) *
              u128(modinv_u64(static_cast<uint64_t>((a / gg) % n2), static_cast<uint64_t>(n2))) % n2;
    r += M * j0;
    M *= n2;
    r %= M;
  }
  uint64_t candidates = static_cast<uint64_t>(u128(n) / M);
  if (candidates > (uint64_t(1) << 20)) {
    if (resource_limited) *resource_limited = true;
    return std::nullopt;
  }
  for (u128 s = r; s < n; s += M) {
    EElem gamma = E.pow(dl.omega(), s);
    EElem alpha = E.mul(f.terms[0].coeff, E.inv(E.mul(s0, E.pow(gamma, b0))));
    if (detail::coeffs_match(f, g, pairing, alpha, gamma, n)) return {{alpha, gamma}};
  }
  return std::nullopt;
}

// Full decision: Condition 1, then Condition 2 over each admissible d.
// verdict = equivalent only with a certificate verified on 100 random points
// (exhaustively for q^3 <= 2^12); inequivalent requires all admissible d
// exhausted; inconclusive is reserved for resource limits.
inline QMReport qm_decide(const Pentanomial& f, const Pentanomial& g, uint64_t seed = 0) {
  const ExtCtx& E = *f.ctx;
  if (!E.same_field(*g.ctx)) fail(Errc::FieldMismatch, "pentanomials bound to different fields");
  QMReport rep;
  if (E.order() - 1 > (u128(1) << 24)) {
    rep.verdict = QMVerdict::Inconclusive;
    rep.note = "field too large for the exponent screen";
    return rep;
  }
  uint64_t n = static_cast<uint64_t>(E.order() - 1);
  rep.admissible_d = qm_condition1(f.exponents(), g.exponents(), n);
  bool limited = false;
  for (uint64_t d : rep.admissible_d) {
    bool lim = false;
    auto sol = qm_condition2(f, g, d, &lim);
    limited = limited || lim;
    if (!sol) continue;
    uint64_t e_cert = modinv_u64(d % n == 0 ? n : d % n, n);
    QMCertificate cert{e_cert, sol->first, sol->second};
    // re-verify: f(x) = alpha * g(gamma * x^e) pointwise
    auto check = [&](EElem x) {
      EElem u = E.mul(cert.gamma, E.pow(x, cert.d));
      return eval_penta(f, x) == E.mul(cert.alpha, eval_penta(g, u));
    };
    bool ok = true;
    if (E.order() <= (u128(1) << 12)) {
      for (uint64_t idx = 0; idx < E.order() && ok; ++idx) ok = check(E.element_at(idx));
    } else {
      Rng rng(derive_seed(seed, "qm-verify", f.m, f.family + "/" + g.family));
      for (int t = 0; t < 100 && ok; ++t) {
        EElem x = E.unpack128(rng.bits(E.dim_f2()));
        ok = check(x);
      }
    }
    if (!ok) fail(Errc::ConstructionFailed, "certificate failed re-verification");
    rep.verdict = QMVerdict::Equivalent;
    rep.cert = cert;
    return rep;
  }
  if (limited) {
    rep.verdict = QMVerdict::Inconclusive;
    rep.note = "condition-2 resource limit";
  } else {
    rep.verdict = QMVerdict::Inequivalent;
    rep.note = rep.admissible_d.empty() ? "condition 1: no admissible d"
                                        : "condition 2 failed for every admissible d";
  }
  return rep;
}

}  // namespace pentaperm
