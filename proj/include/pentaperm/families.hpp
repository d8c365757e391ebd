#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pentaperm/binary_field.hpp"
#include "pentaperm/ext_field.hpp"
#include "pentaperm/parallel.hpp"
#include "pentaperm/polyring.hpp"

namespace pentaperm {

// ---------------------------------------------------------------------------
// Registry types
// ---------------------------------------------------------------------------

enum class CoeffSlot { One, Eps, Eps2 };

// One exponent digit: c0 + ck*2^k + ci*2^i evaluated at the entry's params.
struct Digit {
  int c0 = 0, ck = 0, ci = 0;
  long long value(int k, int i) const {
    long long v = c0;
    if (ck) v += static_cast<long long>(ck) << k;
    if (ci) v += static_cast<long long>(ci) << i;
    return v;
  }
};

// Exponent s0 + s1 q + s2 q^2 + s3 q^3 with digits affine in 2^k, 2^i.
struct TemplTerm {
  CoeffSlot slot = CoeffSlot::One;
  std::array<Digit, 4> dig{};
};

struct ExponentTemplate {
  std::vector<TemplTerm> terms;
  bool uses_k = false;
  bool uses_i = false;
  std::optional<int> i_default = std::nullopt;  // 0 for theta-rows (theta = 2^0 = 1)
};

enum class Cond {
  Always,
  MOdd,
  MNot1Mod3,
  MNot2Mod3,
  Gcd2k1Q1,
  MNot5Mod15,   // catalogue row K15, recorded verbatim from its source
  MNot10Mod15,  // catalogue rows K17/K18, recorded verbatim from their source
  External,
};

enum class Status { Proven, Conjectured, Literature };

enum class WitnessRule {
  Fallback,           // exhaustive-scan witness
  QuarticAlphaOne,    // roots of x^4 + alpha x + 1, alpha a non-cube of F_q*
  OmegaCubeShift,     // (alpha + 1, 1) with alpha = w^((q^2+q+1)/3)
  CubicX3X2plus1,     // (alpha, 1) with alpha a root of x^3 + x^2 + 1
  QuarticAlphaAlpha,  // roots of x^4 + alpha x + alpha
  SubgroupAlpha,      // (alpha, 1) with alpha = w^((q^3-1)/gcd(2^k+1, q-1))
};

struct FamilyEntry {
  std::string id;
  ExponentTemplate tpl;
  Cond cond = Cond::Always;
  Status status = Status::Proven;
  WitnessRule wrule = WitnessRule::Fallback;
  std::string note;
};

// ---------------------------------------------------------------------------
// Instantiated pentanomial
// ---------------------------------------------------------------------------

struct PentaTerm {
  EElem coeff;
  u128 e = 0;                        // canonical exponent in [1, q^3-1]
  std::array<uint32_t, 3> qdig{};    // base-q digits of e
  bool small_digits = false;         // all digits <= 15: Frobenius fast path
};

struct Pentanomial {
  const ExtCtx* ctx = nullptr;
  std::string family;
  int m = 0;
  std::optional<int> k, i;
  std::vector<PentaTerm> terms;

  std::vector<uint64_t> exponents() const {
    std::vector<uint64_t> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back(static_cast<uint64_t>(t.e));
    return out;
  }
};

struct PermCheckResult {
  bool is_perm = false;
  std::optional<std::pair<EElem, EElem>> witness;  // x1 != x2, f(x1) = f(x2)
  double elapsed_ms = 0.0;
  uint64_t scanned = 0;
};

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

namespace detail {

inline TemplTerm term(CoeffSlot slot, Digit s0, Digit s1 = {}, Digit s2 = {}, Digit s3 = {}) {
  return TemplTerm{slot, {s0, s1, s2, s3}};
}

inline Digit d(int c0) { return Digit{c0, 0, 0}; }
inline Digit dk(int ck, int c0 = 0) { return Digit{c0, ck, 0}; }
inline Digit di(int ci, int c0 = 0) { return Digit{c0, 0, ci}; }

}  // namespace detail

inline const std::vector<FamilyEntry>& family_registry() {
  using detail::d;
  using detail::di;
  using detail::dk;
  using detail::term;
  static const std::vector<FamilyEntry> reg = [] {
    std::vector<FamilyEntry> r;
    auto one = CoeffSlot::One;
    auto eps = CoeffSlot::Eps;
    auto ep2 = CoeffSlot::Eps2;

    // Proven families T1..T11, in order.
    r.push_back({"T1",
                 {{term(one, d(1)), term(one, d(2), d(0), d(2)), term(one, d(2), d(2)),
                   term(one, d(2)), term(one, d(0), d(2))}},
                 Cond::Always, Status::Proven, WitnessRule::Fallback, "x + x^{2q^2+2} + x^{2q+2} + x^2 + x^{2q}"});
    r.push_back({"T2",
                 {{term(one, d(1)), term(one, d(1), d(0), d(4)), term(one, d(4), d(1)),
                   term(one, d(4), d(0), d(1)), term(one, d(1), d(4))}},
                 Cond::MOdd, Status::Proven, WitnessRule::QuarticAlphaOne,
                 "x + x^{4q^2+1} + x^{q+4} + x^{q^2+4} + x^{4q+1}"});
    r.push_back({"T3",
                 {{term(one, d(1)), term(one, d(2), d(0), d(1)), term(one, d(1), d(2)),
                   term(one, d(3)), term(one, d(0), d(3))}},
                 Cond::MOdd, Status::Proven, WitnessRule::OmegaCubeShift,
                 "x + x^{q^2+2} + x^{2q+1} + x^3 + x^{3q}"});
    r.push_back({"T4",
                 {{term(one, d(1)), term(one, d(0), d(2), d(2)), term(one, d(2), d(0), d(2)),
                   term(one, d(4)), term(one, d(0), d(4))}},
                 Cond::MNot1Mod3, Status::Proven, WitnessRule::CubicX3X2plus1,
                 "x + x^{2q^2+2q} + x^{2q^2+2} + x^4 + x^{4q}"});
    r.push_back({"T5",
                 {{term(one, d(2)), term(one, d(1)), term(one, d(0), d(1)),
                   term(one, d(0), d(1), d(1)), term(one, d(1), d(0), d(1))}},
                 Cond::MNot1Mod3, Status::Proven, WitnessRule::Fallback,
                 "x^2 + x + x^q + x^{q^2+q} + x^{q^2+1} (stated without proof)"});
    r.push_back({"T6",
                 {{term(one, d(2)), term(one, d(-2), d(2), d(2)), term(one, d(0), d(-2), d(2), d(2)),
                   term(one, d(1), d(-1), d(1)), term(one, d(0), d(1), d(-1), d(1))}},
                 Cond::MNot2Mod3, Status::Proven, WitnessRule::CubicX3X2plus1,
                 "x^2 + x^{2q^2+2q-2} + x^{2q^3+2q^2-2q} + x^{q^2-q+1} + x^{q^3-q^2+q}"});
    r.push_back({"T7",
                 {{term(one, d(2)), term(one, d(1)), term(one, d(0), d(1)),
                   term(one, d(0), d(2), d(2)), term(one, d(2), d(0), d(2))}},
                 Cond::Always, Status::Proven, WitnessRule::Fallback,
                 "x^2 + x + x^q + x^{2q^2+2q} + x^{2q^2+2}"});
    r.push_back({"T8",
                 {{term(one, d(2)), term(one, d(1), d(-1), d(3)), term(one, d(0), d(1), d(-1), d(3)),
                   term(one, d(3), d(-1), d(1)), term(one, d(0), d(3), d(-1), d(1))}},
                 Cond::Always, Status::Proven, WitnessRule::Fallback,
                 "x^2 + x^{3q^2-q+1} + x^{3q^3-q^2+q} + x^{q^2-q+3} + x^{q^3-q^2+3q}"});
    r.push_back({"T9",
                 {{term(one, d(4)), term(one, d(4), d(0), d(1)), term(one, d(1), d(4)),
                   term(one, d(1), d(0), d(4)), term(one, d(4), d(1))}},
                 Cond::MOdd, Status::Proven, WitnessRule::QuarticAlphaAlpha,
                 "x^4 + x^{q^2+4} + x^{4q+1} + x^{4q^2+1} + x^{q+4}"});
    r.push_back({"T10",
                 {{term(one, d(2)), term(one, d(2), d(1)), term(one, d(0), d(2), d(1)),
                   term(one, d(0), d(0), d(3)), term(one, d(3))}},
                 Cond::MNot2Mod3, Status::Proven, WitnessRule::Fallback,
                 "x^2 + x^{q+2} + x^{q^2+2q} + x^{3q^2} + x^3 (stated without proof)"});
    r.push_back({"T11",
                 {{term(one, dk(1, 1)), term(one, d(0), dk(1, 1)), term(one, d(0), d(0), dk(1, 1)),
                   term(one, di(1)), term(one, d(0), di(1))},
                  true, true, std::nullopt},
                 Cond::Gcd2k1Q1, Status::Proven, WitnessRule::SubgroupAlpha,
                 "x^{2^k+1} + x^{(2^k+1)q} + x^{(2^k+1)q^2} + x^{2^i} + x^{2^i q}"});

    // Conjectured families.
    r.push_back({"C1",
                 {{term(one, dk(1, 1)), term(one, d(1), d(0), dk(1)), term(one, dk(1, 0), d(1)),
                   term(one, dk(1, 0), d(0), d(1)), term(one, d(1), dk(1))},
                  true, false, std::nullopt},
                 Cond::Gcd2k1Q1, Status::Conjectured, WitnessRule::Fallback,
                 "x^{2^k+1} + x^{2^k q^2+1} + x^{q+2^k} + x^{q^2+2^k} + x^{2^k q+1}"});
    r.push_back({"C2",
                 {{term(one, dk(1, 1)), term(one, d(0), dk(1, 1)), term(one, dk(1, 0), d(1)),
                   term(one, dk(1, 0), d(0), d(1)), term(one, d(0), d(1), dk(1))},
                  true, false, std::nullopt},
                 Cond::Gcd2k1Q1, Status::Conjectured, WitnessRule::Fallback,
                 "x^{2^k+1} + x^{(2^k+1)q} + x^{q+2^k} + x^{q^2+2^k} + x^{2^k q^2+q}"});

    // Catalogue rows K1..K20: the known permutation pentanomials up to QM
    // equivalence. theta = 2^i (default i = 0); coefficient slots are
    // instantiated at caller-supplied values, default 1.
    auto theta_row = [&](std::string id, std::vector<TemplTerm> ts, Cond c) {
      ExponentTemplate t{std::move(ts)};
      t.uses_i = true;
      t.i_default = 0;
      return FamilyEntry{std::move(id), std::move(t), c, Status::Literature, WitnessRule::Fallback, "catalogue"};
    };
    r.push_back(theta_row("K1",
                          {term(eps, d(1)), term(eps, d(0), d(0), d(1)),
                           term(one, d(0), di(1), di(-1), di(1)),
                           term(one, di(-1), di(1), di(1)), term(one, di(1), di(-1), di(1))},
                          Cond::Always));
    r.push_back(theta_row("K2",
                          {term(eps, d(1)), term(eps, d(0), d(1)), term(one, di(1)),
                           term(one, d(0), di(1)), term(one, d(0), d(0), di(1))},
                          Cond::Always));
    r.push_back(theta_row("K3",
                          {term(eps, d(1)), term(eps, d(0), d(1)), term(one, di(2), di(1)),
                           term(one, d(0), di(2), di(1)), term(one, di(1), d(0), di(2))},
                          Cond::MOdd));
    r.push_back(theta_row("K4",
                          {term(eps, d(1)), term(eps, d(0), d(1)), term(eps, d(0), d(0), d(1)),
                           term(one, di(-1), di(-1), di(3)), term(one, d(0), di(-1), di(-1), di(3))},
                          Cond::Always));
    r.push_back(theta_row("K5",
                          {term(eps, di(1)), term(eps, d(0), di(1)), term(eps, d(0), d(0), di(1)),
                           term(one, d(-1), d(-1), d(3)), term(one, d(0), d(-1), d(-1), d(3))},
                          Cond::Always));
    r.push_back(theta_row("K6",
                          {term(one, di(1)), term(one, d(0), di(1)), term(one, d(0), d(0), di(1)),
                           term(eps, d(0), d(1), d(-1), d(1)), term(eps, d(-1), d(1), d(1))},
                          Cond::Always));
    r.push_back(theta_row("K7",
                          {term(eps, d(1)), term(eps, d(0), d(1)), term(eps, d(0), d(0), d(1)),
                           term(one, di(1)), term(one, d(0), di(1))},
                          Cond::Always));
    auto plain_row = [&](std::string id, std::vector<TemplTerm> ts, Cond c) {
      return FamilyEntry{std::move(id), {std::move(ts)}, c, Status::Literature, WitnessRule::Fallback, "catalogue"};
    };
    r.push_back(plain_row("K8",
                          {term(one, d(2)), term(eps, d(0), d(0), d(1)), term(eps, d(1)),
                           term(one, d(1), d(0), d(1)), term(one, d(1), d(1))},
                          Cond::MOdd));
    r.push_back(plain_row("K9",
                          {term(eps, d(1)), term(one, d(2)), term(one, d(0), d(2)),
                           term(one, d(1), d(0), d(1)), term(one, d(1), d(1))},
                          Cond::MNot2Mod3));
    r.push_back(plain_row("K10",
                          {term(eps, d(1)), term(one, d(2)), term(one, d(0), d(0), d(2)),
                           term(one, d(1), d(0), d(1)), term(one, d(1), d(1))},
                          Cond::MNot1Mod3));
    r.push_back(plain_row("K11",
                          {term(eps, d(1)), term(one, d(1), d(0), d(2)), term(one, d(2), d(1)),
                           term(one, d(2), d(0), d(1)), term(one, d(1), d(2))},
                          Cond::Always));
    r.push_back(plain_row("K12",
                          {term(one, d(4)), term(eps, d(1), d(0), d(1)), term(eps, d(1), d(1)),
                           term(one, d(2), d(0), d(2)), term(one, d(2), d(2))},
                          Cond::Always));
    r.push_back(plain_row("K13",
                          {term(one, d(4)), term(one, d(0), d(4)), term(one, d(0), d(0), d(4)),
                           term(eps, d(1), d(1)), term(eps, d(0), d(1), d(1))},
                          Cond::Always));
    r.push_back(plain_row("K14",
                          {term(one, d(4)), term(eps, d(0), d(1)), term(eps, d(0), d(0), d(1)),
                           term(one, d(2), d(0), d(2)), term(one, d(2), d(2))},
                          Cond::Always));
    r.push_back(plain_row("K15",
                          {term(one, d(1)), term(one, d(4)), term(one, d(0), d(4)),
                           term(one, d(2)), term(one, d(0), d(2))},
                          Cond::MNot5Mod15));
    r.push_back(plain_row("K16",
                          {term(one, d(4)), term(one, d(0), d(1)), term(one, d(0), d(0), d(1)),
                           term(one, d(2)), term(one, d(0), d(2))},
                          Cond::Always));
    r.push_back(plain_row("K17",
                          {term(one, d(4)), term(one, d(1)), term(one, d(0), d(1)),
                           term(one, d(2)), term(one, d(0), d(2))},
                          Cond::MNot10Mod15));
    r.push_back(plain_row("K18",
                          {term(one, d(4)), term(one, d(1)), term(one, d(0), d(1)),
                           term(one, d(0), d(2)), term(one, d(0), d(0), d(2))},
                          Cond::MNot10Mod15));
    r.push_back(plain_row("K19",
                          {term(one, d(4)), term(one, d(2), d(0), d(2)), term(one, d(2), d(2)),
                           term(one, d(1), d(-1), d(1)), term(one, d(0), d(1), d(-1), d(1))},
                          Cond::Always));
    r.push_back(plain_row("K20",
                          {term(one, d(1)), term(one, d(0), d(1)), term(one, d(0), d(0), d(1)),
                           term(eps, d(-1), d(1), d(1)), term(ep2, d(1), d(-1), d(1))},
                          Cond::External));
    return r;
  }();
  return reg;
}

inline const FamilyEntry& family_by_id(const std::string& id) {
  for (const auto& e : family_registry())
    if (e.id == id) return e;
  fail(Errc::MissingParams, "unknown family id: " + id);
}

// ---------------------------------------------------------------------------
// Instantiation and evaluation
// ---------------------------------------------------------------------------

inline Pentanomial instantiate_family(const FamilyEntry& entry, const ExtCtx& ctx,
                                      std::optional<int> k = std::nullopt,
                                      std::optional<int> i = std::nullopt,
                                      std::optional<EElem> eps = std::nullopt,
                                      std::optional<EElem> eps2 = std::nullopt) {
  if (ctx.ext_degree() != 3) fail(Errc::UnsupportedDegree, "pentanomial families live in F_{q^3}");
  if (entry.tpl.uses_k && !k) fail(Errc::MissingParams, entry.id + " requires parameter k");
  if (entry.tpl.uses_i && !i) {
    if (entry.tpl.i_default) i = entry.tpl.i_default;
    else fail(Errc::MissingParams, entry.id + " requires parameter i");
  }
  // keep digit * q^3 inside 128-bit signed range for every m <= 32
  if ((k && (*k < 0 || *k > 30)) || (i && (*i < 0 || *i > 30)))
    fail(Errc::UnsupportedDegree, "parameters k, i must lie in [0, 30]");
  int kk = k.value_or(0), ii = i.value_or(0);
  i128 q = static_cast<i128>(ctx.base().order());
  i128 N = static_cast<i128>(ctx.order()) - 1;

  Pentanomial f;
  f.ctx = &ctx;
  f.family = entry.id;
  f.m = ctx.base().m();
  f.k = entry.tpl.uses_k ? k : std::nullopt;
  f.i = entry.tpl.uses_i ? i : std::nullopt;

  std::vector<std::pair<u128, EElem>> raw;
  for (const auto& t : entry.tpl.terms) {
    i128 e = 0, qp = 1;
    for (int j = 0; j < 4; ++j) {
      e += static_cast<i128>(t.dig[static_cast<size_t>(j)].value(kk, ii)) * qp;
      qp *= q;
    }
    if (e < 1) fail(Errc::ConstructionFailed, entry.id + ": nonpositive exponent at this (m,k,i)");
    i128 r = e % N;
    if (r == 0) r = N;  // nonzero exponent reducing to 0 becomes q^3-1
    EElem coeff = ctx.one();
    if (t.slot == CoeffSlot::Eps) coeff = eps.value_or(ctx.one());
    if (t.slot == CoeffSlot::Eps2) coeff = eps2.value_or(ctx.one());
    raw.emplace_back(static_cast<u128>(r), coeff);
  }
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t j = 0; j < raw.size();) {
    EElem coeff = raw[j].second;
    size_t j2 = j + 1;
    while (j2 < raw.size() && raw[j2].first == raw[j].first) {
      coeff = ctx.add(coeff, raw[j2].second);
      ++j2;
    }
    if (!(coeff == ctx.zero())) {
      PentaTerm term;
      term.coeff = coeff;
      term.e = raw[j].first;
      u128 e = term.e;
      uint64_t qq = ctx.base().q();
      bool small = true;
      for (int dgt = 0; dgt < 3; ++dgt) {
        uint32_t v = static_cast<uint32_t>(e % qq);
        term.qdig[static_cast<size_t>(dgt)] = v;
        if (v > 15) small = false;
        e /= qq;
      }
      term.small_digits = small;
      f.terms.push_back(term);
    }
    j = j2;
  }
  return f;
}

namespace detail {

// Powers by digit with memoization across the five terms of one evaluation.
struct PowCache {
  EElem p[16];
  uint32_t have = 0;
};

inline EElem pow_digit(const ExtCtx& E, PowCache& c, const EElem& base, uint32_t d) {
  if (d == 0) return E.one();
  if (d == 1) return base;
  if (c.have & (uint32_t(1) << d)) return c.p[d];
  EElem v = (d & 1) ? E.mul(pow_digit(E, c, base, d - 1), base)
                    : E.sqr(pow_digit(E, c, base, d / 2));
  c.p[d] = v;
  c.have |= uint32_t(1) << d;
  return v;
}

}  // namespace detail

// Frobenius fast path (digits in [0,15]) with square-and-multiply fallback
// per term; eval_penta_slow forces the fallback for cross-checking.
inline EElem eval_penta(const Pentanomial& f, EElem x) {
  const ExtCtx& E = *f.ctx;
  if (x == E.zero()) return E.zero();  // all exponents are >= 1
  EElem acc = E.zero();
  bool have_frob = false;
  EElem y, z;
  detail::PowCache cx, cy, cz;
  for (const auto& t : f.terms) {
    EElem v;
    if (t.small_digits) {
      if (!have_frob) {
        y = E.frobenius(x, 1);
        z = E.ext_degree() == 3 ? E.frobenius(x, 2) : E.zero();
        have_frob = true;
      }
      v = detail::pow_digit(E, cx, x, t.qdig[0]);
      if (t.qdig[1]) v = E.mul(v, detail::pow_digit(E, cy, y, t.qdig[1]));
      if (t.qdig[2]) v = E.mul(v, detail::pow_digit(E, cz, z, t.qdig[2]));
    } else {
      v = E.pow(x, t.e);
    }
    if (!(t.coeff == E.one())) v = E.mul(v, t.coeff);
    acc = E.add(acc, v);
  }
  return acc;
}

inline EElem eval_penta_slow(const Pentanomial& f, EElem x) {
  const ExtCtx& E = *f.ctx;
  EElem acc = E.zero();
  for (const auto& t : f.terms) {
    EElem v = E.pow(x, t.e);
    if (!(t.coeff == E.one())) v = E.mul(v, t.coeff);
    acc = E.add(acc, v);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Exhaustive permutation check
// ---------------------------------------------------------------------------

// Occupancy-bitmap scan over all q^3 inputs. Workers take contiguous input
// ranges and own private bitmaps; the single-owner merge detects cross-worker
// duplicates. When any duplicate exists, a canonical sequential re-scan
// recovers the first collision in input order, so the reported witness does
// not depend on the worker count.
inline PermCheckResult is_permutation(const Pentanomial& f, int nthreads = 0) {
  const ExtCtx& E = *f.ctx;
  if (E.order() > (u128(1) << 24)) fail(Errc::FieldTooLarge, "permutation scan capped at q^3 <= 2^24");
  if (nthreads <= 0) nthreads = default_thread_count();
  auto t0 = std::chrono::steady_clock::now();

  uint64_t n = static_cast<uint64_t>(E.order());
  size_t words = static_cast<size_t>((n + 63) / 64);
  uint64_t nt = std::min<uint64_t>(static_cast<uint64_t>(nthreads), n);
  std::vector<std::vector<uint64_t>> maps(static_cast<size_t>(nt));
  std::atomic<bool> dup_found{false};

  parallel_ranges(n, static_cast<int>(nt), [&](int w, uint64_t lo, uint64_t hi) {
    auto& bm = maps[static_cast<size_t>(w)];
    bm.assign(words, 0);
    for (uint64_t idx = lo; idx < hi; ++idx) {
      uint64_t img = E.pack(eval_penta(f, E.element_at(idx)));
      uint64_t& word = bm[img >> 6];
      uint64_t bit = uint64_t(1) << (img & 63);
      if (word & bit) {
        dup_found.store(true, std::memory_order_relaxed);
        return;
      }
      word |= bit;
    }
  });

  PermCheckResult res;
  res.scanned = n;
  if (!dup_found.load()) {
    std::vector<uint64_t> acc(words, 0);
    for (const auto& bm : maps) {
      for (size_t w = 0; w < words; ++w) {
        if (acc[w] & bm[w]) {
          dup_found.store(true);
          break;
        }
        acc[w] |= bm[w];
      }
      if (dup_found.load()) break;
    }
  }

  if (dup_found.load()) {
    // canonical witness: first repeated image in input order
    std::vector<uint64_t> seen(words, 0);
    uint64_t x2_idx = 0, img2 = 0;
    for (uint64_t idx = 0;; ++idx) {
      uint64_t img = E.pack(eval_penta(f, E.element_at(idx)));
      if (seen[img >> 6] & (uint64_t(1) << (img & 63))) {
        x2_idx = idx;
        img2 = img;
        break;
      }
      seen[img >> 6] |= uint64_t(1) << (img & 63);
    }
    EElem x2 = E.element_at(x2_idx);
    for (uint64_t idx = 0; idx < x2_idx; ++idx) {
      EElem x1 = E.element_at(idx);
      if (E.pack(eval_penta(f, x1)) == img2) {
        res.witness = {x1, x2};
        break;
      }
    }
    res.is_perm = false;
    if (!res.witness || eval_penta(f, res.witness->first) != eval_penta(f, res.witness->second) ||
        res.witness->first == res.witness->second)
      fail(Errc::ConstructionFailed, "internal: witness recovery failed");
  } else {
    res.is_perm = true;
  }
  res.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

// ---------------------------------------------------------------------------
// Predicted conditions and verification
// ---------------------------------------------------------------------------

inline bool predicted(const FamilyEntry& entry, int m, std::optional<int> k = std::nullopt) {
  switch (entry.cond) {
    case Cond::Always: return true;
    case Cond::MOdd: return m % 2 == 1;
    case Cond::MNot1Mod3: return m % 3 != 1;
    case Cond::MNot2Mod3: return m % 3 != 2;
    case Cond::MNot5Mod15: return m % 15 != 5;
    case Cond::MNot10Mod15: return m % 15 != 10;
    case Cond::Gcd2k1Q1: {
      if (!k) fail(Errc::MissingParams, entry.id + " condition needs k");
      if (*k < 0 || *k > 30) fail(Errc::UnsupportedDegree, "parameter k must lie in [0, 30]");
      uint64_t q1 = (uint64_t(1) << m) - 1;
      return gcd_int<uint64_t>((uint64_t(1) << *k) + 1, q1) == 1;
    }
    case Cond::External:
      fail(Errc::ExternalCondition, entry.id + " carries an external condition (see its source)");
  }
  return false;
}

// Context cache: one tower per m, shared across scans.
class TowerCache {
 public:
  const ExtCtx& get(int m) {
    auto it = cache_.find(m);
    if (it != cache_.end()) return *it->second;
    auto ctx = std::make_unique<ExtCtx>(FieldCtx(m), 3);
    auto* raw = ctx.get();
    cache_.emplace(m, std::move(ctx));
    return *raw;
  }

 private:
  std::map<int, std::unique_ptr<ExtCtx>> cache_;
};

struct VerifyRow {
  std::string family;
  int m = 0;
  std::optional<int> k, i;
  std::optional<bool> predicted;  // empty for external conditions
  bool actual = false;
  std::optional<bool> agree;
  std::optional<std::string> witness_x1, witness_x2;
  double elapsed_ms = 0.0;
};

inline VerifyRow check_point(const FamilyEntry& entry, const ExtCtx& ctx,
                             std::optional<int> k, std::optional<int> i, int nthreads) {
  auto f = instantiate_family(entry, ctx, k, i);
  auto res = is_permutation(f, nthreads);
  VerifyRow row;
  row.family = entry.id;
  row.m = ctx.base().m();
  row.k = f.k;
  row.i = f.i;
  row.actual = res.is_perm;
  row.elapsed_ms = res.elapsed_ms;
  if (entry.cond != Cond::External) {
    bool p = predicted(entry, row.m, k);
    row.predicted = p;
    row.agree = (p == res.is_perm);
  }
  if (res.witness) {
    row.witness_x1 = ctx.hex(res.witness->first);
    row.witness_x2 = ctx.hex(res.witness->second);
  }
  return row;
}

// Concordance table for one family over ranges of m (and k, i when used).
inline std::vector<VerifyRow> verify_entry(const FamilyEntry& entry, const std::vector<int>& ms,
                                           const std::vector<int>& ks, const std::vector<int>& is,
                                           TowerCache& towers, int nthreads = 0) {
  std::vector<VerifyRow> rows;
  for (int m : ms) {
    const ExtCtx& ctx = towers.get(m);
    std::vector<std::optional<int>> kvals{std::nullopt}, ivals{std::nullopt};
    if (entry.tpl.uses_k) {
      if (ks.empty()) fail(Errc::MissingParams, entry.id + " needs a k range");
      kvals.clear();
      for (int k : ks) kvals.emplace_back(k);
    }
    if (entry.tpl.uses_i && !is.empty()) {
      ivals.clear();
      for (int i : is) ivals.emplace_back(i);
    } else if (entry.tpl.uses_i && !entry.tpl.i_default) {
      fail(Errc::MissingParams, entry.id + " needs an i range");
    }
    for (auto k : kvals)
      for (auto i : ivals) rows.push_back(check_point(entry, ctx, k, i, nthreads));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Converse witnesses
// ---------------------------------------------------------------------------

namespace detail {

inline std::pair<EElem, EElem> quartic_witness(const Pentanomial& f, bool constant_is_alpha) {
  const ExtCtx& E = *f.ctx;
  const FieldCtx& B = E.base();
  if (B.m() % 2 != 0)
    fail(Errc::ConstructionFailed, "quartic witness construction needs even m (x^3 must be non-surjective)");
  for (uint64_t a = 1; a < B.q(); ++a) {
    FElem alpha{a};
    if (is_cube(B, alpha)) continue;
    // gamma0: the unique F_q solution of x^4 + alpha x + e0
    FElem e0 = constant_is_alpha ? alpha : B.one();
    Poly<FieldCtx> quart;
    quart.c = {e0, alpha, B.zero(), B.zero(), B.one()};
    auto base_roots = roots_in_field(B, quart);
    if (base_roots.size() != 1) continue;
    EElem gamma0 = E.embed(base_roots[0]);
    Poly<ExtCtx> quart_ext;
    for (auto c : quart.c) quart_ext.c.push_back(E.embed(c));
    auto ext_roots = roots_in_field(E, quart_ext);
    for (const auto& r : ext_roots) {
      if (E.in_base(r)) continue;
      if (eval_penta(f, r) == eval_penta(f, gamma0)) return {r, gamma0};
    }
  }
  fail(Errc::ConstructionFailed, "no quartic witness admissible at this m: the construction premises failed");
}

}  // namespace detail

// Converse constructions for the recipe-backed families; others fall back
// to the scan witness. The returned pair is re-verified by
// evaluation.
inline std::pair<EElem, EElem> find_predicted_collision(const FamilyEntry& entry, const ExtCtx& ctx,
                                                        std::optional<int> k = std::nullopt,
                                                        std::optional<int> i = std::nullopt,
                                                        int nthreads = 0) {
  int m = ctx.base().m();
  if (entry.cond != Cond::External && predicted(entry, m, k))
    fail(Errc::ConstructionFailed, entry.id + " is predicted to permute at m=" + std::to_string(m));
  auto f = instantiate_family(entry, ctx, k, i);
  std::pair<EElem, EElem> pair;
  switch (entry.wrule) {
    case WitnessRule::QuarticAlphaOne:
      pair = detail::quartic_witness(f, false);
      break;
    case WitnessRule::QuarticAlphaAlpha:
      pair = detail::quartic_witness(f, true);
      break;
    case WitnessRule::OmegaCubeShift: {
      u128 idx = (ctx.base().order() * ctx.base().order() + ctx.base().order() + 1);
      if (idx % 3 != 0)
        fail(Errc::ConstructionFailed, "q^2+q+1 not divisible by 3; construction needs even m");
      EElem alpha = ctx.pow(ctx.primitive_element(), idx / 3);
      pair = {ctx.add(alpha, ctx.one()), ctx.one()};
      break;
    }
    case WitnessRule::CubicX3X2plus1: {
      EElem alpha = f8_root_of(ctx, true);
      pair = {alpha, ctx.one()};
      break;
    }
    case WitnessRule::SubgroupAlpha: {
      if (!k) fail(Errc::MissingParams, "T11 witness needs k");
      uint64_t c = gcd_int<uint64_t>((uint64_t(1) << *k) + 1, ctx.base().q() - 1);
      if (c == 1) fail(Errc::ConstructionFailed, "gcd(2^k+1, q-1) = 1; no subgroup witness");
      EElem alpha = ctx.pow(ctx.primitive_element(), (ctx.order() - 1) / c);
      pair = {alpha, ctx.one()};
      break;
    }
    case WitnessRule::Fallback: {
      auto res = is_permutation(f, nthreads);
      if (res.is_perm) fail(Errc::ConstructionFailed, entry.id + " permutes; no collision exists");
      pair = *res.witness;
      break;
    }
  }
  if (pair.first == pair.second || eval_penta(f, pair.first) != eval_penta(f, pair.second))
    fail(Errc::ConstructionFailed, entry.id + ": constructed pair does not collide");
  return pair;
}

// ---------------------------------------------------------------------------
// Conjecture scans
// ---------------------------------------------------------------------------

struct ConjectureRow {
  std::string family;
  int m = 0, k = 0;
  uint64_t gcd_val = 0;
  bool predicted = false, actual = false, agree = false;
  std::optional<std::string> witness_x1, witness_x2;
  double elapsed_ms = 0.0;
};

inline std::vector<ConjectureRow> scan_conjecture(const std::vector<int>& ms,
                                                  const std::vector<int>& ks, TowerCache& towers,
                                                  int nthreads = 0) {
  std::vector<ConjectureRow> rows;
  for (const char* fam : {"C1", "C2"}) {
    const auto& entry = family_by_id(fam);
    for (int m : ms) {
      const ExtCtx& ctx = towers.get(m);
      for (int k : ks) {
        auto f = instantiate_family(entry, ctx, k);
        auto res = is_permutation(f, nthreads);
        ConjectureRow row;
        row.family = fam;
        row.m = m;
        row.k = k;
        row.gcd_val = gcd_int<uint64_t>((uint64_t(1) << k) + 1, ctx.base().q() - 1);
        row.predicted = (row.gcd_val == 1);
        row.actual = res.is_perm;
        row.agree = (row.predicted == row.actual);
        row.elapsed_ms = res.elapsed_ms;
        if (res.witness) {
          row.witness_x1 = ctx.hex(res.witness->first);
          row.witness_x2 = ctx.hex(res.witness->second);
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

// Digit-grid search x^{d0} + L(x^{e_s}) + L(x^{e_t}),
// L(x) = x + x^q, digits in [-bound, bound]: exhaustive permutation scan at a
// single small m, emitting only the hits.
struct GridHit {
  int d0 = 0;
  std::array<int, 3> s{}, t{};
  std::vector<uint64_t> exponents;
};

inline std::vector<GridHit> scan_grid(const ExtCtx& ctx, const std::vector<int>& d0s, int bound,
                                      int nthreads = 0) {
  if (ctx.order() > (u128(1) << 18)) fail(Errc::FieldTooLarge, "grid scan capped at q^3 <= 2^18");
  i128 q = static_cast<i128>(ctx.base().order());
  i128 N = static_cast<i128>(ctx.order()) - 1;
  int span = 2 * bound + 1;
  auto digits_at = [&](int idx) {
    std::array<int, 3> s{};
    for (int j = 0; j < 3; ++j) {
      s[static_cast<size_t>(j)] = idx % span - bound;
      idx /= span;
    }
    return s;
  };
  int total = span * span * span;
  auto exp_of = [&](const std::array<int, 3>& s) -> i128 {
    return s[0] + s[1] * q + s[2] * q * q;
  };
  std::vector<GridHit> hits;
  for (int d0 : d0s) {
    for (int si = 0; si < total; ++si) {
      auto s = digits_at(si);
      i128 es = exp_of(s);
      if (es < 1) continue;
      for (int ti = si; ti < total; ++ti) {
        auto t = digits_at(ti);
        i128 et = exp_of(t);
        if (et < 1) continue;
        std::vector<i128> exps = {d0, es, es * q, et, et * q};
        std::vector<u128> canon;
        for (i128 e : exps) {
          i128 r = e % N;
          if (r == 0) r = N;
          canon.push_back(static_cast<u128>(r));
        }
        std::sort(canon.begin(), canon.end());
        if (std::adjacent_find(canon.begin(), canon.end()) != canon.end()) continue;
        Pentanomial f;
        f.ctx = &ctx;
        f.family = "grid";
        f.m = ctx.base().m();
        for (u128 e : canon) {
          PentaTerm term;
          term.coeff = ctx.one();
          term.e = e;
          uint64_t qq = ctx.base().q();
          u128 ee = e;
          bool small = true;
          for (int dgt = 0; dgt < 3; ++dgt) {
            term.qdig[static_cast<size_t>(dgt)] = static_cast<uint32_t>(ee % qq);
            if (term.qdig[static_cast<size_t>(dgt)] > 15) small = false;
            ee /= qq;
          }
          term.small_digits = small;
          f.terms.push_back(term);
        }
        if (is_permutation(f, nthreads).is_perm) {
          GridHit hit;
          hit.d0 = d0;
          hit.s = s;
          hit.t = t;
          for (u128 e : canon) hit.exponents.push_back(static_cast<uint64_t>(e));
          hits.push_back(std::move(hit));
        }
      }
    }
  }
  return hits;
}

}  // namespace pentaperm
