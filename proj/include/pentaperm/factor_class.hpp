#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pentaperm/binary_field.hpp"
#include "pentaperm/ext_field.hpp"
#include "pentaperm/polyring.hpp"

namespace pentaperm {

// Splitting types over F_q. Root counts in F_q: (1,1,1) <-> 3, (1,2) <-> 1,
// (3) <-> 0; quartics: 4, 0, 1, 2, 0, with (2,2) vs (4) separated by the
// root count in F_{q^2} (4 vs 0).
enum class CubicPattern { P111, P12, P3 };
enum class QuarticPattern { P1111, P22, P13, P112, P4 };

inline const char* pattern_name(CubicPattern p) {
  switch (p) {
    case CubicPattern::P111: return "(1,1,1)";
    case CubicPattern::P12: return "(1,2)";
    case CubicPattern::P3: return "(3)";
  }
  return "?";
}

inline const char* pattern_name(QuarticPattern p) {
  switch (p) {
    case QuarticPattern::P1111: return "(1,1,1,1)";
    case QuarticPattern::P22: return "(2,2)";
    case QuarticPattern::P13: return "(1,3)";
    case QuarticPattern::P112: return "(1,1,2)";
    case QuarticPattern::P4: return "(4)";
  }
  return "?";
}

struct ClassifyReport {
  std::variant<CubicPattern, QuarticPattern> pattern;
  // cubic: Tr(a^3/b^2) vs Tr(1); quartic: Tr(w_i) values in resolvent-root order
  int trace_test = -1;
  int trace_one = -1;
  std::vector<int> w_traces;
  std::vector<FElem> resolvent_roots;
  // y1, y2 solve x^2 + bx + a^3; they live in F_q for even m, F_{q^2} for odd m
  std::optional<std::pair<FElem, FElem>> y_pair_base;
  std::optional<std::pair<EElem, EElem>> y_pair_ext;
  std::optional<std::pair<bool, bool>> y_cubes;
};

/**
 * Analytic classification of cubics x^3+ax+b and quartics x^4+a2x^2+a1x+a0,
 * next to an independent exhaustive-scan oracle over the same contexts.
 * The quadratic extension is built once over the given base so the y_i of
 * odd-m cubic tests land in a compatible F_{q^2}.
 */
class FactorClassifier {
 public:
  explicit FactorClassifier(const FieldCtx& fq) : fq_(fq), fq2_(fq, 2) {}

  const FieldCtx& fq() const { return fq_; }
  const ExtCtx& fq2() const { return fq2_; }

  // Trace-criterion pattern of x^3 + a x + b, b != 0.
  ClassifyReport classify_cubic(FElem a, FElem b) const {
    if (b == fq_.zero()) fail(Errc::ZeroConstant, "cubic classification requires b != 0");
    ClassifyReport rep;
    FElem lhs = fq_.mul(fq_.pow(a, 3), fq_.inv(fq_.sqr(b)));
    rep.trace_test = fq_.trace(lhs);
    rep.trace_one = fq_.m() & 1;
    if (rep.trace_test != rep.trace_one) {
      rep.pattern = CubicPattern::P12;
      return rep;
    }
    bool cubes;
    if (fq_.m() % 2 == 0) {
      auto ys = fq_.solve_quadratic(b, fq_.pow(a, 3));
      rep.y_pair_base = {ys[0], ys[1]};
      cubes = cube_or_zero(fq_, ys[0]) && cube_or_zero(fq_, ys[1]);
      rep.y_cubes = {cube_or_zero(fq_, ys[0]), cube_or_zero(fq_, ys[1])};
    } else {
      auto ys = fq2_.solve_quadratic(fq2_.embed(b), fq2_.embed(fq_.pow(a, 3)));
      rep.y_pair_ext = {ys[0], ys[1]};
      cubes = cube_or_zero(fq2_, ys[0]) && cube_or_zero(fq2_, ys[1]);
      rep.y_cubes = {cube_or_zero(fq2_, ys[0]), cube_or_zero(fq2_, ys[1])};
    }
    rep.pattern = cubes ? CubicPattern::P111 : CubicPattern::P3;
    return rep;
  }

  // Resolvent-based pattern of x^4 + a2 x^2 + a1 x + a0, a1 != 0 (so the input is
  // automatically squarefree: gcd(f, f') = gcd(f, a1) = 1).
  ClassifyReport classify_quartic(FElem a2, FElem a1, FElem a0) const {
    if (a1 == fq_.zero())
      fail(Errc::DegenerateLinearTerm, "w_i = a0 r_i^2 / a1^2 is undefined for a1 = 0");
    if (a0 == fq_.zero()) {
      // factor out the root x = 0 and classify the cubic cofactor
      auto sub = classify_cubic(a2, a1);
      ClassifyReport rep = sub;
      switch (std::get<CubicPattern>(sub.pattern)) {
        case CubicPattern::P111: rep.pattern = QuarticPattern::P1111; break;
        case CubicPattern::P12: rep.pattern = QuarticPattern::P112; break;
        case CubicPattern::P3: rep.pattern = QuarticPattern::P13; break;
      }
      return rep;
    }
    ClassifyReport rep;
    auto g = classify_cubic(a2, a1);  // resolvent y^3 + a2 y + a1
    auto gpat = std::get<CubicPattern>(g.pattern);
    if (gpat == CubicPattern::P3) {
      rep.pattern = QuarticPattern::P13;
      return rep;
    }
    Poly<FieldCtx> res;
    res.c = {a1, a2, fq_.zero(), fq_.one()};
    rep.resolvent_roots = roots_in_field(fq_, res);
    FElem scale = fq_.inv(fq_.sqr(a1));
    for (FElem r : rep.resolvent_roots) {
      FElem w = fq_.mul(a0, fq_.mul(fq_.sqr(r), scale));
      rep.w_traces.push_back(fq_.trace(w));
    }
    if (gpat == CubicPattern::P111) {
      int ones = 0;
      for (int t : rep.w_traces) ones += t;
      // parity of the trace multiset is even, so only {0,0,0} and {0,1,1} occur
      rep.pattern = (ones == 0) ? QuarticPattern::P1111 : QuarticPattern::P22;
    } else {
      rep.pattern = (rep.w_traces[0] == 0) ? QuarticPattern::P112 : QuarticPattern::P4;
    }
    return rep;
  }

  // Independent verifier: root counting by exhaustive scan only. Rejects
  // non-squarefree inputs via gcd(f, f').
  std::variant<CubicPattern, QuarticPattern> pattern_oracle(const std::vector<FElem>& coeffs_low_first) const {
    if (fq_.order() > (u128(1) << 16)) fail(Errc::FieldTooLarge, "oracle scan capped at q <= 2^16");
    Poly<FieldCtx> f = poly_from(fq_, coeffs_low_first);
    int deg = f.degree();
    if (deg != 3 && deg != 4) fail(Errc::UnsupportedDegree, "oracle handles degree 3 or 4 only");
    auto fp = poly_derivative(fq_, f);
    if (fp.is_zero() || poly_gcd(fq_, f, fp).degree() >= 1)
      fail(Errc::NotSquarefree, "oracle is restricted to squarefree inputs");
    size_t nroots = roots_in_field(fq_, f).size();
    if (deg == 3) {
      switch (nroots) {
        case 3: return CubicPattern::P111;
        case 1: return CubicPattern::P12;
        case 0: return CubicPattern::P3;
      }
      fail(Errc::NotSquarefree, "impossible root count for a squarefree cubic");
    }
    switch (nroots) {
      case 4: return QuarticPattern::P1111;
      case 2: return QuarticPattern::P112;
      case 1: return QuarticPattern::P13;
      case 0: break;
      default: fail(Errc::NotSquarefree, "impossible root count for a squarefree quartic");
    }
    // 0 roots in F_q: split (2,2) from (4) by the root count in F_{q^2}
    Poly<ExtCtx> fe;
    for (auto c : f.c) fe.c.push_back(fq2_.embed(c));
    size_t next;
    if (auto lin = linearized_root_count(fq2_, fe)) next = *lin;
    else next = roots_in_field(fq2_, fe).size();
    if (next == 4) return QuarticPattern::P22;
    if (next == 0) return QuarticPattern::P4;
    fail(Errc::NotSquarefree, "impossible F_{q^2} root count");
  }

  // Exact root count of f over E when f - f(0) has only 2-power exponents
  // (the depressed quartic x^4 + a2 x^2 + a1 x + a0 qualifies): x -> f(x)
  // - f(0) is F_2-linear, so the count is 0 or 2^nullity by linear algebra.
  // Returns nullopt when the shape does not apply.
  static std::optional<size_t> linearized_root_count(const ExtCtx& E, const Poly<ExtCtx>& f) {
    for (size_t j = 1; j < f.c.size(); ++j)
      if (!(f.c[j] == E.zero()) && (j & (j - 1)) != 0) return std::nullopt;
    int n = E.dim_f2();
    F2Solver solver(n + 1);
    for (int i = 0; i < n; ++i) {
      EElem e = E.unpack128(u128(1) << i);
      EElem img = E.zero();
      for (size_t j = 1; j < f.c.size(); ++j) {
        if (f.c[j] == E.zero()) continue;
        EElem p = e;
        for (size_t s = 1; s < j; s <<= 1) p = E.sqr(p);
        img = E.add(img, E.mul(f.c[j], p));
      }
      solver.add_generator(E.pack128(img), u128(1) << i);
    }
    EElem c0 = f.c.empty() ? E.zero() : f.c[0];
    if (!solver.solve(E.pack128(c0))) return size_t(0);
    return size_t(1) << (n - solver.rank());
  }

 private:
  // In the degenerate a = 0 case the y_i are {0, b}; 0 counts as a cube.
  template <class Ctx>
  static bool cube_or_zero(const Ctx& ctx, typename Ctx::Elem u) {
    if (u == ctx.zero()) return true;
    return is_cube(ctx, u);
  }

  FieldCtx fq_;
  ExtCtx fq2_;
};

}  // namespace pentaperm
