#include <catch2/catch_amalgamated.hpp>

#include "pentaperm/factor_class.hpp"
#include "pentaperm/rng.hpp"

using namespace pentaperm;

TEST_CASE("cubic classification: stated examples") {
  FactorClassifier c2{FieldCtx(1)};
  REQUIRE(std::get<CubicPattern>(c2.classify_cubic(FElem{1}, FElem{1}).pattern) ==
          CubicPattern::P3);  // x^3 + x + 1
  auto rep = c2.classify_cubic(FElem{0}, FElem{1});  // x^3 + 1
  REQUIRE(std::get<CubicPattern>(rep.pattern) == CubicPattern::P12);
  REQUIRE(rep.trace_test == 0);
  REQUIRE(rep.trace_one == 1);

  FactorClassifier c8{FieldCtx(3)};
  auto rep8 = c8.classify_cubic(FElem{1}, FElem{1});
  REQUIRE(std::get<CubicPattern>(rep8.pattern) == CubicPattern::P111);
  // brute root count over F_8 confirms three roots
  const auto& F = c8.fq();
  int roots = 0;
  for (uint64_t v = 0; v < 8; ++v) {
    FElem x{v};
    if (F.add(F.add(F.mul(F.sqr(x), x), x), F.one()) == F.zero()) ++roots;
  }
  REQUIRE(roots == 3);

  REQUIRE_THROWS_AS(c8.classify_cubic(FElem{1}, FElem{0}), Error);
}

TEST_CASE("quartic classification: stated examples") {
  FactorClassifier c2{FieldCtx(1)};
  // x^4 + x + 1: resolvent y^3 + 1 = (1,2), r1 = 1, w1 = 1, Tr(1) = 1 -> (4)
  auto rep = c2.classify_quartic(FElem{0}, FElem{1}, FElem{1});
  REQUIRE(std::get<QuarticPattern>(rep.pattern) == QuarticPattern::P4);
  REQUIRE(rep.resolvent_roots.size() == 1);
  REQUIRE(rep.resolvent_roots[0] == FElem{1});
  REQUIRE(rep.w_traces == std::vector<int>{1});
  // x^4 + x = x (x^3 + 1): factor out the root 0
  auto rep2 = c2.classify_quartic(FElem{0}, FElem{1}, FElem{0});
  REQUIRE(std::get<QuarticPattern>(rep2.pattern) == QuarticPattern::P112);
  REQUIRE_THROWS_AS(c2.classify_quartic(FElem{0}, FElem{0}, FElem{1}), Error);
  try {
    c2.classify_quartic(FElem{0}, FElem{0}, FElem{1});
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::DegenerateLinearTerm);
  }
}

TEST_CASE("oracle basics and squarefree rejection") {
  FactorClassifier c2{FieldCtx(1)};
  auto p = c2.pattern_oracle({FElem{1}, FElem{1}, FElem{0}, FElem{1}});  // x^3+x+1
  REQUIRE(std::get<CubicPattern>(p) == CubicPattern::P3);
  // x^3 + x = x (x+1)^2: not squarefree
  REQUIRE_THROWS_AS(c2.pattern_oracle({FElem{0}, FElem{1}, FElem{0}, FElem{1}}), Error);
  try {
    c2.pattern_oracle({FElem{0}, FElem{1}, FElem{0}, FElem{1}});
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::NotSquarefree);
  }
}

TEST_CASE("constructed (2,2) example over F_4") {
  FieldCtx f4(2);
  FactorClassifier cls{f4};
  // scan for two distinct irreducible quadratics with the same linear
  // coefficient; their product is a depressed quartic of type (2,2)
  bool found = false;
  for (uint64_t a = 0; a < 4 && !found; ++a)
    for (uint64_t b = 0; b < 4 && !found; ++b)
      for (uint64_t d = b + 1; d < 4 && !found; ++d) {
        FElem fa{a}, fb{b}, fd{d};
        auto irred = [&](FElem lin, FElem con) {
          for (uint64_t x = 0; x < 4; ++x)
            if (f4.add(f4.add(f4.sqr(FElem{x}), f4.mul(lin, FElem{x})), con) == f4.zero())
              return false;
          return true;
        };
        if (!irred(fa, fb) || !irred(fa, fd)) continue;
        // (x^2+ax+b)(x^2+ax+d) = x^4 + (a^2+b+d) x^2 + a(b+d) x + bd
        FElem a2 = f4.add(f4.sqr(fa), f4.add(fb, fd));
        FElem a1 = f4.mul(fa, f4.add(fb, fd));
        FElem a0 = f4.mul(fb, fd);
        if (a1 == f4.zero()) continue;
        found = true;
        auto got = cls.pattern_oracle({a0, a1, a2, f4.zero(), f4.one()});
        REQUIRE(std::get<QuarticPattern>(got) == QuarticPattern::P22);
        REQUIRE(std::get<QuarticPattern>(cls.classify_quartic(a2, a1, a0).pattern) ==
                QuarticPattern::P22);
      }
  REQUIRE(found);
}

TEST_CASE("cubic concordance, exhaustive small m") {
  for (int m = 1; m <= 4; ++m) {
    FactorClassifier cls{FieldCtx(m)};
    const auto& F = cls.fq();
    size_t n111 = 0, n12 = 0, n3 = 0, total = 0;
    for (uint64_t av = 0; av < F.q(); ++av)
      for (uint64_t bv = 1; bv < F.q(); ++bv) {
        FElem a{av}, b{bv};
        auto got = std::get<CubicPattern>(cls.classify_cubic(a, b).pattern);
        auto want = std::get<CubicPattern>(
            cls.pattern_oracle({b, a, F.zero(), F.one()}));
        REQUIRE(got == want);
        ++total;
        if (got == CubicPattern::P111) ++n111;
        if (got == CubicPattern::P12) ++n12;
        if (got == CubicPattern::P3) ++n3;
      }
    REQUIRE(n111 + n12 + n3 == total);
  }
}

TEST_CASE("quartic concordance, exhaustive small m") {
  for (int m = 1; m <= 3; ++m) {
    FactorClassifier cls{FieldCtx(m)};
    const auto& F = cls.fq();
    for (uint64_t a2 = 0; a2 < F.q(); ++a2)
      for (uint64_t a1 = 1; a1 < F.q(); ++a1)
        for (uint64_t a0 = 0; a0 < F.q(); ++a0) {
          auto got = std::get<QuarticPattern>(cls.classify_quartic(FElem{a2}, FElem{a1}, FElem{a0}).pattern);
          auto want = std::get<QuarticPattern>(
              cls.pattern_oracle({FElem{a0}, FElem{a1}, FElem{a2}, F.zero(), F.one()}));
          REQUIRE(got == want);
        }
  }
}

TEST_CASE("linearized F_{q^2} root count agrees with the scan") {
  for (int m : {1, 2, 3}) {
    FactorClassifier cls{FieldCtx(m)};
    const auto& F = cls.fq();
    const auto& E = cls.fq2();
    for (uint64_t a2 = 0; a2 < F.q(); ++a2)
      for (uint64_t a1 = 0; a1 < F.q(); ++a1)
        for (uint64_t a0 = 0; a0 < F.q(); ++a0) {
          Poly<ExtCtx> fe;
          fe.c = {E.embed(FElem{a0}), E.embed(FElem{a1}), E.embed(FElem{a2}), E.zero(), E.one()};
          auto lin = FactorClassifier::linearized_root_count(E, fe);
          REQUIRE(lin.has_value());
          REQUIRE(*lin == roots_in_field(E, fe).size());
        }
    // a cubic term breaks the linearized shape
    Poly<ExtCtx> bad;
    bad.c = {E.one(), E.zero(), E.zero(), E.one(), E.one()};
    REQUIRE(!FactorClassifier::linearized_root_count(E, bad).has_value());
  }
}

TEST_CASE("Vieta witnesses in (1,1,1) reports") {
  for (int m : {2, 3, 4, 5}) {
    FactorClassifier cls{FieldCtx(m)};
    const auto& F = cls.fq();
    const auto& E = cls.fq2();
    for (uint64_t av = 0; av < F.q(); ++av)
      for (uint64_t bv = 1; bv < F.q(); ++bv) {
        auto rep = cls.classify_cubic(FElem{av}, FElem{bv});
        FElem a3 = F.pow(FElem{av}, 3);
        if (rep.y_pair_base) {
          auto [y1, y2] = *rep.y_pair_base;
          REQUIRE(F.mul(y1, y2) == a3);
          REQUIRE(F.add(y1, y2) == FElem{bv});
        }
        if (rep.y_pair_ext) {
          auto [y1, y2] = *rep.y_pair_ext;
          REQUIRE(E.mul(y1, y2) == E.embed(a3));
          REQUIRE(E.add(y1, y2) == E.embed(FElem{bv}));
        }
      }
  }
}
