#include <catch2/catch_amalgamated.hpp>

#include "pentaperm/binary_field.hpp"
#include "pentaperm/ext_field.hpp"
#include "pentaperm/polyring.hpp"
#include "pentaperm/rng.hpp"

using namespace pentaperm;

namespace {

Poly<FieldCtx> mk(const FieldCtx& F, std::initializer_list<uint64_t> coeffs) {
  std::vector<FElem> c;
  for (uint64_t v : coeffs) c.push_back(F.from_bits(v));
  return poly_from(F, std::move(c));
}

Poly<FieldCtx> random_poly(const FieldCtx& F, Rng& rng, int deg) {
  std::vector<FElem> c(static_cast<size_t>(deg + 1));
  for (auto& x : c) x = F.from_bits(rng.bits(F.m()));
  c.back() = F.from_bits(rng.below(F.q() - 1) + 1);
  Poly<FieldCtx> f{std::move(c)};
  return f;
}

}  // namespace

TEST_CASE("poly_gcd basics") {
  FieldCtx f2(1);
  auto xp1 = mk(f2, {1, 1});
  REQUIRE(poly_gcd(f2, xp1, xp1).c == xp1.c);
  auto x2px = mk(f2, {0, 1, 1});
  auto x = mk(f2, {0, 1});
  REQUIRE(poly_gcd(f2, x2px, x).c == x.c);
  // f = x^3 + x + 1, f' = x^2 + 1: Euclid by hand gives gcd 1
  auto f = mk(f2, {1, 1, 0, 1});
  auto fp = poly_derivative(f2, f);
  REQUIRE(fp.c == mk(f2, {1, 0, 1}).c);
  auto g = poly_gcd(f2, f, fp);
  REQUIRE(g.degree() == 0);
  REQUIRE_THROWS_AS(poly_gcd(f2, Poly<FieldCtx>{}, Poly<FieldCtx>{}), Error);
}

TEST_CASE("divmod invariant") {
  FieldCtx F(4);
  Rng rng(derive_seed(21, "divmod", 4));
  for (int t = 0; t < 200; ++t) {
    auto f = random_poly(F, rng, 1 + static_cast<int>(rng.below(6)));
    auto g = random_poly(F, rng, 1 + static_cast<int>(rng.below(4)));
    auto [q, r] = poly_divmod(F, f, g);
    REQUIRE((r.is_zero() || r.degree() < g.degree()));
    auto back = poly_add(F, poly_mul(F, q, g), r);
    REQUIRE(back.c == f.c);
  }
}

TEST_CASE("resultant: stated examples") {
  FieldCtx f2(1);
  auto xp1 = mk(f2, {1, 1});
  REQUIRE(resultant(f2, xp1, xp1) == f2.zero());
  auto x2 = mk(f2, {0, 0, 1});
  REQUIRE(resultant(f2, x2, xp1) == f2.one());  // product formula: g(0)^2 = 1
  REQUIRE_THROWS_AS(resultant(f2, mk(f2, {1}), xp1), Error);
}

TEST_CASE("resultant: Sylvester vs Euclidean remainder sequence") {
  FieldCtx F(8);
  Rng rng(derive_seed(22, "prs", 8));
  for (int t = 0; t < 100; ++t) {
    auto f = random_poly(F, rng, 1 + static_cast<int>(rng.below(6)));
    auto g = random_poly(F, rng, 1 + static_cast<int>(rng.below(6)));
    REQUIRE(resultant(F, f, g) == resultant_prs(F, f, g));
    // characteristic 2: the swap sign rule collapses
    REQUIRE(resultant(F, f, g) == resultant(F, g, f));
  }
}

TEST_CASE("resultant vanishes exactly on common factors (exhaustive F_2)") {
  FieldCtx f2(1);
  std::vector<Poly<FieldCtx>> polys;
  for (int deg = 1; deg <= 3; ++deg)
    for (uint64_t bits = uint64_t(1) << deg; bits < (uint64_t(1) << (deg + 1)); ++bits) {
      std::vector<FElem> c;
      for (int j = 0; j <= deg; ++j) c.push_back(FElem{(bits >> j) & 1});
      polys.push_back(poly_from(f2, std::move(c)));
    }
  for (const auto& f : polys)
    for (const auto& g : polys) {
      bool res_zero = resultant(f2, f, g) == f2.zero();
      bool gcd_nonconst = poly_gcd(f2, f, g).degree() >= 1;
      REQUIRE(res_zero == gcd_nonconst);
      REQUIRE(resultant(f2, f, g) == resultant(f2, g, f));  // characteristic 2
    }
}

TEST_CASE("product formula over split polynomials") {
  FieldCtx F(5);
  Rng rng(derive_seed(23, "prod", 5));
  for (int t = 0; t < 100; ++t) {
    // f = (x - r1)(x - r2)(x - r3) with chosen roots
    std::vector<FElem> roots;
    for (int j = 0; j < 3; ++j) roots.push_back(F.from_bits(rng.bits(5)));
    Poly<FieldCtx> f = poly_from(F, {F.one()});
    for (auto r : roots) f = poly_mul(F, f, poly_from(F, {r, F.one()}));
    auto g = random_poly(F, rng, 1 + static_cast<int>(rng.below(4)));
    FElem expect = F.one();
    for (auto r : roots) expect = F.mul(expect, poly_eval(F, g, r));
    REQUIRE(resultant(F, f, g) == expect);
  }
}

TEST_CASE("roots_in_field") {
  FieldCtx f2(1);
  auto r1 = roots_in_field(f2, mk(f2, {0, 1, 1}));  // x^2 + x
  REQUIRE(r1.size() == 2);
  REQUIRE(roots_in_field(f2, mk(f2, {1, 1, 1})).empty());  // x^2 + x + 1
  FieldCtx f8(3);
  auto r2 = roots_in_field(f8, mk(f8, {1, 1, 0, 1}));  // x^3 + x + 1 splits in F_8
  REQUIRE(r2.size() == 3);
  FElem g{2};
  REQUIRE(r2[0] == g);
  REQUIRE(r2[1] == f8.sqr(g));
  REQUIRE(r2[2] == f8.sqr(f8.sqr(g)));
  FieldCtx huge(32);
  REQUIRE_THROWS_AS(roots_in_field(huge, mk(huge, {1, 1})), Error);
}

TEST_CASE("polyring is generic over extension contexts") {
  FieldCtx f4(2);
  ExtCtx E(f4, 3);
  Rng rng(derive_seed(24, "ext-poly", 2));
  for (int t = 0; t < 50; ++t) {
    Poly<ExtCtx> f, g;
    for (int j = 0; j <= 3; ++j) f.c.push_back(E.unpack128(rng.bits(6)));
    for (int j = 0; j <= 2; ++j) g.c.push_back(E.unpack128(rng.bits(6)));
    f = poly_trim(E, std::move(f));
    g = poly_trim(E, std::move(g));
    if (f.degree() < 1 || g.degree() < 1) continue;
    REQUIRE(resultant(E, f, g) == resultant_prs(E, f, g));
    bool rz = resultant(E, f, g) == E.zero();
    REQUIRE(rz == (poly_gcd(E, f, g).degree() >= 1));
  }
}
