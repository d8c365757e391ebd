#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pentaperm/ext_field.hpp"
#include "pentaperm/polyring.hpp"
#include "pentaperm/rng.hpp"

namespace pentaperm {

// Numeric verification of the proof-internal polynomial identities at random
// conjugate triples (a, a^q, a^{q^2}), Schwartz-Zippel style. The identities
// are data: expression trees written out term by term, never re-derived in
// code, so each member stays auditable independently of the arithmetic it
// exercises.
//
// Confidence bound: each member's lhs - rhs is a polynomial of total degree
// at most ~40 in the conjugate coordinates (the largest right sides, I8 and
// I10, stay below that by inspection), evaluated over F_{2^{3m}}. A nonzero
// difference polynomial vanishes on at most a 40 / 2^{3m} fraction of
// points, so at m >= 5 a single uniformly sampled point already exposes a
// bad transcription with probability > 1 - 2^{-9}, and 200 admissible
// passing points leave a residual chance below 2^{-1800}. This is a
// recorded justification, not an asserted property.

enum class Sym { a, b, c, A, x, u };

struct ExNode;
using ExPtr = std::shared_ptr<const ExNode>;

struct ExNode {
  enum class Op { Symbol, One, Zero, Add, Mul, Pow, Inv, Frob, AbsTrace } op;
  Sym sym = Sym::a;
  int arg = 0;
  std::vector<ExPtr> kids;
};

class Ex {
 public:
  Ex() = default;
  explicit Ex(ExPtr p) : p_(std::move(p)) {}

  static Ex sym(Sym s) {
    auto n = std::make_shared<ExNode>();
    n->op = ExNode::Op::Symbol;
    n->sym = s;
    return Ex(n);
  }
  static Ex one() {
    auto n = std::make_shared<ExNode>();
    n->op = ExNode::Op::One;
    return Ex(n);
  }
  static Ex zero() {
    auto n = std::make_shared<ExNode>();
    n->op = ExNode::Op::Zero;
    return Ex(n);
  }

  const ExPtr& node() const { return p_; }

  friend Ex operator+(const Ex& l, const Ex& r) { return Ex::binary(ExNode::Op::Add, l, r); }
  friend Ex operator*(const Ex& l, const Ex& r) { return Ex::binary(ExNode::Op::Mul, l, r); }

 private:
  static Ex binary(ExNode::Op op, const Ex& l, const Ex& r) {
    auto n = std::make_shared<ExNode>();
    n->op = op;
    n->kids = {l.p_, r.p_};
    return Ex(n);
  }
  ExPtr p_;
};

inline Ex pw(const Ex& e, int k) {
  auto n = std::make_shared<ExNode>();
  n->op = ExNode::Op::Pow;
  n->arg = k;
  n->kids = {e.node()};
  return Ex(n);
}

inline Ex inv(const Ex& e) {
  auto n = std::make_shared<ExNode>();
  n->op = ExNode::Op::Inv;
  n->kids = {e.node()};
  return Ex(n);
}

inline Ex frob(const Ex& e, int j) {
  auto n = std::make_shared<ExNode>();
  n->op = ExNode::Op::Frob;
  n->arg = j;
  n->kids = {e.node()};
  return Ex(n);
}

inline Ex abs_trace(const Ex& e) {
  auto n = std::make_shared<ExNode>();
  n->op = ExNode::Op::AbsTrace;
  n->kids = {e.node()};
  return Ex(n);
}

struct IdentityEnv {
  const ExtCtx* E = nullptr;
  EElem a, b, c, A, x, u;
};

inline EElem eval_expr(const ExPtr& n, const IdentityEnv& env) {
  const ExtCtx& E = *env.E;
  switch (n->op) {
    case ExNode::Op::Symbol:
      switch (n->sym) {
        case Sym::a: return env.a;
        case Sym::b: return env.b;
        case Sym::c: return env.c;
        case Sym::A: return env.A;
        case Sym::x: return env.x;
        case Sym::u: return env.u;
      }
      return E.zero();
    case ExNode::Op::One: return E.one();
    case ExNode::Op::Zero: return E.zero();
    case ExNode::Op::Add: return E.add(eval_expr(n->kids[0], env), eval_expr(n->kids[1], env));
    case ExNode::Op::Mul: return E.mul(eval_expr(n->kids[0], env), eval_expr(n->kids[1], env));
    case ExNode::Op::Pow: return E.pow(eval_expr(n->kids[0], env), static_cast<u128>(n->arg));
    case ExNode::Op::Inv: return E.inv(eval_expr(n->kids[0], env));
    case ExNode::Op::Frob: return E.frobenius(eval_expr(n->kids[0], env), n->arg);
    case ExNode::Op::AbsTrace:
      return E.abs_trace(eval_expr(n->kids[0], env)) ? E.one() : E.zero();
  }
  return E.zero();
}

struct Equation {
  Ex lhs, rhs;
};

// Resultant member: Res_y(f1, f2) at a numeric x must match rhs. The
// coefficient lists are in y, lowest degree first; full_degree_guards hold
// the leading coefficients that must stay nonzero for the comparison.
struct ResultantCheck {
  std::vector<Ex> f1, f2;
  Ex rhs;
  std::vector<Ex> full_degree_guards;
};

struct IdentityDef {
  std::string name;
  bool odd_only = false;
  bool uses_x = false;
  std::vector<Equation> eqs;
  std::vector<Ex> guards;  // sub-expressions required nonzero; samples are redrawn
  std::optional<ResultantCheck> res;
};

struct IdentityResult {
  std::string identity;
  int m = 0;
  int trials = 0;
  bool passed = false;
  std::string skipped_reason;  // nonempty means neither passed nor failed
  std::optional<std::string> counterexample_a;
  std::optional<std::string> counterexample_x;
};

// ---------------------------------------------------------------------------
// Builtin suite: the proof-internal identities behind the family theorems.
// ---------------------------------------------------------------------------

inline const std::vector<IdentityDef>& builtin_identity_suite() {
  static const std::vector<IdentityDef> suite = [] {
    std::vector<IdentityDef> out;
    Ex a = Ex::sym(Sym::a), b = Ex::sym(Sym::b), c = Ex::sym(Sym::c);
    Ex A = Ex::sym(Sym::A), x = Ex::sym(Sym::x), u = Ex::sym(Sym::u);
    Ex one = Ex::one();

    // Resultant coefficients of the cubic system (deg-1 lead family):
    // R(f1,f2,y) = R x^3 + S x^2 + T x + U over (a, b, A).
    Ex R = pw(a, 2) + a * b + a * A + pw(b, 2) + b * A + pw(A, 2);
    Ex S = pw(a, 2) * A + a * b * A + a * pw(A, 2) + pw(b, 2) * A + b * pw(A, 4) + b * pw(A, 2) +
           b + pw(A, 5) + pw(A, 3) + A;
    Ex T = pw(a, 2) + a * b + a * A + pw(b, 2) * pw(A, 2) + b * A + pw(A, 8) + pw(A, 4) + one;
    Ex U = pw(a, 3) + pw(a, 2) * b + pw(a, 2) * A + a * pw(b, 2) + a * b * A + a * pw(A, 6) +
           a * pw(A, 4) + a + pw(b, 3) + pw(b, 2) * pw(A, 3) + b * pw(A, 6) + pw(A, 9);
    Ex h1 = pw(a, 6) + pw(a, 4) * pw(b, 2) + pw(a, 4) * pw(c, 2) + pw(a, 4) +
            pw(a, 2) * pw(b, 4) + pw(a, 2) * pw(c, 4) + a * b + a * c + pw(b, 6) +
            pw(b, 4) * pw(c, 2) + pw(b, 4) + pw(b, 2) * pw(c, 4) + b * c + pw(c, 6) + pw(c, 4) +
            one;
    Ex h2 = pw(a, 7) + pw(a, 6) * c + pw(a, 5) * pw(b, 2) + pw(a, 5) * pw(c, 2) + pw(a, 5) +
            pw(a, 4) * pw(b, 2) * c + pw(a, 4) * pw(c, 3) + pw(a, 4) * c + pw(a, 3) * pw(b, 4) +
            pw(a, 3) * pw(c, 4) + pw(a, 2) * pw(b, 4) * c + pw(a, 2) * b + pw(a, 2) * pw(c, 5) +
            pw(a, 2) * c + a * pw(b, 6) + a * pw(b, 4) * pw(c, 2) + a * pw(b, 4) +
            a * pw(b, 2) * pw(c, 4) + a * pw(c, 6) + a * pw(c, 4) + a * pw(c, 2) + a +
            pw(b, 6) * c + pw(b, 4) * pw(c, 3) + pw(b, 4) * c + pw(b, 3) + pw(b, 2) * pw(c, 5) +
            pw(b, 2) * c + pw(c, 7) + pw(c, 5) + pw(c, 3) + c;

    {
      IdentityDef d;
      d.name = "I1";
      d.eqs = {{R * U + S * T, h1 * h2}};
      out.push_back(std::move(d));
    }
    {
      IdentityDef d;
      d.name = "I2";
      d.eqs = {{R * T + pw(S, 2), (b + c) * (a + b) * pw(a + b + c + one, 2) * h1}};
      out.push_back(std::move(d));
    }
    {
      IdentityDef d;
      d.name = "I3";
      d.eqs = {{h2 + frob(h2, 1) + frob(h2, 2), (a + b) * (a + c) * (b + c)}};
      out.push_back(std::move(d));
    }
    {
      IdentityDef d;
      d.name = "I4";
      d.odd_only = true;
      d.guards = {R, R * U + S * T};
      d.eqs = {{abs_trace(pw(R * T + pw(S, 2), 3) * inv(pw(R, 2) * pw(R * U + S * T, 2))),
                Ex::zero()}};
      out.push_back(std::move(d));
    }
    {
      IdentityDef d;
      d.name = "I5";
      d.uses_x = true;
      ResultantCheck rc;
      rc.f1 = {x + A * pw(x, 2) + a, pw(x, 2), x, one};
      rc.f2 = {pw(x, 3) + A * pw(x, 2) + pw(A, 2) * x + pw(A, 3) + b, one, A, one};
      rc.rhs = R * pw(x, 3) + S * pw(x, 2) + T * x + U;
      d.res = std::move(rc);
      out.push_back(std::move(d));
    }

    // Surjectivity-proof objects of the x^2-lead, mod-3 family: eta_1, eta_2
    // over (a, b, A) and R_1, S_1, S_2 over the conjugate triple.
    Ex eta1 = pw(a, 6) + pw(a, 4) + pw(a, 2) * pw(b, 4) + pw(a, 2) * pw(b, 2) * pw(A, 2) +
              pw(a, 2) * pw(b, 2) + pw(a, 2) * pw(A, 4) + pw(a, 2) * pw(A, 2) + pw(b, 6) +
              pw(b, 4) * pw(A, 2) + pw(b, 4) + pw(b, 2) * pw(A, 2) + pw(A, 6) + pw(A, 2) + one;
    Ex eta2 = pw(a, 6) + pw(a, 5) * pw(A, 2) + pw(a, 5) + pw(a, 4) * pw(b, 4) +
              pw(a, 4) * pw(b, 2) * pw(A, 2) + pw(a, 4) * pw(b, 2) + pw(a, 3) * pw(b, 4) +
              pw(a, 3) * pw(b, 2) * pw(A, 2) + pw(a, 3) * pw(b, 2) + pw(a, 3) * b * pw(A, 3) +
              pw(a, 3) * b * pw(A, 2) + pw(a, 3) * b * A + pw(a, 3) * b + pw(a, 3) * pw(A, 4) +
              pw(a, 3) * pw(A, 3) + pw(a, 3) * A + pw(a, 2) * pw(b, 6) +
              pw(a, 2) * pw(b, 4) * pw(A, 2) + pw(a, 2) * pw(b, 3) * pw(A, 2) +
              pw(a, 2) * pw(b, 3) + pw(a, 2) * pw(b, 2) * pw(A, 3) + pw(a, 2) * pw(b, 2) * A +
              pw(a, 2) * pw(b, 2) + pw(a, 2) * b * pw(A, 3) + pw(a, 2) * b * A +
              pw(a, 2) * pw(A, 6) + pw(a, 2) * pw(A, 5) + pw(a, 2) * pw(A, 2) + pw(a, 2) * A +
              a * pw(b, 6) + a * pw(b, 5) * A + a * pw(b, 5) + a * pw(b, 4) * pw(A, 2) +
              a * pw(b, 4) * A + a * pw(b, 2) * pw(A, 2) + a * b * pw(A, 3) + a * b * pw(A, 2) +
              a * pw(A, 4) + a * pw(A, 3) + pw(b, 7) + pw(b, 6) * A + pw(b, 6) + pw(b, 5) * A +
              pw(b, 4) * pw(A, 4) + pw(b, 4) * pw(A, 3) + pw(b, 4) * A + pw(b, 3) * pw(A, 2) +
              pw(b, 2) * pw(A, 3) + pw(b, 2) * pw(A, 2) + b * pw(A, 3) + pw(A, 8) + pw(A, 5) +
              pw(A, 3) + pw(A, 2);
    Ex R1 = pw(a, 3) + pw(a, 2) * c + a * pw(b, 2) + a * b * c + a * b + a * c + a + pw(b, 3) +
            b * pw(c, 2) + b * c + b + pw(c, 3) + c + one;
    Ex S1 = pw(a, 3) + pw(a, 2) * pw(c, 2) + pw(a, 2) * c + pw(a, 2) + a * pw(b, 2) + a * b * c +
            a * b + a * c + a + pw(b, 4) + pw(b, 3) + b * pw(c, 2) + b * c + b + pw(c, 4) +
            pw(c, 3) + pw(c, 2) + c;
    Ex S2 = pw(a, 4) + pw(a, 3) + pw(a, 2) * pw(b, 2) + pw(a, 2) * c + pw(a, 2) + a * pw(b, 2) +
            a * b * c + a * b + a * c + a + pw(b, 3) + pw(b, 2) + b * pw(c, 2) + b * c + b +
            pw(c, 4) + pw(c, 3) + c;

    {
      IdentityDef d;
      d.name = "I6";
      Ex R2 = frob(R1, 1), R3 = frob(R1, 2), S2f = frob(S1, 1), S3 = frob(S1, 2);
      d.eqs = {{S1 * S2f * pw(R2, 2) * pw(R3, 2) + pw(S3, 2) * pw(R1, 4) + pw(S1, 2) * pw(R2, 4) +
                    S1 * R1 * pw(R2, 3) * R3 + S2f * R1 * R2 * pw(R3, 3),
                pw(a, 2) * pw(R1, 2) * pw(R2, 2) * pw(R3, 2)}};
      out.push_back(std::move(d));
    }
    {
      IdentityDef d;
      d.name = "I7";
      // eta_1 = R_1^2 with the stated linear-form factorization over u, and
      // eta_2 = S_1 S_2 with S_2 = S_1^q.
      Ex L1 = a + u * b + pw(u, 5) * c + pw(u, 2);
      Ex L2 = a + pw(u, 2) * b + pw(u, 3) * c + pw(u, 4);
      Ex L3 = a + pw(u, 4) * b + pw(u, 6) * c + u;
      d.eqs = {{eta1, pw(R1, 2)},
               {eta2, S1 * S2},
               {frob(S1, 1), S2},
               {eta1, pw(L1, 2) * pw(L2, 2) * pw(L3, 2)}};
      out.push_back(std::move(d));
    }

    // Surjectivity-proof objects of the x^2-lead unconditional family.
    Ex R1t = pw(A, 3) + a * c;
    Ex R2t = pw(A, 3) + a * b;
    Ex R3t = pw(A, 3) + b * c;
    Ex U1t = pw(A, 2) + b;
    Ex U2t = pw(A, 2) + c;
    Ex U3t = pw(A, 2) + a;
    {
      IdentityDef d;
      d.name = "I8";
      d.eqs = {{pw(R1t, 2) * pw(R2t, 2) * pw(U1t, 2) * pw(U2t, 2) * pw(U3t, 4) +
                    pw(R1t, 4) * pw(R3t, 2) * pw(U2t, 4) * pw(U3t, 2) +
                    pw(R1t, 2) * pw(R2t, 4) * pw(U1t, 2) * pw(U3t, 4) +
                    pw(R1t, 4) * pw(R2t, 2) * pw(U2t, 2) * pw(U3t, 4) +
                    pw(R2t, 4) * pw(R3t, 2) * pw(U1t, 4) * pw(U3t, 2),
                pw(a, 4) * pw(U1t, 4) * pw(U2t, 4) * pw(U3t, 4)}};
      out.push_back(std::move(d));
    }
    {
      IdentityDef d;
      d.name = "I9";
      d.eqs = {{a * pw(b, 2) + pw(a, 4) * pw(b, 2) + pw(a, 2) * pw(b, 2) + pw(b, 4) +
                    pw(a, 2) * b + pw(a, 2) * pw(b, 4) + pw(a, 4),
                (a * b + a + b) * (a * b + a + pw(b, 2)) * (pw(a, 2) + a * b + b)}};
      out.push_back(std::move(d));
    }
    {
      IdentityDef d;
      d.name = "I10";
      d.uses_x = true;
      ResultantCheck rc;
      rc.f1 = {pw(x, 7) + A * pw(x, 6) + pw(A, 2) * pw(x, 5) + pw(A, 3) * pw(x, 4),
               pw(x, 6) + pw(x, 5) + pw(A, 2) * pw(x, 4) + pw(A, 2) * pw(x, 3),
               pw(a, 2) * pw(x, 3) + pw(a, 2) * A * pw(x, 2),
               pw(a, 2) * pw(x, 2),
               pw(x, 3) + A * pw(x, 2) + pw(A, 2) * x + pw(A, 3),
               pw(x, 2) + pw(A, 2),
               x + A,
               one};
      rc.f2 = {pw(x, 7) + pw(A, 4) * pw(x, 3),
               Ex::zero(),
               pw(b, 2) * pw(x, 3) + pw(b, 2) * pw(A, 2) * x,
               pw(A, 2) * x + pw(A, 3),
               pw(x, 3) + pw(b, 2) * x + pw(A, 2) * x + pw(A, 2),
               x + A,
               x + one};
      rc.rhs = pw(x, 21) * pw(x + A, 12) * pw(eta1 * pw(x, 2) + eta2, 2);
      rc.full_degree_guards = {x + one};  // f2 keeps degree 6 only for x != 1
      d.res = std::move(rc);
      out.push_back(std::move(d));
    }
    return out;
  }();
  return suite;
}

// ---------------------------------------------------------------------------
// Evaluation at random conjugate triples
// ---------------------------------------------------------------------------

inline IdentityResult eval_identity(const IdentityDef& def, const ExtCtx& E, int trials,
                                    uint64_t seed) {
  if (E.ext_degree() != 3) fail(Errc::UnsupportedDegree, "identity checks run over F_{q^3}");
  IdentityResult res;
  res.identity = def.name;
  res.m = E.base().m();
  res.trials = trials;
  if (def.odd_only && E.base().m() % 2 == 0) {
    res.skipped_reason = "parity";
    return res;
  }

  IdentityEnv env;
  env.E = &E;
  env.u = f8_root_of(E, false);  // root of x^3 + x + 1 in the embedded F_8

  Rng rng(derive_seed(seed, "identities", res.m, def.name));
  long budget = 10L * trials;
  int done = 0;
  while (done < trials) {
    if (budget-- <= 0) fail(Errc::GuardAlwaysVanishes, def.name + ": guards never admissible");
    env.a = E.unpack128(rng.bits(E.dim_f2()));
    env.b = E.frobenius(env.a, 1);
    env.c = E.frobenius(env.a, 2);
    env.A = E.add(E.add(env.a, env.b), env.c);
    if (def.uses_x) env.x = E.unpack128(rng.bits(E.dim_f2()));
    bool admissible = true;
    for (const auto& gexp : def.guards)
      if (eval_expr(gexp.node(), env) == E.zero()) {
        admissible = false;
        break;
      }
    if (admissible && def.res)
      for (const auto& gexp : def.res->full_degree_guards)
        if (eval_expr(gexp.node(), env) == E.zero()) {
          admissible = false;
          break;
        }
    if (!admissible) continue;

    bool ok = true;
    for (const auto& eq : def.eqs)
      if (!(eval_expr(eq.lhs.node(), env) == eval_expr(eq.rhs.node(), env))) {
        ok = false;
        break;
      }
    if (ok && def.res) {
      Poly<ExtCtx> p1, p2;
      for (const auto& ce : def.res->f1) p1.c.push_back(eval_expr(ce.node(), env));
      for (const auto& ce : def.res->f2) p2.c.push_back(eval_expr(ce.node(), env));
      p1 = poly_trim(E, std::move(p1));
      p2 = poly_trim(E, std::move(p2));
      ok = p1.degree() + 1 == static_cast<int>(def.res->f1.size()) &&
           p2.degree() + 1 == static_cast<int>(def.res->f2.size());
      if (ok) ok = resultant(E, p1, p2) == eval_expr(def.res->rhs.node(), env);
    }
    if (!ok) {
      res.passed = false;
      res.counterexample_a = E.hex(env.a);
      if (def.uses_x) res.counterexample_x = E.hex(env.x);
      return res;
    }
    ++done;
  }
  res.passed = true;
  return res;
}

inline std::vector<IdentityResult> run_builtin_suite(const ExtCtx& E, int trials, uint64_t seed) {
  std::vector<IdentityResult> out;
  for (const auto& def : builtin_identity_suite()) out.push_back(eval_identity(def, E, trials, seed));
  return out;
}

}  // namespace pentaperm
