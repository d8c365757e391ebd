// pentaperm: a desk-scale laboratory for permutation pentanomials over
// F_{q^3} in characteristic two. Subcommands drive the exhaustive
// verification workflows and emit JSON Lines / CSV / pretty reports.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pentaperm/factor_class.hpp"
#include "pentaperm/families.hpp"
#include "pentaperm/identities.hpp"
#include "pentaperm/parallel.hpp"
#include "pentaperm/qm_equiv.hpp"
#include "pentaperm/report.hpp"

namespace pp = pentaperm;

namespace {

std::vector<int> parse_int_range(const std::string& s) {
  std::vector<int> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    std::string part = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    auto dots = part.find("..");
    try {
      if (dots != std::string::npos) {
        int lo = std::stoi(part.substr(0, dots));
        int hi = std::stoi(part.substr(dots + 2));
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      } else {
        out.push_back(std::stoi(part));
      }
    } catch (const std::exception&) {
      pp::fail(pp::Errc::ParseError, "bad range: " + s);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) pp::fail(pp::Errc::ParseError, "empty range: " + s);
  return out;
}

std::vector<std::string> parse_family_spec(const std::string& s) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    std::string part = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    auto dots = part.find("..");
    if (dots != std::string::npos) {
      std::string lo = part.substr(0, dots), hi = part.substr(dots + 2);
      if (lo.empty() || hi.empty() || lo[0] != hi[0])
        pp::fail(pp::Errc::ParseError, "bad family range: " + part);
      int a = std::stoi(lo.substr(1)), b = std::stoi(hi.substr(1));
      for (int v = a; v <= b; ++v) out.push_back(lo.substr(0, 1) + std::to_string(v));
    } else {
      out.push_back(part);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct OutputSink {
  std::string path;
  std::string format = "pretty";

  void emit(const pp::ReportWriter& w) const {
    if (path.empty()) {
      w.write(std::cout);
      return;
    }
    std::ofstream os(path);
    if (!os) pp::fail(pp::Errc::ParseError, "cannot open output file: " + path);
    w.write(os);
  }
};

int exit_code_for(const pp::Error& e) {
  switch (e.code()) {
    case pp::Errc::ConstructionFailed:
    case pp::Errc::GuardAlwaysVanishes:
      return 1;
    default:
      return 2;
  }
}

std::map<int, uint64_t> load_overrides(const std::string& path) {
  std::ifstream in(path);
  if (!in) pp::fail(pp::Errc::ParseError, "cannot read override file: " + path);
  return pp::parse_redpoly_overrides(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pentaperm: permutation-pentanomial laboratory over F_{q^3}, q = 2^m"};
  app.require_subcommand(1);
  app.footer(
      "Field elements are hex of the packed coordinate vector, low coordinate\n"
      "in the low bits (an F_{q^3} element (c0,c1,c2) packs as c0 | c1<<m | c2<<2m).\n"
      "Exit codes: 0 all checks agree, 1 disagreement or failed construction,\n"
      "2 usage error. PENTAPERM_THREADS sets the default worker count.");

  std::string fam_spec, m_spec, k_spec, i_spec, fmt = "pretty", out_path;
  std::string f_id, g_id, eps_hex, eps2_hex, redfile;
  std::vector<std::string> coeffs;
  int m_single = 0, k_single = 0, i_single = 0, trials = 200, threads = 0, bound = 4;
  uint64_t seed = 0;
  std::string d0_spec = "1,2,4";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", fmt, "json | csv | pretty")->capture_default_str();
    cmd->add_option("--out", out_path, "write the report to this file instead of stdout");
    cmd->add_option("--threads", threads, "worker count (default: PENTAPERM_THREADS or hardware)");
  };

  auto* field = app.add_subcommand("field", "base-field inspection");
  auto* field_info = field->add_subcommand("info", "show the F_{2^m} context");
  field_info->add_option("--m", m_single, "extension degree over F_2")->required();
  field_info->add_option("--redpoly-file", redfile, "optional override table: lines 'm: hex'");
  add_common(field_info);

  auto* families = app.add_subcommand("families", "family registry operations");
  auto* fam_verify = families->add_subcommand("verify", "exhaustive concordance against the predicted conditions");
  fam_verify->add_option("--family", fam_spec, "family ids, e.g. T1..T11 or T3,K8")->required();
  fam_verify->add_option("--m", m_spec, "m range, e.g. 1..7")->required();
  fam_verify->add_option("--k", k_spec, "k range for parameterized families (default 1..4)");
  fam_verify->add_option("--i", i_spec, "i range for parameterized families (default 1..4)");
  add_common(fam_verify);

  auto* perm = app.add_subcommand("perm", "single permutation checks");
  auto* perm_check = perm->add_subcommand("check", "scan one family instance");
  perm_check->add_option("--family", f_id, "family id")->required();
  perm_check->add_option("--m", m_single, "field degree m")->required();
  perm_check->add_option("--k", k_single, "parameter k");
  perm_check->add_option("--i", i_single, "parameter i");
  perm_check->add_option("--eps", eps_hex, "coefficient slot value (hex, default 1)");
  perm_check->add_option("--eps2", eps2_hex, "second coefficient slot value (hex, default 1)");
  add_common(perm_check);

  auto* witness = app.add_subcommand("witness", "converse witness construction for a failing m");
  witness->add_option("--family", f_id, "family id")->required();
  witness->add_option("--m", m_single, "field degree m")->required();
  witness->add_option("--k", k_single, "parameter k");
  witness->add_option("--i", i_single, "parameter i");
  add_common(witness);

  auto* classify = app.add_subcommand("classify", "factorization pattern classification");
  auto* cls_cubic = classify->add_subcommand("cubic", "pattern of x^3 + a x + b over F_q");
  cls_cubic->add_option("--m", m_single, "field degree m")->required();
  cls_cubic->add_option("--coeffs", coeffs, "a b (hex)")->expected(2)->required();
  add_common(cls_cubic);
  auto* cls_quartic = classify->add_subcommand("quartic", "pattern of x^4 + a2 x^2 + a1 x + a0 over F_q");
  cls_quartic->add_option("--m", m_single, "field degree m")->required();
  cls_quartic->add_option("--coeffs", coeffs, "a2 a1 a0 (hex)")->expected(3)->required();
  add_common(cls_quartic);

  auto* qm = app.add_subcommand("qm", "quasi-multiplicative equivalence");
  auto* qm_decide_cmd = qm->add_subcommand("decide", "decide QM equivalence of two families");
  qm_decide_cmd->add_option("--f", f_id, "first family id")->required();
  qm_decide_cmd->add_option("--g", g_id, "second family id (T#, C#, or K#)")->required();
  qm_decide_cmd->add_option("--m", m_single, "field degree m")->required();
  qm_decide_cmd->add_option("--k", k_single, "parameter k, applied where a family needs it");
  qm_decide_cmd->add_option("--i", i_single, "parameter i, applied where a family needs it");
  qm_decide_cmd->add_option("--eps", eps_hex, "coefficient slot value (hex, default 1)");
  qm_decide_cmd->add_option("--eps2", eps2_hex, "second coefficient slot value (hex, default 1)");
  add_common(qm_decide_cmd);

  auto* idents = app.add_subcommand("identities", "proof-identity verification");
  auto* idents_run = idents->add_subcommand("run", "run the builtin identity suite at random points");
  idents_run->add_option("--m", m_single, "field degree m")->required();
  idents_run->add_option("--trials", trials, "admissible points per identity")->capture_default_str();
  idents_run->add_option("--seed", seed, "RNG seed")->capture_default_str();
  add_common(idents_run);

  auto* conj = app.add_subcommand("conjecture", "conjectured-family support scans");
  auto* conj_scan = conj->add_subcommand("scan", "scan C1, C2 against gcd(2^k+1, q-1) = 1");
  conj_scan->add_option("--m", m_spec, "m range")->required();
  conj_scan->add_option("--k", k_spec, "k range")->required();
  add_common(conj_scan);
  auto* conj_grid = conj->add_subcommand("grid", "replicate the digit-grid search at one small m");
  conj_grid->add_option("--m", m_single, "field degree m (q^3 <= 2^18)")->required();
  conj_grid->add_option("--d0", d0_spec, "leading exponents to try")->capture_default_str();
  conj_grid->add_option("--bound", bound, "digit bound (digits in [-bound, bound])")->capture_default_str();
  add_common(conj_grid);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    pp::ReportWriter writer(pp::parse_format(fmt));
    OutputSink sink{out_path, fmt};
    int exit_code = 0;

    if (*field_info) {
      std::map<int, uint64_t> overrides;
      if (!redfile.empty()) overrides = load_overrides(redfile);
      auto ctx = pp::field_new(m_single, std::nullopt, redfile.empty() ? nullptr : &overrides);
      pp::ordered_json j;
      j["m"] = ctx.m();
      j["q"] = ctx.q();
      j["redpoly"] = pp::to_hex(ctx.redpoly());
      std::string poly;
      for (int d = ctx.m(); d >= 0; --d)
        if ((ctx.redpoly() >> d) & 1) {
          if (!poly.empty()) poly += " + ";
          poly += d == 0 ? "1" : (d == 1 ? "x" : "x^" + std::to_string(d));
        }
      j["redpoly_str"] = poly;
      j["trace_mask"] = pp::to_hex(ctx.trace_mask());
      j["source"] = (!redfile.empty() && overrides.count(m_single)) ? "override" : "builtin";
      writer.add(j);
      sink.emit(writer);
      return 0;
    }

    if (*fam_verify) {
      auto ids = parse_family_spec(fam_spec);
      auto ms = parse_int_range(m_spec);
      pp::TowerCache towers;
      for (const auto& id : ids) {
        const auto& entry = pp::family_by_id(id);
        std::vector<int> ks, is;
        if (entry.tpl.uses_k) ks = k_spec.empty() ? parse_int_range("1..4") : parse_int_range(k_spec);
        if (entry.tpl.uses_i) {
          if (!i_spec.empty()) is = parse_int_range(i_spec);
          else if (!entry.tpl.i_default) is = parse_int_range("1..4");
        }
        for (const auto& row : pp::verify_entry(entry, ms, ks, is, towers, threads)) {
          if (row.agree && !*row.agree) exit_code = 1;
          writer.add(pp::to_json(row));
        }
      }
      sink.emit(writer);
      return exit_code;
    }

    if (*perm_check) {
      const auto& entry = pp::family_by_id(f_id);
      pp::FieldCtx base(m_single);
      pp::ExtCtx ctx(base, 3);
      std::optional<int> k, i;
      if (perm_check->count("--k")) k = k_single;
      if (perm_check->count("--i")) i = i_single;
      if (entry.tpl.uses_k && !k) k = 1;
      if (entry.tpl.uses_i && !i && !entry.tpl.i_default) i = 1;
      std::optional<pp::EElem> eps, eps2;
      if (!eps_hex.empty()) eps = ctx.parse_hex(eps_hex);
      if (!eps2_hex.empty()) eps2 = ctx.parse_hex(eps2_hex);
      auto f = pp::instantiate_family(entry, ctx, k, i, eps, eps2);
      auto res = pp::is_permutation(f, threads);
      pp::VerifyRow row;
      row.family = entry.id;
      row.m = m_single;
      row.k = f.k;
      row.i = f.i;
      row.actual = res.is_perm;
      row.elapsed_ms = res.elapsed_ms;
      if (entry.cond != pp::Cond::External && !eps && !eps2) {
        bool p = pp::predicted(entry, m_single, k);
        row.predicted = p;
        row.agree = (p == res.is_perm);
        if (!*row.agree) exit_code = 1;
      }
      if (res.witness) {
        row.witness_x1 = ctx.hex(res.witness->first);
        row.witness_x2 = ctx.hex(res.witness->second);
      }
      writer.add(pp::to_json(row));
      sink.emit(writer);
      return exit_code;
    }

    if (*witness) {
      const auto& entry = pp::family_by_id(f_id);
      pp::FieldCtx base(m_single);
      pp::ExtCtx ctx(base, 3);
      std::optional<int> k, i;
      if (witness->count("--k")) k = k_single;
      if (witness->count("--i")) i = i_single;
      if (entry.tpl.uses_k && !k) k = 1;
      if (entry.tpl.uses_i && !i && !entry.tpl.i_default) i = 1;
      if (entry.cond != pp::Cond::External && pp::predicted(entry, m_single, k))
        pp::fail(pp::Errc::ParseError,
                 entry.id + " is predicted to permute at m=" + std::to_string(m_single) +
                     "; no collision witness exists");
      auto pair = pp::find_predicted_collision(entry, ctx, k, i, threads);
      pp::ordered_json j;
      j["family"] = entry.id;
      j["m"] = m_single;
      j["k"] = k ? pp::ordered_json(*k) : pp::ordered_json(nullptr);
      j["i"] = i ? pp::ordered_json(*i) : pp::ordered_json(nullptr);
      j["witness_x1"] = ctx.hex(pair.first);
      j["witness_x2"] = ctx.hex(pair.second);
      j["rule"] = entry.wrule == pp::WitnessRule::Fallback ? "scan" : "construction";
      j["verified"] = true;
      writer.add(j);
      sink.emit(writer);
      return 0;
    }

    if (*cls_cubic || *cls_quartic) {
      pp::FieldCtx base(m_single);
      pp::FactorClassifier cls(base);
      std::vector<pp::FElem> cs;
      for (const auto& h : coeffs) {
        bool ok = false;
        auto v = pp::parse_hex_u128(h, &ok);
        if (!ok || v >= base.order()) pp::fail(pp::Errc::ParseError, "bad coefficient hex: " + h);
        cs.push_back(base.from_bits(static_cast<uint64_t>(v)));
      }
      pp::ClassifyReport rep;
      std::vector<pp::FElem> poly_coeffs;
      if (*cls_cubic) {
        rep = cls.classify_cubic(cs[0], cs[1]);
        poly_coeffs = {cs[1], cs[0], base.zero(), base.one()};
      } else {
        rep = cls.classify_quartic(cs[0], cs[1], cs[2]);
        poly_coeffs = {cs[2], cs[1], base.zero(), cs[0], base.one()};
      }
      pp::ordered_json j;
      std::string pat = std::holds_alternative<pp::CubicPattern>(rep.pattern)
                            ? pp::pattern_name(std::get<pp::CubicPattern>(rep.pattern))
                            : pp::pattern_name(std::get<pp::QuarticPattern>(rep.pattern));
      j["m"] = m_single;
      j["pattern"] = pat;
      j["trace_test"] = rep.trace_test;
      j["w_traces"] = rep.w_traces;
      std::vector<std::string> roots_hex;
      for (auto r : rep.resolvent_roots) roots_hex.push_back(base.hex(r));
      j["resolvent_roots"] = roots_hex;
      if (rep.y_pair_base)
        j["y_pair"] = {base.hex(rep.y_pair_base->first), base.hex(rep.y_pair_base->second)};
      if (rep.y_pair_ext)
        j["y_pair"] = {cls.fq2().hex(rep.y_pair_ext->first), cls.fq2().hex(rep.y_pair_ext->second)};
      if (rep.y_cubes) j["y_cubes"] = {rep.y_cubes->first, rep.y_cubes->second};
      if (base.order() <= (pp::u128(1) << 16)) {
        auto oracle = cls.pattern_oracle(poly_coeffs);
        std::string opat = std::holds_alternative<pp::CubicPattern>(oracle)
                               ? pp::pattern_name(std::get<pp::CubicPattern>(oracle))
                               : pp::pattern_name(std::get<pp::QuarticPattern>(oracle));
        j["oracle"] = opat;
        if (opat != pat) exit_code = 1;  // classifier/oracle disagreement is a loud failure
      }
      writer.add(j);
      sink.emit(writer);
      return exit_code;
    }

    if (*qm_decide_cmd) {
      pp::FieldCtx base(m_single);
      pp::ExtCtx ctx(base, 3);
      auto build = [&](const std::string& id) {
        const auto& entry = pp::family_by_id(id);
        std::optional<int> k, i;
        if (qm_decide_cmd->count("--k")) k = k_single;
        if (qm_decide_cmd->count("--i")) i = i_single;
        if (entry.tpl.uses_k && !k) k = 1;
        if (entry.tpl.uses_i && !i && !entry.tpl.i_default) i = 1;
        std::optional<pp::EElem> eps, eps2;
        if (!eps_hex.empty()) eps = ctx.parse_hex(eps_hex);
        if (!eps2_hex.empty()) eps2 = ctx.parse_hex(eps2_hex);
        return pp::instantiate_family(entry, ctx, k, i, eps, eps2);
      };
      auto f = build(f_id);
      auto g = build(g_id);
      auto rep = pp::qm_decide(f, g, seed);
      writer.add(pp::qm_to_json(rep, f_id, g_id, m_single, ctx));
      sink.emit(writer);
      return rep.verdict == pp::QMVerdict::Inconclusive ? 1 : 0;
    }

    if (*idents_run) {
      pp::FieldCtx base(m_single);
      pp::ExtCtx ctx(base, 3);
      auto results = pp::run_builtin_suite(ctx, trials, seed);
      for (const auto& r : results) {
        if (r.skipped_reason.empty() && !r.passed) exit_code = 1;
        writer.add(pp::to_json(r));
      }
      sink.emit(writer);
      return exit_code;
    }

    if (*conj_scan) {
      auto ms = parse_int_range(m_spec);
      auto ks = parse_int_range(k_spec);
      pp::TowerCache towers;
      for (const auto& row : pp::scan_conjecture(ms, ks, towers, threads)) {
        if (!row.agree) exit_code = 1;
        writer.add(pp::to_json(row));
      }
      sink.emit(writer);
      return exit_code;
    }

    if (*conj_grid) {
      pp::FieldCtx base(m_single);
      pp::ExtCtx ctx(base, 3);
      auto d0s = parse_int_range(d0_spec);
      for (const auto& hit : pp::scan_grid(ctx, d0s, bound, threads)) {
        pp::ordered_json j;
        j["d0"] = hit.d0;
        j["s"] = hit.s;
        j["t"] = hit.t;
        j["exponents"] = hit.exponents;
        writer.add(j);
      }
      sink.emit(writer);
      return 0;
    }

    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const pp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
