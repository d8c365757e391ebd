#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pentaperm/report.hpp"

using namespace pentaperm;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  std::string path = "cli_out_" + std::to_string(counter++) + ".txt";
  std::string cmd = std::string(PENTAPERM_CLI_PATH) + " " + args + " > " + path + " 2>&1";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(path.c_str());
  return r;
}

size_t count_lines(const std::string& s) {
  size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("report writer formats") {
  VerifyRow row;
  row.family = "T1";
  row.m = 2;
  row.predicted = true;
  row.actual = true;
  row.agree = true;
  row.elapsed_ms = 1.2345;
  auto j = to_json(row);
  REQUIRE(j["family"] == "T1");
  REQUIRE(j["k"].is_null());
  REQUIRE(j["agree"] == true);

  ReportWriter csv(ReportFormat::Csv);
  csv.add(j);
  std::ostringstream os;
  csv.write(os);
  auto text = os.str();
  REQUIRE(text.rfind("family,m,k,i,predicted,actual,agree,witness_x1,witness_x2,elapsed_ms\n", 0) == 0);
  REQUIRE(text.find("T1,2,,,true,true,true,,,1.234") != std::string::npos);

  ReportWriter jl(ReportFormat::Json);
  jl.add(j);
  std::ostringstream os2;
  jl.write(os2);
  REQUIRE(count_lines(os2.str()) == 1);
}

TEST_CASE("cli: families verify emits one row per m and exits cleanly") {
  auto r = run_cli("families verify --family T1 --m 1..5 --format csv --threads 2");
  REQUIRE(r.exit_code == 0);
  REQUIRE(count_lines(r.out) == 6);  // header + 5 rows
  REQUIRE(r.out.find("T1,1,") != std::string::npos);
  REQUIRE(r.out.find("false") == std::string::npos);
}

TEST_CASE("cli: classify cubic") {
  auto r = run_cli("classify cubic --m 1 --coeffs 1 1 --format json");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("\"pattern\":\"(3)\"") != std::string::npos);
  REQUIRE(r.out.find("\"oracle\":\"(3)\"") != std::string::npos);
}

TEST_CASE("cli: conjecture scan and qm decide") {
  auto r = run_cli("conjecture scan --m 1..3 --k 1..2 --format json --threads 2");
  REQUIRE(r.exit_code == 0);
  REQUIRE(count_lines(r.out) == 12);

  auto q = run_cli("qm decide --f T7 --g K8 --m 3 --format json");
  REQUIRE(q.exit_code == 0);
  REQUIRE(q.out.find("\"verdict\":\"inequivalent\"") != std::string::npos);
  REQUIRE(q.out.find("\"admissible_d\":[]") != std::string::npos);
}

TEST_CASE("cli: witness and perm check") {
  auto w = run_cli("witness --family T2 --m 2 --format json");
  REQUIRE(w.exit_code == 0);
  REQUIRE(w.out.find("\"rule\":\"construction\"") != std::string::npos);
  REQUIRE(w.out.find("\"verified\":true") != std::string::npos);

  auto p = run_cli("perm check --family T2 --m 2 --format json --threads 2");
  REQUIRE(p.exit_code == 0);  // predicted false, actual false: agreement
  REQUIRE(p.out.find("\"actual\":false") != std::string::npos);
  REQUIRE(p.out.find("\"witness_x1\":") != std::string::npos);

  // asking for a witness where the family permutes is a usage error
  auto bad = run_cli("witness --family T1 --m 2");
  REQUIRE(bad.exit_code == 2);
}

TEST_CASE("cli: identity runs are byte-identical for a fixed seed") {
  auto a = run_cli("identities run --m 3 --trials 25 --seed 42 --format json");
  auto b = run_cli("identities run --m 3 --trials 25 --seed 42 --format json");
  REQUIRE(a.exit_code == 0);
  REQUIRE(a.out == b.out);
  REQUIRE(count_lines(a.out) == 10);
  auto c = run_cli("identities run --m 3 --trials 25 --seed 43 --format json");
  REQUIRE(c.exit_code == 0);
}

TEST_CASE("cli: field info with an override file") {
  {
    std::ofstream f("override_test.txt");
    f << "3: d\n";
  }
  auto r = run_cli("field info --m 3 --redpoly-file override_test.txt --format json");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("\"redpoly\":\"d\"") != std::string::npos);
  REQUIRE(r.out.find("\"source\":\"override\"") != std::string::npos);
  auto d = run_cli("field info --m 3 --format json");
  REQUIRE(d.out.find("\"redpoly\":\"b\"") != std::string::npos);
  REQUIRE(d.out.find("x^3 + x + 1") != std::string::npos);
  std::remove("override_test.txt");
}

TEST_CASE("cli: worker-count environment variable is honored") {
  // PENTAPERM_THREADS only bounds fan-out; results must be identical
  auto one = run_cli("perm check --family T2 --m 3 --format csv --threads 1");
  RunResult env;
  {
    static int counter = 1000;
    std::string path = "cli_out_" + std::to_string(counter++) + ".txt";
    std::string cmd = std::string("PENTAPERM_THREADS=2 ") + PENTAPERM_CLI_PATH +
                      " perm check --family T2 --m 3 --format csv > " + path + " 2>&1";
    env.exit_code = WEXITSTATUS(std::system(cmd.c_str()));
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    env.out = ss.str();
    std::remove(path.c_str());
  }
  REQUIRE(one.exit_code == 0);
  REQUIRE(env.exit_code == 0);
  // strip the elapsed_ms column before comparing
  auto strip_last = [](const std::string& s) {
    std::string out;
    std::istringstream is(s);
    std::string line;
    while (std::getline(is, line)) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
  };
  REQUIRE(strip_last(one.out) == strip_last(env.out));
}

TEST_CASE("cli: readme examples parse and run") {
  REQUIRE(run_cli("field info --m 8 --format json").exit_code == 0);
  REQUIRE(run_cli("classify cubic --m 5 --coeffs 3 1f --format json").exit_code == 0);
  REQUIRE(run_cli("classify quartic --m 4 --coeffs 2 3 9 --format json").exit_code == 0);
  REQUIRE(run_cli("conjecture grid --m 1 --bound 1 --format json").exit_code == 0);
}

TEST_CASE("cli: usage errors exit 2") {
  REQUIRE(run_cli("families verify --m 1..3").exit_code == 2);     // missing --family
  REQUIRE(run_cli("families verify --family T99 --m 1").exit_code == 2);
  REQUIRE(run_cli("perm check --family T1 --m 40").exit_code == 2);
  REQUIRE(run_cli("nonsense").exit_code == 2);
}
