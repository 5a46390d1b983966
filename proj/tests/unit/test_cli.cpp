#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hpbif/cli.hpp"
#include "hpbif/errors.hpp"
#include "reference_values.hpp"

using namespace hpbif;
using namespace hpbif::cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> numeric_rows(const std::string& csv) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string header(const std::string& csv) { return csv.substr(0, csv.find('\n')); }

Error parse_failure(std::string_view text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected a parse error");
  return Error(ErrorCategory::Parse, "");
}

}  // namespace

TEST_CASE("config defaults and overrides") {
  const RunConfig d = parse_config("");
  CHECK(d.params == table_parameters());
  CHECK(d.sigma_points == 200);

  const RunConfig c = parse_config(
      "# tangency value\n"
      "c2 = 650.41463\n"
      "  sigma_band = 1e-4   # looser\n"
      "\n"
      "sigma_k1_min = 0.0005\n"
      "sigma_k1_max = 0.003\n"
      "threads = 2\n");
  CHECK(c.params.c2 == 650.41463);
  CHECK(c.tol.sigma_band == 1e-4);
  CHECK(*c.sigma_k1_min == 0.0005);
  CHECK(c.threads == 2);
  CHECK(c.params.k1 == table_parameters().k1);
  for (auto k : setting_keys()) CHECK(!k.empty());
}

TEST_CASE("config errors name the line") {
  Error neg = parse_failure("c2 = 100\nalpha1 = -1\n");
  CHECK(neg.category() == ErrorCategory::Parse);
  CHECK(std::string(neg.what()).find("line 2") != std::string::npos);
  CHECK(std::string(neg.what()).find("alpha1") != std::string::npos);

  CHECK(std::string(parse_failure("bogus = 1").what()).find("line 1") !=
        std::string::npos);
  CHECK(std::string(parse_failure("\n\nk1 = abc").what()).find("line 3") !=
        std::string::npos);
  CHECK(std::string(parse_failure("k1 0.003").what()).find("line 1") !=
        std::string::npos);
  parse_failure("sigma_k1_min = 0.003\nsigma_k1_max = 0.001");
  parse_failure("sigma_points = 2.5");
}

TEST_CASE("hopf with the printed eigenvector") {
  const Result r = invoke({"hopf", "--k1", "0.00331", "--k2", "0.00100",
                           "--q-from-file", HPBIF_TEST_DATA "/reference_q.txt"});
  REQUIRE(r.code == 0);
  CHECK(header(r.out) ==
        "k1,k2,omega0,re_g21,im_g21,l1,transversality,l1_unit_frequency");
  const auto rows = numeric_rows(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(rows[0].back() - ref::l1_printed) < 1e-5);
  CHECK(rows[0][1] == 0.001);
  CHECK(rows[0][2] == doctest::Approx(ref::omega0).epsilon(1e-5));
  CHECK(rows[0][6] < 0.0);

  // Without snapping the literal point is off the curve.
  const Result strict = invoke({"hopf", "--no-snap"});
  CHECK(strict.code == 2);
  CHECK(strict.err.rfind("error: not-on-sigma", 0) == 0);
}

TEST_CASE("sigma rows reproduce the table") {
  std::string list;
  for (const auto& row : ref::sigma_table) {
    if (!list.empty()) list += ',';
    list += format_number(row.k1);
  }
  const Result r = invoke({"sigma", "--k1-list", list});
  REQUIRE(r.code == 0);
  CHECK(header(r.out) == "k1,k2,omega0,l1_sign,delta_residual");
  const auto rows = numeric_rows(r.out);
  REQUIRE(rows.size() == std::size(ref::sigma_table));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(std::abs(rows[i][1] - ref::sigma_table[i].k2) < 1e-7);
    CHECK(rows[i][2] == doctest::Approx(ref::sigma_table[i].omega).epsilon(1e-4));
    CHECK(rows[i][3] == 1.0);
  }
}

TEST_CASE("sigma grid, svg and determinism") {
  const std::string svg = "hpbif_test_sigma.svg";
  const Result a = invoke({"--threads", "1", "sigma", "--n", "40", "--svg", svg});
  const Result b = invoke({"--threads", "3", "sigma", "--n", "40"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(numeric_rows(a.out).size() == 40);
  std::ifstream in(svg);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("<svg") != std::string::npos);
  CHECK(ss.str().find("polyline") != std::string::npos);
  std::remove(svg.c_str());

  const Result empty = invoke({"--c2", "700", "sigma", "--n", "10"});
  CHECK(empty.code == 0);
  CHECK(numeric_rows(empty.out).empty());
}

TEST_CASE("tangency output") {
  const Result r = invoke({"tangency"});
  REQUIRE(r.code == 0);
  const auto rows = numeric_rows(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(rows[0][0] - ref::c2_star) < 1e-2);
  CHECK(rows[0][1] == doctest::Approx(rows[0][2]));
  CHECK(rows[0][5] < 0.0);
}

TEST_CASE("equilibria, classify and simulate") {
  const Result eq = invoke({"equilibria"});
  REQUIRE(eq.code == 0);
  CHECK(header(eq.out) == "name,P,M,L,G");
  CHECK(eq.out.find("A4,") != std::string::npos);
  CHECK(eq.err.find("R1") != std::string::npos);

  const Result cl = invoke({"classify"});
  REQUIRE(cl.code == 0);
  CHECK(cl.out.find("A1,") != std::string::npos);

  const Result sm = invoke({"simulate", "--x0", "3000,100000,1000,400", "--t-end", "1",
                            "--dt", "0.25"});
  REQUIRE(sm.code == 0);
  CHECK(header(sm.out) == "t,P,M,L,G");
  const auto rows = numeric_rows(sm.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows.back()[0] == 1.0);
  CHECK(invoke({"simulate", "--x0", "1,2,3", "--t-end", "1"}).code == 1);
}

TEST_CASE("errors and exit codes") {
  const Result bad = invoke({"--alpha1", "-1", "equilibria"});
  CHECK(bad.code == 1);
  CHECK(bad.err.rfind("error: parse:", 0) == 0);
  CHECK(bad.out.empty());

  const Result usage = invoke({"hopf", "--no-such-flag"});
  CHECK(usage.code == 1);
  CHECK(usage.err.rfind("error: usage:", 0) == 0);

  const Result missing = invoke({"--config", "/nonexistent/cfg.txt", "equilibria"});
  CHECK(missing.code == 1);

  const Result dom = invoke({"--phi1", "0.5", "hopf"});
  CHECK(dom.code != 0);
  CHECK(dom.err.rfind("error: ", 0) == 0);

  const Result help = invoke({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("sigma") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
  const Result a = invoke({"hopf"});
  const Result b = invoke({"hopf"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.err == b.err);
}

TEST_CASE("number format") {
  CHECK(format_number(0.00331) == "3.310000000e-03");
  CHECK(format_number(-2.5) == "-2.500000000e+00");
}
