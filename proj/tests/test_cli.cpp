#include "doctest.h"

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tensorpow/cli.hpp"

using nlohmann::json;

namespace {

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  RunResult r;
  r.code = tensorpow::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("version and usage errors") {
  const auto v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out == "0.1.0\n");

  const auto bare = run({});
  CHECK(bare.code == 64);
  CHECK(bare.err.find("subcommand is required") != std::string::npos);

  const auto bogus = run({"frobnicate"});
  CHECK(bogus.code == 64);

  const auto help = run({"--help"});
  CHECK(help.code == 0);
  for (const char* sub : {"spectrum", "count", "tau", "bounds", "tract",
                          "verify"})
    CHECK(help.out.find(sub) != std::string::npos);
}

TEST_CASE("spectrum csv") {
  const auto r = run({"spectrum", "--family", "dyadic", "--n-max", "4"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  CHECK(r.out ==
        "# tensorpow 0.1.0\n"
        "# command: spectrum\n"
        "# family: dyadic\n"
        "# precision: dd\n"
        "n,sigma,log_sigma\n"
        "1,1,0\n"
        "2,0.5,-0.69314718055994529\n"
        "3,0.5,-0.69314718055994529\n"
        "4,0.25,-1.3862943611198906\n");
}

TEST_CASE("spectrum json") {
  const auto r = run({"spectrum", "--family", "cube-h1", "--n-max", "2",
                      "--out", "json"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["family"] == "cube-h1[0, 1]");
  CHECK(j["version"] == "0.1.0");
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["n"] == 1);
  CHECK(double(j["rows"][0]["sigma"]) == doctest::Approx(1.0));
  CHECK(double(j["rows"][1]["sigma"]) ==
        doctest::Approx(0.30331447105335285).epsilon(1e-15));
  CHECK(double(j["rows"][1]["log_sigma"]) ==
        doctest::Approx(-1.1929851534134102).epsilon(1e-15));
}

TEST_CASE("spectrum past a bare prefix reports and fails") {
  const auto r = run({"spectrum", "--family", "custom", "--prefix", "1,0.5",
                      "--n-max", "3"});
  CHECK(r.code == 2);
  CHECK(r.err ==
        "tensorpow: error: custom(2-term prefix): sigma(3) is past the "
        "stored prefix\n");
  CHECK(r.out.find("2,0.5,-0.69314718055994529\n") != std::string::npos);
}

TEST_CASE("count aN with both bound families") {
  const auto r = run({"count", "--mode", "aN", "--N", "2", "--r", "16",
                      "--l", "2"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "# tensorpow 0.1.0\n"
        "# command: count\n"
        "# precision: dd\n"
        "key,value\n"
        "N,2\n"
        "r,16\n"
        "l,2\n"
        "count,19\n"
        "sharp_lower,6.1807097779182483\n"
        "sharp_upper,44.361419555836477\n"
        "coarse_lower,2.6666666666666665\n"
        "coarse_upper,255.99999999999994\n");
}

TEST_CASE("count tensor with certificate columns") {
  const auto r = run({"count", "--mode", "tensor", "--family", "dyadic",
                      "--d", "3", "--threshold", "0.00390625"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "# tensorpow 0.1.0\n"
        "# command: count\n"
        "# family: dyadic\n"
        "# d: 3\n"
        "# precision: dd\n"
        "key,value\n"
        "log_threshold,-5.5451774444795623\n"
        "cmp,ge\n"
        "count,18943\n"
        "count_ge,18943\n"
        "count_gt,7423\n"
        "tie_class,11520\n");
}

TEST_CASE("tau single query") {
  const auto r = run({"tau", "--family", "jacobi", "--alpha", "0", "--beta",
                      "0", "--smoothness", "1", "--d", "2", "--n", "4"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "# tensorpow 0.1.0\n"
        "# command: tau\n"
        "# family: jacobi(alpha=0, beta=0, s=1)\n"
        "# d: 2\n"
        "# precision: dd\n"
        "n,tau,log_tau,count_ge,count_gt,tie_class\n"
        "4,0.20000000000000001,-1.6094379124341003,5,3,2\n");
}

TEST_CASE("tau top listing") {
  const auto r = run({"tau", "--family", "jacobi", "--alpha", "0", "--beta",
                      "0", "--smoothness", "1", "--d", "2", "--top", "4"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "# tensorpow 0.1.0\n"
        "# command: tau\n"
        "# family: jacobi(alpha=0, beta=0, s=1)\n"
        "# d: 2\n"
        "# precision: dd\n"
        "n,tau,log_tau\n"
        "1,1,0\n"
        "2,0.33333333333333331,-1.0986122886681098\n"
        "3,0.33333333333333331,-1.0986122886681098\n"
        "4,0.20000000000000001,-1.6094379124341003\n");
}

TEST_CASE("tau selector exclusivity") {
  const auto both = run({"tau", "--family", "dyadic", "--d", "2", "--n", "3",
                         "--top", "5"});
  CHECK(both.code == 2);
  CHECK(both.err ==
        "tensorpow: error: tau needs exactly one of --n and --top\n");
  const auto neither = run({"tau", "--family", "dyadic", "--d", "2"});
  CHECK(neither.code == 2);
}

TEST_CASE("count threshold exclusivity") {
  const auto r = run({"count", "--mode", "tensor", "--family", "dyadic",
                      "--d", "2", "--threshold", "0.5", "--log-threshold",
                      "-0.7"});
  CHECK(r.code == 2);
  CHECK(r.err.find("exactly one of --threshold and --log-threshold") !=
        std::string::npos);
}

TEST_CASE("bounds sweep over the dyadic cube") {
  const auto r = run({"bounds", "--family", "dyadic", "--d", "3", "--n-range",
                      "1..16"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "# tensorpow 0.1.0\n"
        "# command: bounds\n"
        "# family: dyadic\n"
        "# d: 3\n"
        "# precision: dd\n"
        "n,tau,lower,upper,best_delta,asym,pass\n"
        "1,1,,3.0519226913235564,1,,1\n"
        "2,0.5,0.40763020840755854,2.515378442255205,1,0.5,1\n"
        "3,0.5,0.3380772789692259,2.2463836009479792,1,0.83736870956408704,1\n"
        "4,0.5,0.28874226360284722,2.0731615272398249,1,1,1\n"
        "5,0.5,0.2520244025599554,1.9480530355035004,1,1.0782700155654512,1\n"
        "6,0.5,0.22357436276710829,1.851457410413518,1,1.1136718550224289,1\n"
        "7,0.5,0.20083503410112649,1.7735334811993351,1,1.1258916654858653,1\n"
        "8,0.25,0.18221384335603991,1.7086886990149763,1,1.125,1\n"
        "9,0.25,0.16666666666666666,1.6534623556993049,1,1.1164916127521161,1\n"
        "10,0.25,0.15347919601189014,1.6055749458549518,1,1.103520626760198,1\n"
        "11,0.25,0.1421452974531382,1.5634513976872744,1,1.0879697385479519,1\n"
        "12,0.25,0.13229570251776046,1.5259613456617782,1,1.0709963442980739,1\n"
        "13,0.25,0.12365427589657137,1.4922682135023131,1,1.0533272390458559,1\n"
        "14,0.25,0.11601013893384654,1.4617368578533498,1,1.0354251073225904,1\n"
        "15,0.25,0.10919930084625461,1.4338745883612736,1,1.0175862750702855,1\n"
        "16,0.25,0.10309220266662619,1.4082921334299623,1,1,1\n"
        "# pass: 16/16\n");
}

TEST_CASE("bounds with an explicit delta grid and threads") {
  const auto r = run({"bounds", "--family", "dyadic", "--d", "2", "--n-range",
                      "8", "--delta", "0.5", "--delta", "1", "--threads",
                      "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("# pass: 8/8\n") != std::string::npos);
  CHECK(r.out.find(
            "8,0.25,0.14053355315470689,1.8968339473415889,1,0.75,1\n") !=
        std::string::npos);
}

TEST_CASE("tract classifies the growing-smoothness torus") {
  const auto r = run({"tract", "--spec",
                      R"({"family":"torus","norm":"hash","gamma":1.0,)"
                      R"("lo":0.0,"hi":3.141592653589793,)"
                      R"("smoothness":{"kind":"log2ceil"}})"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["verdict"] == "strongly_polynomial");
  CHECK(double(j["slope"]) ==
        doctest::Approx(-1.5849625007211532).epsilon(1e-12));
  CHECK(double(j["r2"]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j["family"] == "torus-hash(gamma=1, [0, 3.14159], s=ceil(log2 d))");
  CHECK(double(j["a2_log"][0]) ==
        doctest::Approx(-2.1972245773362196).epsilon(1e-13));
  bool found = false;
  for (const auto& row : j["evidence"])
    if (row["eps"] == 0.1 && row["d"] == 4) {
      found = true;
      CHECK(row["n_eps_d"] == "9");
    }
  CHECK(found);
}

TEST_CASE("tract classifies the unit cube scale") {
  const auto r = run({"tract", "--spec",
                      R"({"family":"cube","lo":0.0,"hi":1.0,)"
                      R"("smoothness":{"kind":"log2ceil"}})"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["verdict"] == "not_polynomial");
  CHECK(double(j["a2_min_over_max"]) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tract spec validation") {
  CHECK(run({"tract"}).code == 2);
  CHECK(run({"tract", "--spec", "{", "--spec-file", "/tmp/x.json"}).code == 2);
  CHECK(run({"tract", "--spec", "not json"}).code == 2);
  CHECK(run({"tract", "--spec", R"({"family":"nosuch"})"}).code == 2);
}

TEST_CASE("domain errors surface with exit code 2") {
  const auto fam = run({"spectrum", "--family", "nosuch", "--n-max", "3"});
  CHECK(fam.code == 2);
  CHECK(fam.err == "tensorpow: error: --family: unknown family 'nosuch'\n");

  const auto frac = run({"spectrum", "--family", "torus", "--norm", "circ",
                         "--smoothness", "1.5", "--n-max", "3"});
  CHECK(frac.code == 2);
  CHECK(frac.err ==
        "tensorpow: error: torus_spectrum: the circ norm needs integer s >= "
        "1\n");

  const auto out = run({"spectrum", "--family", "dyadic", "--n-max", "2",
                        "--out", "yaml"});
  CHECK(out.code == 2);
  CHECK(out.err == "tensorpow: error: --out: expected csv or json, got "
                   "'yaml'\n");
}

TEST_CASE("precision flag") {
  const auto d = run({"--precision", "double", "spectrum", "--family",
                      "dyadic", "--n-max", "2"});
  CHECK(d.code == 0);
  CHECK(d.out.find("# precision: double\n") != std::string::npos);

  const auto bad = run({"--precision", "bogus", "spectrum", "--family",
                        "dyadic", "--n-max", "2"});
  CHECK(bad.code == 2);
  CHECK(bad.err ==
        "tensorpow: error: --precision: expected dd or double, got "
        "'bogus'\n");

  // The default must be restored for the rest of the suite.
  const auto back = run({"spectrum", "--family", "dyadic", "--n-max", "1"});
  CHECK(back.out.find("# precision: dd\n") != std::string::npos);
}

TEST_CASE("verify quick") {
  const auto r = run({"verify", "--quick"});
  CHECK(r.code == 0);
  std::size_t ok_lines = 0;
  for (std::size_t pos = 0; (pos = r.out.find("[ ok ]", pos)) !=
                            std::string::npos;
       ++pos)
    ++ok_lines;
  CHECK(ok_lines == 13);
  CHECK(r.out.find("verification: all 13 checks passed\n") !=
        std::string::npos);
}

}  // TEST_SUITE("cli")
