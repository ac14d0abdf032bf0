#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hblock/json_io.hpp"
#include "hblock/verify.hpp"

using namespace hblock;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  std::string cmd = std::string(HBLOCK_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(HBLOCK_DATA) + "/" + name; }

}  // namespace

TEST(Json, DerivedDataRoundTrip) {
  for (const HGraph& g : enumerate_unimodular(12, true)) {
    DerivedData d = validate(g);
    Json j = Json::parse(to_json(d).dump());
    EXPECT_TRUE(same_derived(derived_from_json(j), d));
  }
}

TEST(Json, QSeriesRoundTrip) {
  DerivedData d = validate(reference_graph());
  QSeries s = zhat_false_theta(d, Rational(20));
  QSeries back = qseries_from_json(Json::parse(to_json(s).dump()));
  EXPECT_EQ(back, s);
  EXPECT_EQ(back.step(), s.step());
  EXPECT_EQ(back.offset(), s.offset());
}

TEST(Json, WrtValueRoundTrip) {
  DerivedData d = validate(reference_graph());
  for (std::int64_t k : {2, 5}) {
    for (WrtMethod m : {WrtMethod::Naive, WrtMethod::Reduced, WrtMethod::Closed}) {
      WrtValue v = evaluate_wrt(d, k, m, 128);
      WrtValue back = wrt_value_from_json(Json::parse(to_json(v).dump()));
      EXPECT_TRUE(same_wrt_value(back, v)) << to_string(m) << " k=" << k;
    }
  }
}

TEST(Json, CycNumAndRationalRoundTrip) {
  CycNum x = root_of_unity(Rational(3, 10)) * Rational(-7, 3) + CycNum::constant(Rational(1, 2), 10);
  EXPECT_EQ(cycnum_from_json(to_json(x)), x);
  EXPECT_EQ(rational_from_json(to_json(Rational(-22, 7))), Rational(-22, 7));
  EXPECT_THROW(rational_from_json(Json(1.5)), std::invalid_argument);
  EXPECT_THROW(cycnum_from_json(Json{{"order", 0}, {"coeffs", Json::object()}}), std::invalid_argument);
}

TEST(Json, SuiteReportShape) {
  DerivedData d = validate(reference_graph());
  VerifyOptions opt;
  opt.k_max = 3;
  SuiteReport r = run_suite("quantum-set", d, EpsilonMap(d), opt);
  Json j = to_json(r);
  EXPECT_EQ(j["suite"], "quantum-set");
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_FALSE(j["assertions"].empty());
  EXPECT_THROW(run_suite("nope", d, EpsilonMap(d), opt), std::invalid_argument);
}

TEST(Cli, ValidateReference) {
  CliRun r = run_cli("validate " + data("gamma_star.json"));
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_TRUE(j["valid"].get<bool>());
  EXPECT_EQ(j["a"], 37);
  EXPECT_EQ(j["zhat_prefactor"], "5/12");
}

TEST(Cli, ExitCodes) {
  CliRun bad = run_cli("validate " + data("all_minus_one.json"));
  EXPECT_EQ(bad.code, 2);
  Json j = Json::parse(bad.out);
  EXPECT_FALSE(j["valid"].get<bool>());
  EXPECT_EQ(j["det_w"], "0");
  EXPECT_EQ(run_cli("validate " + data("truncated.json")).code, 1);
  EXPECT_EQ(run_cli("validate " + data("does_not_exist.json")).code, 1);
  EXPECT_EQ(run_cli("wrt " + data("gamma_star.json") + " --k 1").code, 1);
  EXPECT_EQ(run_cli("verify " + data("corrupted_epsilon.json") + " --suite assumption --kmax 2").code, 3);
  EXPECT_EQ(run_cli("verify " + data("gamma_star.json") + " --suite quantum-set --kmax 4").code, 0);
}

TEST(Cli, WrtAllMethodsAgree) {
  CliRun r = run_cli("wrt " + data("gamma_star.json") + " --k 3 --method all --precision 128");
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_LT(std::stold(j["max_pairwise_delta"].get<std::string>()), 1e-30L);
}

TEST(Cli, ZhatLeadingTerm) {
  CliRun r = run_cli("zhat " + data("gamma_star.json") + " --strata 10");
  ASSERT_EQ(r.code, 0);
  Json j = Json::parse(r.out);
  EXPECT_TRUE(j["match_up_to_sign"].get<bool>());
}
