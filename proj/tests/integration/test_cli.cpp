#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  Json json() const { return Json::parse(out); }
};

std::string binary() {
  const char* env = std::getenv("QGAUSS_CLI");
  return env ? env : "qgauss";
}

Run run(const std::string& args) {
  Run r;
  const std::string cmd = binary() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "qgauss_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, AnalyzePasses) {
  const auto r = run("analyze clifford --samples 20 --seed 7");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = r.json();
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["config"]["command"], "analyze");
  EXPECT_EQ(j["records"].size(), 20u);
  EXPECT_FALSE(j.contains("timing"));
  for (const auto& rec : j["records"]) EXPECT_LE(rec["residuals"]["theorem1"].get<double>(), 1e-6);
}

TEST(Cli, AnalyzeCurvatureOfASmallSphere) {
  const auto r = run("analyze geodesic:n=2,rho=0.01 --samples 3");
  ASSERT_EQ(r.code, 0) << r.out;
  for (const auto& rec : r.json()["records"])
    for (const auto& l : rec["lambdas"]) EXPECT_NEAR(l.get<double>(), 99.99666664444422, 1e-6);
}

TEST(Cli, FiniteDifferenceScheme) {
  const auto r = run("analyze perturbed --samples 10 --scheme fd");
  EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, ReportsAreDeterministic) {
  const auto a = run("parallel-sweep perturbed --t pi/12,pi/6 --samples 4 --seed 11");
  const auto b = run("parallel-sweep perturbed --t pi/12,pi/6 --samples 4 --seed 11");
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  const auto c = run("parallel-sweep perturbed --t pi/12,pi/6 --samples 4 --seed 12");
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, TimingIsOptIn) {
  const auto r = run("analyze great --samples 2 --timing");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.json().contains("timing"));
}

TEST(Cli, SweepFlagsDegenerateParameters) {
  const auto r = run("parallel-sweep clifford --t pi/6,pi/4 --samples 2");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = r.json();
  for (const auto& rec : j["records"]) {
    const auto& sweep = rec["sweep"];
    ASSERT_EQ(sweep.size(), 2u);
    EXPECT_FALSE(sweep[0]["degenerate"].get<bool>());
    EXPECT_NEAR(sweep[0]["lambdas"][0].get<double>(), 0.2679491924311229, 1e-8);
    EXPECT_NEAR(sweep[0]["lambdas"][1].get<double>(), -3.7320508075688736, 1e-8);
    EXPECT_TRUE(sweep[1]["degenerate"].get<bool>());
  }
}

TEST(Cli, EmptySweepEchoesConfig) {
  const auto r = run("parallel-sweep clifford --t \"\"");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(r.json()["records"].empty());
}

TEST(Cli, LiftFileRoundTrip) {
  const auto lift = scratch("lift.json"), dump = scratch("surface.json");
  const auto a = run("analyze perturbed --samples 2 --dump-lift " + lift.string() + " --scramble 0.3");
  ASSERT_EQ(a.code, 0) << a.out;
  const auto r = run("reconstruct " + lift.string() + " --dump " + dump.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = r.json();
  EXPECT_LE(j["surfaces"][0]["projector_fidelity"].get<double>(), 1e-6);
  EXPECT_LE(j["horizontalization"]["loop_residual"].get<double>(), 1e-6);
  std::ifstream in(dump);
  const auto dumped = Json::parse(in);
  ASSERT_EQ(dumped.size(), 1u);
  const auto& surf = dumped[0];
  EXPECT_EQ(surf["label"], "parallel hypersurface");
  EXPECT_EQ(surf["a"].size(), surf["b"].size());
}

TEST(Cli, ForbiddenParameterExitsWithFailure) {
  const auto lift = scratch("clifford.json");
  ASSERT_EQ(run("analyze clifford --samples 1 --dump-lift " + lift.string()).code, 0);
  const auto r = run("reconstruct " + lift.string() + " --t pi/4");
  ASSERT_EQ(r.code, 1) << r.out;
  EXPECT_EQ(r.json()["error"]["kind"], "degenerate_parameter");
  EXPECT_EQ(run("reconstruct " + lift.string() + " --t 0.1").code, 0);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("analyze torus").code, 2);
  EXPECT_EQ(run("analyze clifford --scheme spectral").code, 2);
  EXPECT_EQ(run("verify-quadric --n 1").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  const auto bad = scratch("bad.json");
  std::ofstream(bad) << "{\"n\": 2, \"grid\": [[0, 1]], \"values\": []}";
  EXPECT_EQ(run("reconstruct " + bad.string()).code, 2);
  std::ofstream(scratch("garbage.json")) << "not json";
  EXPECT_EQ(run("reconstruct " + scratch("garbage.json").string()).code, 2);
  EXPECT_EQ(run("reconstruct " + scratch("missing.json").string()).code, 2);
}

TEST(Cli, VerifyQuadric) {
  const auto r = run("verify-quadric --n 2 --samples 2000 --curves 5");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(r.json()["pass"].get<bool>());
}

TEST(Cli, CsvOutput) {
  const auto csv = scratch("analyze.csv");
  ASSERT_EQ(run("analyze clifford --samples 3 --csv " + csv.string()).code, 0);
  std::ifstream in(csv);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 4);
}
