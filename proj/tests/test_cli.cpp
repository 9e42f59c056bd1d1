#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct CliResult {
  int code;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = std::string(LDSPEC_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(Cli, PeriodicBoundaryRule) {
  const CliResult r = run("membership --operator periodic --phi 3.14159265 --s 0.75 --function const");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], "ldspec/1");
  EXPECT_EQ(j["result"]["status"], "NonMember") << r.out;
}

TEST(Cli, MehlerKernel) {
  const CliResult r = run("mehler --t 0.5 --x 0.3 --y -0.2");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(nlohmann::json::parse(r.out)["summary"]["failed"], 0);
}

TEST(Cli, InterpolationSuiteAlias) { EXPECT_EQ(run("verify --suite interpolation --seed 42").code, 0); }

TEST(Cli, VerifyAllIsByteIdentical) {
  const CliResult a = run("verify --suite all --seed 7"), b = run("verify --suite all --seed 7");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("membership --operator halfline --alpha 1.0 --s 0.5 --function bump").code, 2);
  EXPECT_EQ(run("verify --suite nope").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}
