#include <gtest/gtest.h>

#include <sstream>

#include <ldspec/suites.hpp>

using namespace ldspec;

namespace {

Report sample() {
  Report r;
  r.command = "sample";
  r.inputs = {{"s", 0.5}};
  r.add(check_abs("a", 1.0, 1.0, 1e-12, "identity"));
  r.add(check_rel("b, with comma", NAN, 2.0, 1e-3, "quote \"here\""));
  r.add(check_count("c", 3, 4, "counts"));
  return r;
}

}  // namespace

TEST(Report, JsonRoundTripIsByteIdentical) {
  const std::string text = serialize(sample());
  EXPECT_EQ(serialize(parse_report(text)), text);
}

TEST(Report, NonFiniteNumbersBecomeNull) {
  const nlohmann::json j = to_json(sample());
  EXPECT_TRUE(j["checks"][1]["measured"].is_null());
  EXPECT_FALSE(j["checks"][1]["status"] == "pass");
  EXPECT_TRUE(std::isnan(parse_report(serialize(sample())).checks[1].measured));
}

TEST(Report, SummaryCounts) {
  const nlohmann::json j = to_json(sample());
  EXPECT_EQ(j["schema"], "ldspec/1");
  EXPECT_EQ(j["summary"]["total"], 3);
  EXPECT_EQ(j["summary"]["passed"], 1);
  EXPECT_EQ(j["summary"]["failed"], 2);
  EXPECT_FALSE(j.contains("result"));
}

TEST(Report, CsvColumnsAndQuoting) {
  std::ostringstream os;
  write_csv(os, sample());
  const std::string expect =
      "check,status,measured,expected,tol,ref\n"
      "a,pass,1.0,1.0,1e-12,identity\n"
      "\"b, with comma\",fail,,2.0,0.001,\"quote \"\"here\"\"\"\n"
      "c,fail,3.0,4.0,0.0,counts\n";
  EXPECT_EQ(os.str(), expect);
}

TEST(Report, MalformedInputIsAnInputError) {
  try {
    parse_report("{not json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Input);
  }
  EXPECT_THROW(parse_report(R"({"schema":"other/2"})"), Error);
}

TEST(Verify, CoreSuiteIsDeterministic) {
  const Report a = verify_suite("core", 1), b = verify_suite("core", 1);
  EXPECT_EQ(serialize(a), serialize(b));
  EXPECT_TRUE(a.all_pass());
  EXPECT_TRUE(std::is_sorted(a.checks.begin(), a.checks.end(),
                             [](const CheckRecord& x, const CheckRecord& y) { return x.name < y.name; }));
  EXPECT_EQ(serialize(a).find("wall_ms"), std::string::npos);
}

TEST(Verify, TimingAddsWallClock) {
  const Report a = verify_suite("core", 1, true);
  ASSERT_FALSE(a.checks.empty());
  EXPECT_TRUE(a.checks.front().wall_ms.has_value());
}

TEST(Verify, UnknownSuiteIsAUsageError) {
  try {
    verify_suite("nope", 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Usage);
  }
}
