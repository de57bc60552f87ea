#include <gtest/gtest.h>

#include <filesystem>

#include "mfh/error.hpp"
#include "mfv/commands.hpp"
#include "mfv/fixture.hpp"
#include "support.hpp"

using namespace testing_support;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> fixture_files(bool negative) {
  std::vector<std::string> out;
  fs::path dir = fs::path(MFV_FIXTURE_DIR) / (negative ? "negative" : "");
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".json") continue;
    if (e.path().filename().string().rfind("liftings", 0) == 0) continue;
    out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

mfv::Report run(const std::string& cmd, const std::string& file, const std::string& sub = {}) {
  mfv::Options o;
  o.file = fixture_path(file);
  o.sub = sub;
  return mfv::run_command(cmd, o);
}

}  // namespace

TEST(Fixture, RenderParseIsIdentity) {
  for (bool neg : {false, true})
    for (const auto& f : fixture_files(neg)) {
      mfv::FixtureDocument d = mfv::load_fixture(f);
      mfv::FixtureDocument again = mfv::parse_fixture(mfv::render_fixture(d), f);
      EXPECT_EQ(d, again) << f;
      EXPECT_EQ(mfv::render_fixture(d), mfv::render_fixture(again)) << f;
    }
}

TEST(Fixture, SyntaxErrorCarriesLineAndColumn) {
  try {
    mfv::parse_fixture("{\n  \"format\": \"mfv1\",\n  \"p\": 5,,\n}", "x.json");
    FAIL();
  } catch (const mfh::Error& e) {
    EXPECT_EQ(e.kind(), mfh::ErrorKind::FixtureError);
    EXPECT_NE(std::string(e.what()).find("x.json:3:"), std::string::npos) << e.what();
  }
}

TEST(Fixture, SchemaErrorNamesKey) {
  try {
    mfv::parse_fixture(R"({"format": "mfv1", "id": "x", "p": "five", "m": 2, "n": 1, "charts": []})", "y");
    FAIL();
  } catch (const mfh::Error& e) {
    EXPECT_NE(std::string(e.what()).find("p"), std::string::npos) << e.what();
  }
  EXPECT_THROW(mfv::parse_fixture(R"({"format": "mfv9", "id": "x", "p": 5, "m": 2, "n": 1, "charts": []})"),
               mfh::Error);
}

TEST(Fixture, UnknownSubmoduleIsInputError) {
  mfv::Model m = load_model("kummer_p5.json");
  EXPECT_THROW(m.submodule("nope"), mfh::Error);
}

TEST(Fixture, WeightBoundEnforced) {
  // n = 4 > p - 2 at p = 5
  mfv::FixtureDocument d = mfv::load_fixture(fixture_path("kummer_p5.json"));
  d.n = 4;
  EXPECT_THROW(mfv::Model{d}, mfh::Error);
}

TEST(Cli, ValidateExitCodes) {
  for (const auto& f : fixture_files(false)) {
    mfv::Options o;
    o.file = f;
    EXPECT_EQ(mfv::run_command("validate", o).exit_code(), 0) << f;
  }
  for (const auto& f : fixture_files(true)) {
    mfv::Options o;
    o.file = f;
    EXPECT_EQ(mfv::run_command("validate", o).exit_code(), 1) << f;
  }
}

TEST(Cli, NegativeFixturesNameTheirViolation) {
  const std::map<std::string, std::string> expected = {
      {"kummer_bad_phi.json", "divisibility"},
      {"bad_horizontality.json", "horizontality"},
      {"tate_bad_strong.json", "strong_divisibility"},
      {"unit_root_bad_lifting.json", "frobenius_lifting"},
      {"griffiths_violation.json", "griffiths"},
      {"integrability_violation.json", "integrability"},
  };
  for (const auto& [file, check] : expected) {
    mfv::Report r = run("validate", "negative/" + file);
    const mfh::Check* c = r.checks.find(check);
    ASSERT_NE(c, nullptr) << file;
    EXPECT_EQ(c->status, mfh::Status::Fail) << file;
  }
}

TEST(Cli, AssociateWithComparison) {
  mfv::Options o;
  o.file = fixture_path("kummer_p5.json");
  o.sub = "G0";
  o.compare_lifting = "t^5 + 5*t^6";
  mfv::Report r = mfv::run_command("associate", o);
  EXPECT_EQ(r.exit_code(), 0);
  ASSERT_NE(r.checks.find("lifting_independence"), nullptr);
  ASSERT_NE(r.checks.find("residual_identity"), nullptr);
}

TEST(Cli, CorruptedCoverFailsAssociation) {
  EXPECT_EQ(run("associate", "negative/kummer_cover_corrupted.json", "G0").exit_code(), 1);
  EXPECT_EQ(run("associate", "kummer_cover.json", "G0").exit_code(), 0);
}

TEST(Cli, UnstableSubmoduleIsCheckFailure) {
  mfv::Report r = run("associate", "kummer_p5.json", "G1");
  EXPECT_EQ(r.exit_code(), 1);
}

TEST(Cli, WrongSpaceIsInputError) {
  try {
    run("associate", "kummer_p5.json", "W0");
    FAIL();
  } catch (const mfh::Error& e) {
    EXPECT_FALSE(mfv::is_check_failure(e.kind()));
  }
}

TEST(Cli, MachineReportIsDeterministic) {
  for (const char* cmd : {"validate", "pcurv"}) {
    mfv::Report a = run(cmd, "sym2_p5.json"), b = run(cmd, "sym2_p5.json");
    EXPECT_EQ(a.to_json(false), b.to_json(false));
  }
  mfv::Options o;
  o.file = fixture_path("kummer_p5.json");
  o.sub = "G0";
  o.random_liftings = 3;
  o.seed = 7;
  EXPECT_EQ(mfv::run_command("associate", o).to_json(false),
            mfv::run_command("associate", o).to_json(false));
}

TEST(Cli, ReportShape) {
  mfv::Report r = run("validate", "kummer_p5.json");
  std::string j = r.to_json(true);
  EXPECT_NE(j.find("\"format\": \"mfv1-report\""), std::string::npos);
  EXPECT_NE(j.find("\"wall_time_ms\""), std::string::npos);
  EXPECT_EQ(r.to_json(false).find("wall_time_ms"), std::string::npos);
  EXPECT_NE(r.to_text().find("6/6 checks passed"), std::string::npos);
}

TEST(Cli, MainEntryPoint) {
  std::string f = fixture_path("kummer_p5.json");
  std::string bad = fixture_path("negative/kummer_bad_phi.json");
  std::vector<std::string> ok_args{"mfv", "validate", f, "--no-timing"};
  std::vector<std::string> fail_args{"mfv", "validate", bad};
  std::vector<std::string> usage_args{"mfv", "frobnicate"};
  std::vector<std::string> missing_args{"mfv", "validate", "/nonexistent.json"};
  auto call = [](std::vector<std::string> args) {
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    testing::internal::CaptureStdout();
    testing::internal::CaptureStderr();
    int code = mfv::cli_main(static_cast<int>(argv.size()), argv.data());
    testing::internal::GetCapturedStdout();
    testing::internal::GetCapturedStderr();
    return code;
  };
  EXPECT_EQ(call(ok_args), 0);
  EXPECT_EQ(call(fail_args), 1);
  EXPECT_EQ(call(usage_args), 2);
  EXPECT_EQ(call(missing_args), 2);
}
