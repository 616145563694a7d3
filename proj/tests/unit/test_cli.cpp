#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "fisherp/errors.hpp"

namespace fisherp::cli {
namespace {

using nlohmann::json;

TEST(CliCommands, ComputeDivergentIsAValue) {
  const auto text = render_compute({DensityModel::gamma(5.0), {2, 3}, false, false, {}}, Format::Json);
  const json j = json::parse(text);
  const std::string dump = j.dump();
  EXPECT_NE(dump.find("\"divergent\""), std::string::npos);
  const auto csv = render_compute({DensityModel::gamma(5.0), {3}, false, false, {}}, Format::Csv);
  EXPECT_NE(csv.find("inf"), std::string::npos);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "quantity,p,l,value,error,status");
}

TEST(CliCommands, Deterministic) {
  const ComputeRequest request{DensityModel::logistic(), {1, 2}, true, true, {}};
  EXPECT_EQ(render_compute(request, Format::Json), render_compute(request, Format::Json));
  EXPECT_EQ(render_compute(request, Format::Md), render_compute(request, Format::Md));
}

TEST(CliCommands, HeaderOnlyTable) {
  const auto csv = render_table({"gamma", {}, {1, 2}, {}}, Format::Csv);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
  EXPECT_NE(csv.find("V12"), std::string::npos);
}

TEST(CliCommands, TableAgreesWithClosedForms) {
  const json j = json::parse(render_table({"normal", {2.0}, {1, 2}, {}}, Format::Json));
  const json& row = j.at("rows").at(0);
  EXPECT_DOUBLE_EQ(row.at("I1").at("closed").get<double>(), 0.25);
  EXPECT_DOUBLE_EQ(row.at("I2").at("closed").get<double>(), 2.0 / 16.0);
  EXPECT_LT(row.at("I2").at("rel_err").get<double>(), 1e-9);
  EXPECT_EQ(j.at("columns").at(1), "I1_closed");
}

TEST(CliCommands, ConfigParsing) {
  const auto c = config_from_json(json{{"rel_tol", 1e-6}});
  EXPECT_DOUBLE_EQ(c.rel_tol, 1e-6);
  EXPECT_DOUBLE_EQ(c.tail_mass_bound, 1e-7);
  EXPECT_THROW(config_from_json(json{{"tolerance", 1e-6}}), Error);
  EXPECT_THROW(config_from_json(json{{"rel_tol", -1.0}}), Error);
  EXPECT_EQ(config_from_json(config_to_json(c)).rel_tol, c.rel_tol);
  EXPECT_THROW(parse_format("xml"), InvalidArgument);
}

TEST(CliCommands, VerifyOutcome) {
  const json manifest = json::parse(
      R"({"checks":[{"name":"fisher_closed_form","params":{"density":{"family":"normal"},"p":2,"rel_tol":1e-7}}]})");
  const auto ok = run_verify(manifest, {}, Format::Csv);
  EXPECT_EQ(ok.exit_status, 0);
  EXPECT_NE(ok.report.find("fisher_closed_form"), std::string::npos);
  EXPECT_THROW(run_verify(json::parse(R"({"checks":[{"name":"nope"}]})"), {}, Format::Json), ManifestError);
}

class CliBinary : public ::testing::Test {
 protected:
  static int run(const std::string& args, std::string* out = nullptr) {
    const auto tmp = std::filesystem::temp_directory_path() / "fisherp_cli_test_out.txt";
    const std::string cmd = std::string("\"") + FISHERP_CLI_PATH + "\" " + args + " > \"" + tmp.string() + "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    if (out) {
      std::ifstream in(tmp);
      std::stringstream ss;
      ss << in.rdbuf();
      *out = ss.str();
    }
    std::filesystem::remove(tmp);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
};

TEST_F(CliBinary, ComputeSucceeds) {
  std::string out;
  EXPECT_EQ(run("compute --family gamma --n 10 --p 2", &out), 0);
  const json j = json::parse(out);
  EXPECT_NE(j.dump().find("0.0714285714"), std::string::npos);
}

TEST_F(CliBinary, ByteIdenticalReruns) {
  std::string a, b;
  ASSERT_EQ(run("compute --family logistic --p 1,2 --format csv", &a), 0);
  ASSERT_EQ(run("compute --family logistic --p 1,2 --format csv", &b), 0);
  EXPECT_EQ(a, b);
}

TEST_F(CliBinary, DivergenceIsNotAnError) {
  EXPECT_EQ(run("compute --family gamma --n 5 --p 3 --format csv"), 0);
}

TEST_F(CliBinary, ExitCodes) {
  const std::string data = FISHERP_TEST_DATA;
  EXPECT_EQ(run("verify --manifest \"" + data + "/negative_control.json\""), 1);
  EXPECT_EQ(run("verify --manifest /nonexistent/manifest.json"), 2);
  EXPECT_EQ(run("compute --density '{\"family\":\"gamma\",\"params\":{\"n\":-1}}'"), 2);
  EXPECT_EQ(run("compute --family cauchy"), 2);
  EXPECT_EQ(run("compute --family normal --format xml"), 2);
  EXPECT_EQ(run("no-such-command"), 2);
}

}  // namespace
}  // namespace fisherp::cli
