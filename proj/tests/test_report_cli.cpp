#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mmbarrier/cli.hpp"
#include "mmbarrier/error.hpp"
#include "mmbarrier/report.hpp"

using namespace mmbarrier;

namespace {

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> csv_field(const std::string& csv, std::size_t column) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> values;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    for (std::size_t c = 0; c <= column; ++c) std::getline(row, cell, ',');
    values.push_back(cell);
  }
  return values;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(Format, Fixed) {
  EXPECT_EQ(format_fixed(3.10394, 4), "3.1039");
  EXPECT_EQ(format_fixed(-1e-9, 6), "0.000000");
  EXPECT_EQ(format_fixed(std::nan(""), 3), "nan");
  EXPECT_EQ(format_fixed(1.0 / 0.0, 3), "inf");
}

TEST(Format, CsvLayout) {
  ReportRow row;
  row.id = "cw:6";
  row.p = 2.0;
  row.barrier = 3.1039361;
  row.theta = {0.1356, 0.4322, 0.4322};
  row.rank_mode = "registry";
  row.clamped = true;
  EXPECT_EQ(to_csv({row}),
            "id,p,kappa,barrier,theta1,theta2,theta3,rank_mode,clamped\n"
            "cw:6,2.000000,0.000000,3.103936,0.135600,0.432200,0.432200,registry,1\n");
  row.p.reset();
  EXPECT_EQ(csv_field(to_csv({row}), 1), std::vector<std::string>{""});
}

TEST(Format, TableAndJson) {
  ReportRow row;
  row.id = "6";
  row.barrier = 3.1039361;
  row.theta = {0.1356, 0.4322, 0.4322};
  row.rank_mode = "registry";
  const std::string table = to_table({row}, "q");
  EXPECT_NE(table.find("theta2=theta3"), std::string::npos);
  EXPECT_NE(table.find("3.1039"), std::string::npos);

  const auto j = nlohmann::json::parse(to_json({row, make_error_row("x", 1.0, 0.0, "boom")}));
  ASSERT_EQ(j.size(), 2u);
  EXPECT_DOUBLE_EQ(j[0]["barrier"].get<double>(), 3.1039361);
  EXPECT_TRUE(j[1]["barrier"].is_null());
  EXPECT_EQ(j[1]["error"], "boom");
}

TEST(Format, SvgIsSelfContained) {
  const std::string svg = to_svg({{0, 2}, {1, 2}, {2, 3}}, "a & b", "p", "barrier");
  EXPECT_TRUE(svg.starts_with("<svg"));
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("a &amp; b"), std::string::npos);
  EXPECT_EQ(svg.find("href"), std::string::npos);
}

TEST(Cli, TensorShow) {
  CliRun r = run({"tensor", "show", "cw:6", "--symmetry", "cw"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("support: 21\n"), std::string::npos);
  EXPECT_NE(r.out.find("orbits: 6\n"), std::string::npos);

  r = run({"tensor", "show", "diag:5"});
  EXPECT_NE(r.out.find("support: 5\n"), std::string::npos);
  EXPECT_NE(r.out.find("orbits: 5\n"), std::string::npos);

  r = run({"tensor", "show", "mm:2,2,2"});
  EXPECT_NE(r.out.find("support: 8\n"), std::string::npos);
}

TEST(Cli, CurveOnDiagonal) {
  const CliRun r = run({"barrier", "curve", "--tensor", "diag:2", "--p", "0:2:0.5"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(csv_field(r.out, 3),
            (std::vector<std::string>{"2.000000", "2.000000", "2.000000", "2.500000", "3.000000"}));
  const CliRun svg = run({"barrier", "curve", "--tensor", "diag:2", "--p-range", "0:2:0.5", "--format", "svg"});
  EXPECT_TRUE(svg.out.starts_with("<svg"));
}

TEST(Cli, OmegaAndAlpha) {
  CliRun r = run({"barrier", "omega", "--tensor", "cw:6", "--p", "2", "--rank", "8"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NEAR(std::stod(csv_field(r.out, 3).at(0)), 3.1038, 2e-3);
  EXPECT_EQ(csv_field(r.out, 7).at(0), "user");

  r = run({"barrier", "alpha", "--tensor", "cw:6"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NEAR(std::stod(csv_field(r.out, 3).at(0)), 0.543, 5e-3);
  EXPECT_EQ(csv_field(r.out, 7).at(0), "registry");
}

TEST(Cli, CsvIsDeterministic) {
  const std::vector<std::string> args{"barrier", "omega", "--tensor", "cw:3", "--tensor", "cw:4", "--p", "1.5"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, OracleCheck) {
  CliRun r = run({"oracle", "check", "--tensor", "diag:3", "--theta", "0.2,0.3,0.5"});
  EXPECT_EQ(r.status, 0) << r.out;
  r = run({"oracle", "check", "--tensor", "mm:2,2,1", "--theta", "0.6,0.1,0.3"});
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("closed form:"), std::string::npos);
  // A tolerance no grid can meet makes the check fail.
  r = run({"oracle", "check", "--tensor", "diag:3", "--grid-step", "0.5", "--max-diff", "1e-12"});
  EXPECT_EQ(r.status, 1);
  r = run({"oracle", "check", "--tensor", "cw:9", "--symmetry", "none"});
  EXPECT_EQ(r.status, 2);
}

TEST(Cli, ConfigFileAndOverride) {
  const auto cfg = temp_file("mmbarrier_test.cfg", "# run\ntensor = diag:2\np = 3\nformat = json\n");
  CliRun r = run({"barrier", "omega", "--config", cfg.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j[0]["barrier"].get<double>(), 4.0, 1e-9);

  r = run({"barrier", "omega", "--config", cfg.string(), "--p", "0.5"});
  ASSERT_EQ(r.status, 0) << r.err;
  j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j[0]["barrier"].get<double>(), 2.0, 1e-9);
  std::filesystem::remove(cfg);
}

TEST(Cli, ExpandConfigFlags) {
  const auto cfg = temp_file("mmbarrier_flags.cfg", "full-simplex = true\nkappa = 0.5\ntol = false\n");
  const auto args = expand_config({"barrier", "omega", "--config", cfg.string(), "--kappa=1"});
  EXPECT_EQ(args, (std::vector<std::string>{"barrier", "omega", "--kappa=1", "--full-simplex"}));
  std::filesystem::remove(cfg);
  EXPECT_THROW(expand_config({"--config", "/nonexistent/file"}), InvalidArgument);
}

TEST(Cli, TensorFile) {
  const auto doc = temp_file("mmbarrier_t.tensor", "dims 2 1 2\n0 0 0 1\n1 0 1 1\n");
  const CliRun r = run({"barrier", "omega", "--tensor", doc.string(), "--p", "1", "--rank", "2"});
  EXPECT_EQ(r.status, 0) << r.err;
  const CliRun missing = run({"barrier", "omega", "--tensor", doc.string(), "--p", "1"});
  EXPECT_EQ(missing.status, 2);
  EXPECT_NE(missing.err.find("--rank"), std::string::npos);
  std::filesystem::remove(doc);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).status, 2);
  EXPECT_EQ(run({"barrier", "omega", "--tensor", "cw:2"}).status, 2);
  EXPECT_EQ(run({"barrier", "omega", "--tensor", "cw:2", "--p", "x"}).status, 2);
  EXPECT_EQ(run({"barrier", "omega", "--tensor", "nope:1", "--p", "1"}).status, 2);
  EXPECT_EQ(run({"barrier", "omega", "--tensor", "cw:2", "--p", "1", "--bogus"}).status, 2);
  EXPECT_EQ(run({"barrier", "table1", "--rank", "3"}).status, 2);
  EXPECT_EQ(run({"barrier", "omega", "--help"}).status, 0);
}

TEST(Cli, ClampWarnsButSucceeds) {
  const CliRun r = run({"barrier", "omega", "--tensor", "diag:4", "--p", "1", "--rank", "2"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(csv_field(r.out, 8).at(0), "1");
  EXPECT_NE(r.err.find("clamped"), std::string::npos);
}

TEST(Cli, Mixed) {
  CliRun r = run({"barrier", "mixed", "--factor", "cw:6@1", "--p", "2"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(csv_field(r.out, 7).at(0), "heuristic");
  r = run({"barrier", "mixed", "--factor", "cw:6@1", "--p", "2", "--rank-mode", "user", "--rank", "8"});
  EXPECT_EQ(csv_field(r.out, 7).at(0), "user");
  EXPECT_EQ(run({"barrier", "mixed", "--factor", "cw:6", "--p", "2"}).status, 2);
  EXPECT_EQ(run({"barrier", "mixed", "--factor", "cw:6@1", "--p", "2", "--rank-mode", "user"}).status, 2);
}
