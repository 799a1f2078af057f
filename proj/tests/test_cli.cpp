#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(LPGEOM_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// number after the last "= " on the line that starts with `label`
double value_after(const std::string& out, const std::string& label) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(label, 0) == 0) return std::stod(line.substr(line.rfind("= ") + 2));
  }
  ADD_FAILURE() << "no line starting with " << label << " in\n" << out;
  return NAN;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& out) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

const std::string kCube1 = R"('{"type":"cube","n":1}')";
const std::string kCube2 = R"('{"type":"cube","n":2}')";

}  // namespace

TEST(CliSupport, Examples) {
  auto r = run("support --body " + kCube1 + " --p 1 --y 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(value_after(r.out, "h_"), 0.161439, 1e-6);
  r = run("support --body " + kCube1 + " --p 1 --y 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(value_after(r.out, "h_"), 0.0, 1e-15);
  r = run("support --body " + kCube2 + " --p inf --y 1,1");
  EXPECT_NEAR(value_after(r.out, "h_"), 2.0, 1e-15);
}

TEST(CliSupport, ExitCodes) {
  EXPECT_EQ(run("support --body '{\"type\":' --p 1 --y 1").code, 2);
  EXPECT_EQ(run("support --body " + kCube1 + " --p -1 --y 1").code, 2);
  EXPECT_EQ(run("support --body " + kCube1 + " --p 1 --y 1,2").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(CliPolar, Examples) {
  auto r = run("polar --body " + kCube2 + " --p inf");
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(value_after(r.out, "|K^{o,p}|"), 2.0, 1e-9);
  r = run("polar --body " + kCube1 + " --p 1");
  EXPECT_NEAR(value_after(r.out, "|K^{o,p}|"), 4.934802, 1e-6);
  r = run("polar --body " + kCube2 + " --p inf --section e2,0");
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(value_after(r.out, "|K^{o,p} cap"), 2.0, 1e-9);
}

TEST(CliPolar, PreconditionAndTranslate) {
  const std::string off = R"('{"type":"vpoly","vertices":[[1,1],[2,1],[1,2]]}')";
  EXPECT_EQ(run("polar --body " + off + " --p 1").code, 3);
  EXPECT_EQ(run("polar --body " + off + " --p 1 --translate").code, 0);
}

TEST(CliPolar, Dump) {
  const auto path = std::filesystem::temp_directory_path() / "lpgeom_cli_dump.json";
  const auto r = run("polar --body " + kCube2 + " --p 2 --resolution 64 --dump " + path.string());
  EXPECT_EQ(r.code, 0);
  const auto text = slurp(path);
  EXPECT_NE(text.find("\"inner\""), std::string::npos);
  EXPECT_NE(text.find("\"outer\""), std::string::npos);
  std::filesystem::remove(path);
}

TEST(CliMahler, Examples) {
  auto r = run("mahler --body " + kCube2 + " --p inf");
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(value_after(r.out, "M_inf(K)"), 8.0, 1e-9);
  EXPECT_NEAR(value_after(r.out, "M_inf(B)"), std::numbers::pi * std::numbers::pi, 1e-9);
  EXPECT_NEAR(value_after(r.out, "ratio"), 8.0 / (std::numbers::pi * std::numbers::pi), 1e-9);
  r = run(R"(mahler --body '{"type":"ball","center":[0,0],"radius":3}' --p 2)");
  EXPECT_NEAR(value_after(r.out, "ratio"), 1.0, 1e-6);
}

TEST(CliMahler, SweepIsMonotone) {
  const auto r = run("mahler --body " + kCube2 + " --p-sweep 0.5,1,2,inf");
  EXPECT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0][0], "p");
  double prev = INFINITY;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 6u);
    const double m = std::stod(rows[i][1]);
    EXPECT_LE(m, prev);
    prev = m;
  }
}

TEST(CliShadow, SteinerPolarVolumePeaksAtHalf) {
  // centrally symmetric parallelogram, sheared along e2
  const auto sym = R"('{"type":"vpoly","vertices":[[-1,-0.6],[1,-0.2],[1,0.6],[-1,0.2]]}')";
  const auto r = run(std::string("shadow --body ") + sym + " --v 0,1 --p inf --t-grid 0,0.5,1 --quantity polarvol");
  EXPECT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0][1], "polarvol");
  const double v0 = std::stod(rows[1][1]), vh = std::stod(rows[2][1]), v1 = std::stod(rows[3][1]);
  EXPECT_GE(vh, v0);
  EXPECT_GE(vh, v1);
}

TEST(CliShadow, ConstSpeedSupportIsAffine) {
  const auto r = run("shadow --body " + kCube2 +
                     R"( --v 0,1 --speed '{"kind":"const","value":1}' --p 1 --t-grid 0:1:5 --quantity support --y 0.3,0.5)");
  EXPECT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 6u);
  const double h0 = std::stod(rows[1][1]);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double t = std::stod(rows[i][0]);
    EXPECT_NEAR(std::stod(rows[i][1]), h0 + 0.5 * t, 1e-9);
  }
}

TEST(CliShadow, OutsideValidityIsSkipped) {
  const auto r = run("shadow --body " + kCube2 +
                     R"( --v 0,1 --speed '{"kind":"pl","points":[[-1,0],[0,1],[1,0]]}' --t-grid -0.5,0,0.5 --quantity polarvol --p inf)");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(csv_rows(r.out).size(), 2u);
  EXPECT_EQ(run("shadow --body " + kCube2 + R"( --v 0,1 --speed '{"kind":"zzz"}')").code, 2);
}

TEST(CliVerify, FilterAndDeterminism) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "lpgeom_cli_a", b = dir / "lpgeom_cli_b";
  const std::string flags = "verify --checks santalo_p --dims 2 --instances 4 --quiet --out ";
  auto ra = run(flags + a.string());
  auto rb = run(flags + b.string());
  EXPECT_EQ(ra.code, 0);
  EXPECT_EQ(rb.code, 0);
  const auto csv = slurp(a.string() + ".csv");
  EXPECT_EQ(csv, slurp(b.string() + ".csv"));
  const auto rows = csv_rows(csv);
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][0], "santalo_p");
  EXPECT_NE(slurp(a.string() + ".json").find("\"manifest\""), std::string::npos);
  for (const auto& p : {a, b}) {
    std::filesystem::remove(p.string() + ".csv");
    std::filesystem::remove(p.string() + ".json");
  }
}

TEST(CliVerify, MalformedConfig) {
  const auto cfg = std::filesystem::temp_directory_path() / "lpgeom_cli_bad.json";
  std::ofstream(cfg) << R"({"dimensions":[2],"colour":"red"})";
  EXPECT_EQ(run("verify --config " + cfg.string()).code, 2);
  EXPECT_EQ(run("verify --checks no_such_check").code, 2);
  std::filesystem::remove(cfg);
}
