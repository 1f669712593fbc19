#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(RATPOW_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(CliCount, Examples) {
  EXPECT_EQ(run("count --j 1 --k 2 --w 3").out, "11\n");
  EXPECT_EQ(run("count --j 1 --k 2 --w 0.5").out, "0\n");
  const auto r = run("count --j 1 --k 2 --w 3 --via-conv-exp");
  EXPECT_EQ(r.out, "11 11 OK\n");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(run("count --j 2 --k 3 --w 8").out, "229\n");
}

TEST(CliCount, Json) {
  const auto j = nlohmann::json::parse(run("count --w 5/2 --via-conv-exp --format json").out);
  EXPECT_EQ(j["w"], "5/2");
  EXPECT_EQ(j["S_exact"], j["S_via_conv_exp"]);
  EXPECT_TRUE(j["agree"].get<bool>());
}

TEST(CliCount, ConfigErrors) {
  EXPECT_EQ(run("count --j 1 --k 1 --w 3").status, 2);
  EXPECT_EQ(run("count --j 2 --k 4 --w 3").status, 2);
  EXPECT_EQ(run("count --w abc").status, 2);
  EXPECT_EQ(run("count --w -1").status, 2);
  EXPECT_EQ(run("count --w 40").status, 2);  // above the enumeration budget
  EXPECT_EQ(run("bogus").status, 2);
}

TEST(CliStaircase, GridMonotoneAndKnownRow) {
  const auto r = run("staircase --j 1 --k 2 --w-max 15 --step 0.1");
  ASSERT_EQ(r.status, 0);
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 152u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"w", "I_exact", "I_first", "I_center"}));
  double prev = -1;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double v = std::stod(rows[i][1]);
    ASSERT_GE(v, prev);
    prev = v;
  }
  EXPECT_EQ(rows[21][0], "2");
  EXPECT_EQ(rows[21][1], "3.25");
}

TEST(CliStaircase, ResidueColumn) {
  const std::string empty = temp_file("empty_zeros.txt", "# none\n");
  const auto r = run("staircase --w-max 5 --step 1/4 --height 50 --zeros-file " + empty);
  ASSERT_EQ(r.status, 0);
  const auto rows = csv(r.out);
  EXPECT_EQ(rows[0].back(), "I_residue");
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (std::stod(rows[i][0]) >= 1) {
      EXPECT_EQ(rows[i][4], rows[i][3]) << rows[i][0];
    }
  EXPECT_EQ(run("staircase --w-max 5 --height 50").status, 2);
  const auto full = run("staircase --w-max 5 --height 100 --zeros-file " RATPOW_DATA_DIR "/zeros100.txt");
  EXPECT_EQ(full.status, 0);
  EXPECT_EQ(csv(full.out)[0].size(), 5u);
}

TEST(CliStaircase, Deterministic) {
  const std::string args = "staircase --j 2 --k 3 --w-max 9 --step 1/8 --height 60 --zeros-file " RATPOW_DATA_DIR "/zeros100.txt";
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(CliEstimateS, WithinTenPercent) {
  const auto r = run("estimate-s --j 1 --k 2 --w-max 10 --row-step 1/2");
  ASSERT_EQ(r.status, 0);
  const auto rows = csv(r.out);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"w", "S_exact", "S_first", "S_center"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"0", "0", "0", "0"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double w = std::stod(rows[i][0]);
    if (w < 5) continue;
    const double exact = std::stod(rows[i][1]), center = std::stod(rows[i][3]);
    EXPECT_LE(std::abs(center - exact) / exact, 0.10) << "w=" << w;
  }
}

TEST(CliEstimateS, FirstOrderColumnMatchesSeries) {
  const auto rows = csv(run("estimate-s --w-max 6 --row-step 3/2").out);
  const double c = 2 * 1.2020569031595942854 / 1.6449340668482264365;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double w = std::stod(rows[i][0]);
    double sum = 0, term = 1;
    for (int m = 1; m < 60; ++m) {
      term *= c * w * w / (m * (2.0 * m - 1) * (2.0 * m));
      sum += term;
    }
    EXPECT_NEAR(std::stod(rows[i][2]), sum, 1e-10 * std::max(1.0, sum)) << w;
  }
}

TEST(CliEstimateS, MarkerAboveBudgetAndHybrid) {
  const auto rows = csv(run("estimate-s --w-max 12 --row-step 4 --budget 5000 --hybrid-w0 3").out);
  EXPECT_EQ(rows[0].back(), "S_hybrid");
  EXPECT_EQ(rows[2][1], "28");
  EXPECT_EQ(rows[3][1], "582");
  EXPECT_EQ(rows[4][1], "NA");
  const auto j = nlohmann::json::parse(run("estimate-s --w-max 12 --row-step 4 --budget 5000 --format json").out);
  EXPECT_TRUE(j[3]["S_exact"].is_null());
  EXPECT_EQ(j[2]["S_exact"], 582);
}

TEST(CliVerify, OnlyFilter) {
  const auto r = run("verify --only theorem1");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("PASS theorem1", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
  EXPECT_EQ(run("verify --only nonsense").status, 2);
}

TEST(CliVerify, CorruptedZerosFileFails) {
  const std::string bad = temp_file("bad_zeros.txt", "14.134725141734694\n20.5\n");
  const auto r = run("verify --only zeta --zeros-file " + bad);
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.out.rfind("FAIL zeta", 0), 0u);
}

TEST(CliVerify, DefaultRunPasses) {
  const auto r = run("verify");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 10);
  EXPECT_EQ(r.status, 0) << r.out;
}
