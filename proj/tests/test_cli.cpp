#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dynpat_cli_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(DYNPAT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::istringstream is(slurp(p));
  std::vector<std::string> out;
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::string config(const std::string& name) { return std::string(DYNPAT_CONFIG_DIR) + "/" + name; }

}  // namespace

TEST(Cli, GeneratePeriodicLattice) {
  const auto out = scratch("gen");
  ASSERT_EQ(run("generate --alpha 0 --out " + out.string()), 0);
  const auto rows = lines(out / "pattern.csv");
  ASSERT_EQ(rows.size(), 101u);
  EXPECT_EQ(rows[0], "n1,x");
  for (int n = 0; n < 100; ++n) EXPECT_EQ(rows[static_cast<std::size_t>(n + 1)], std::to_string(n) + "," + std::to_string(n));
  const auto side = nlohmann::json::parse(slurp(out / "generate.json"));
  EXPECT_EQ(side["config_hash"].get<std::string>().size(), 16u);
  EXPECT_TRUE(side.contains("truncation_error"));
  EXPECT_EQ(side["delone"]["r_min"].get<double>(), 1.0);
}

TEST(Cli, GenerateCutProject) {
  const auto out = scratch("gen_cp");
  ASSERT_EQ(run("generate --kind CutProject --alpha 0.3819660112501051 --out " + out.string()), 0);
  const auto rows = lines(out / "pattern.csv");
  ASSERT_GE(rows.size(), 7u);
  EXPECT_EQ(rows[0], "n1,x");
  EXPECT_EQ(rows[3], "2,2");
  EXPECT_EQ(rows[4], "3,2.618");
}

TEST(Cli, GeneratePlanarAndMatrixDump) {
  const auto out = scratch("gen_2d");
  ASSERT_EQ(run("generate --kind ExampleIII --alpha 1/3 --size-floor 9 --dump-matrix --out " + out.string()), 0);
  EXPECT_EQ(lines(out / "pattern.csv")[0], "n1,n2,x,y");
  EXPECT_EQ(lines(out / "matrix.csv")[0], "row,col,value");
}

TEST(Cli, ValidationFailuresExitOne) {
  const auto out = scratch("bad");
  EXPECT_EQ(run("generate --r 0.6 --out " + out.string()), 1);
  EXPECT_EQ(run("generate --kind Nope --out " + out.string()), 1);
  EXPECT_EQ(run("generate --config /nonexistent/config.json --out " + out.string()), 1);
  EXPECT_EQ(run("edge --alpha 0.3 --out " + out.string()), 1);
  EXPECT_EQ(run("butterfly --alpha 1/2 --size-floor 3 --out " + out.string() + " --bogus-flag"), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run(""), 1);
}

TEST(Cli, ButterflyDenominatorTwo) {
  const auto out = scratch("bf");
  ASSERT_EQ(run("butterfly --q-max 2 --size-floor 20 --omega-samples 2 --out " + out.string()), 0);
  const auto rows = lines(out / "butterfly.csv");
  EXPECT_EQ(rows[0], "alpha_num,alpha_den,omega_idx,eig_idx,energy");
  ASSERT_EQ(rows.size(), 1u + 2 * 2 * 20);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::string key = rows[i].substr(0, 4);
    EXPECT_TRUE(key == "0,1," || key == "1,2,") << rows[i];
  }
  EXPECT_EQ(lines(out / "gaps.csv")[0], "alpha_num,alpha_den,gap_lo,gap_hi,ids");
}

TEST(Cli, ByteIdenticalAcrossRunsAndParallelism) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  const auto c = scratch("det_c");
  const std::string common = "butterfly --q-max 6 --size-floor 30 --omega-samples 3 --seed 9 ";
  ASSERT_EQ(run(common + "--parallelism 1 --out " + a.string()), 0);
  ASSERT_EQ(run(common + "--parallelism 1 --out " + b.string()), 0);
  ASSERT_EQ(run(common + "--parallelism 3 --out " + c.string()), 0);
  for (const char* f : {"butterfly.csv", "gaps.csv"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(c / f)) << f;
  }
  const auto ja = nlohmann::json::parse(slurp(a / "butterfly.json"));
  const auto jc = nlohmann::json::parse(slurp(c / "butterfly.json"));
  EXPECT_EQ(ja["config_hash"], jc["config_hash"]);
}

TEST(Cli, LabelsFromConfig) {
  const auto out = scratch("labels");
  ASSERT_EQ(run("labels --config " + config("example_i_labels.json") + " --out " + out.string()), 0);
  const auto rows = lines(out / "labels.csv");
  ASSERT_GE(rows.size(), 2u);
  EXPECT_EQ(rows[0], "alpha1,gap_lo,gap_hi,ids,c_empty,c_12,residual,ambiguous,edge_predicted");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].rfind("21/34,", 0), 0u);
}

TEST(Cli, EdgeCoverageMonotoneInBundleSize) {
  const auto out = scratch("edge");
  ASSERT_EQ(run("edge --alpha 3/8 --cuts 1 4 8 --min-width 0.02 --out " + out.string()), 0);
  const auto rows = lines(out / "coverage.csv");
  EXPECT_EQ(rows[0], "gap_id,K,epsilon,coverage");
  EXPECT_EQ(lines(out / "edge.csv")[0], "cut_k,energy,localization,gap_id");
  std::map<int, double> last;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    int gid = 0;
    int k = 0;
    double eps = 0.0;
    double cov = 0.0;
    ASSERT_EQ(std::sscanf(rows[i].c_str(), "%d,%d,%lf,%lf", &gid, &k, &eps, &cov), 4);
    if (last.count(gid)) {
      EXPECT_GE(cov, last[gid]);
    }
    last[gid] = cov;
  }
}

TEST(Cli, EdgeSingleCutEqualsHalfSpaceRun) {
  const auto a = scratch("edge_k1");
  const auto b = scratch("edge_k13");
  ASSERT_EQ(run("edge --alpha 3/8 --cuts 1 --out " + a.string()), 0);
  ASSERT_EQ(run("edge --alpha 3/8 --cuts 1 3 --out " + b.string()), 0);
  // the K=1 rows of the larger run are the single-cut run
  std::vector<std::string> k1;
  for (const auto& row : lines(b / "edge.csv")) {
    if (row.rfind("0,", 0) == 0 || row.rfind("cut_k", 0) == 0) k1.push_back(row);
  }
  EXPECT_EQ(k1, lines(a / "edge.csv"));
}

TEST(Cli, HullStrobe) {
  const auto out = scratch("hull");
  ASSERT_EQ(run("hull --config " + config("example_i_hull.json") + " --out " + out.string()), 0);
  const auto rows = lines(out / "strobe.csv");
  EXPECT_EQ(rows[0], "i,s_1,s_2");
  EXPECT_EQ(rows.size(), 1u + 998u);
  EXPECT_EQ(run("hull --kind ExampleIII --alpha 0.3 --out " + out.string()), 1);
}

TEST(Cli, CheckPasses) {
  const auto out = scratch("check");
  ASSERT_EQ(run("check --out " + out.string()), 0);
  const auto side = nlohmann::json::parse(slurp(out / "check.json"));
  EXPECT_TRUE(side["passed"].get<bool>());
}

TEST(Cli, ShippedConfigsParse) {
  for (const auto& entry : fs::directory_iterator(DYNPAT_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const auto out = scratch("cfg_" + entry.path().stem().string());
    // generate is cheap for 1D kinds; 2D configs use their own windows
    EXPECT_EQ(run("generate --config " + entry.path().string() + " --out " + out.string()), 0) << entry.path();
  }
}
