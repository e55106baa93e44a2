#include "gridhorizon/cli.h"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "test_networks.h"

namespace gridhorizon {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spill(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Runs the installed executable with stdout captured and stderr discarded.
class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gridhorizon_cli_" + std::string(::testing::UnitTest::GetInstance()
                                                 ->current_test_info()
                                                 ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result Run(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt";
    const std::string cmd = std::string(GRIDHORIZON_CLI) + " " + args + " > " + out.string() +
                            " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    return r;
  }

  std::string Write(const std::string& name, const std::string& text) {
    Spill(dir_ / name, text);
    return (dir_ / name).string();
  }

  fs::path dir_;
};

std::string Fixture(const std::string& file) {
  return std::string(GRIDHORIZON_DATA_DIR) + "/ieee34/" + file;
}

TEST_F(CliTest, NoLoadPowerFlowIsFlat) {
  // Without line charging an unloaded feeder sits exactly at the slack phasors.
  const std::string net = Write("net.json", testing::TwoBusDocument().dump());
  Result r = Run("pf --network " + net);
  ASSERT_EQ(r.code, cli::kExitOk);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "quantity,element,phase,re,im,magnitude");
  int voltages = 0;
  while (std::getline(in, line)) {
    if (line.rfind("voltage,", 0) != 0) continue;
    ++voltages;
    EXPECT_NEAR(std::stod(line.substr(line.rfind(',') + 1)), 1.0, 1e-15) << line;
  }
  EXPECT_EQ(voltages, 6);
}

TEST_F(CliTest, PowerFlowOutputMatchesLibrary) {
  const nlohmann::json doc = testing::TwoBusDocument(0.01, 0.02);
  const std::string net = Write("net.json", doc.dump());
  const std::string table = "id,phase,p,q\nd2,abc,0.06,0.03\nd2,a,0.03,0.01\n";
  const std::string inj = Write("inj.csv", table);
  Result r = Run("pf --network " + net + " --injections " + inj);
  ASSERT_EQ(r.code, cli::kExitOk);

  NetworkModel model = LoadNetwork(doc);
  std::istringstream in(table);
  PowerFlowInput input = cli::ParseInjections(in, model);
  // A later row for the same phase replaces the earlier value.
  EXPECT_DOUBLE_EQ(input.load_p[0][0], 0.03);
  EXPECT_DOUBLE_EQ(input.load_p[0][1], 0.02);
  EXPECT_DOUBLE_EQ(input.load_q[0][2], 0.01);
  EXPECT_EQ(r.out, cli::FormatPowerFlow(model, SolvePowerFlow(model, input)));
}

TEST_F(CliTest, InputErrorsExitOne) {
  const std::string net = Write("net.json", testing::TwoBusDocument().dump());
  EXPECT_EQ(Run("pf --network " + net + " --injections " +
                Write("bad.csv", "id,phase,p,q\nload,a,zero,0\n"))
                .code,
            cli::kExitInput);
  EXPECT_EQ(Run("pf --network " + net + " --injections " +
                Write("who.csv", "id,phase,p,q\nnobody,a,1,0\n"))
                .code,
            cli::kExitInput);
  EXPECT_EQ(Run("pf --network " + (dir_ / "missing.json").string()).code, cli::kExitInput);
  EXPECT_EQ(Run("pf --network " + Write("broken.json", "{\"buses\": [")).code, cli::kExitInput);
}

TEST_F(CliTest, DivergentPowerFlowExitsTwo) {
  const std::string net = Write("net.json", testing::TwoBusDocument(0.1, 0.1).dump());
  const std::string inj = Write("inj.csv", "id,phase,p,q\nd2,abc,150,0\n");
  EXPECT_EQ(Run("pf --network " + net + " --injections " + inj).code, cli::kExitNumerical);
}

TEST_F(CliTest, UsageErrorsExitSixtyFour) {
  const std::string common = " --network " + Fixture("network.json") + " --profiles " +
                             Fixture("profiles.csv") + " --out " + (dir_ / "o").string();
  EXPECT_EQ(Run("").code, cli::kExitUsage);
  EXPECT_EQ(Run("frobnicate").code, cli::kExitUsage);
  EXPECT_EQ(Run("run --bogus" + common).code, cli::kExitUsage);
  EXPECT_EQ(Run("compare --policies myopic" + common).code, cli::kExitUsage);
  EXPECT_EQ(Run("sweep --tw-grid '' --beta-grid 1" + common).code, cli::kExitUsage);
  EXPECT_EQ(Run("sweep --tw-grid 1,2" + common).code, cli::kExitUsage);
}

TEST_F(CliTest, NullEconomyRunCostsNothingAndRepeats) {
  testing::MicrogridParts parts;
  parts.battery = false;
  parts.q_min_var = 0.0;
  const nlohmann::json doc = testing::MicrogridDocument(parts);
  NetworkModel model = LoadNetwork(doc);
  const int horizon = 4;
  const std::string net = Write("net.json", doc.dump());
  const std::string prof = Write("prof.csv", FormatProfiles(testing::ZeroProfiles(model, horizon), model));
  const std::string args = "run --policy myopic --seeds 3 --network " + net + " --profiles " + prof;

  ASSERT_EQ(Run(args + " --out " + (dir_ / "a").string()).code, cli::kExitOk);
  ASSERT_EQ(Run(args + " --out " + (dir_ / "b").string()).code, cli::kExitOk);
  const nlohmann::json summary = nlohmann::json::parse(Slurp(dir_ / "a" / "summary.json"));
  // Dispatch can sit inside the interior-point tolerance of its zero bound.
  const double slack = horizon * model.devices[model.FindDevice("dg")].cost * 1e-8;
  EXPECT_GE(summary["mean_cost"].get<double>(), 0.0);
  EXPECT_LE(summary["mean_cost"].get<double>(), slack);
  EXPECT_EQ(summary["violation_rate"].get<double>(), 0.0);

  const std::string trace = "trace_myopic_seed3.csv";
  EXPECT_EQ(Slurp(dir_ / "a" / trace), Slurp(dir_ / "b" / trace));
  EXPECT_NE(Slurp(dir_ / "a" / trace).find("# realization_digest:"), std::string::npos);

  Result rep = Run("report --in " + (dir_ / "a").string());
  ASSERT_EQ(rep.code, cli::kExitOk);
  EXPECT_EQ(rep.out.rfind("policy,runs,mean_cost,stdev_cost,violation_rate,worst_violation\n", 0),
            0u);
  EXPECT_NE(rep.out.find("\nmyopic,1,"), std::string::npos);
}

TEST_F(CliTest, SweepWritesOneRowPerCell) {
  const nlohmann::json doc = testing::MicrogridDocument();
  NetworkModel model = LoadNetwork(doc);
  const std::string net = Write("net.json", doc.dump());
  const std::string prof = Write("prof.csv", FormatProfiles(testing::DailyProfiles(model, 6), model));
  const fs::path out = dir_ / "s";
  Result r = Run("sweep --tw-grid 1,3 --beta-grid 0.997 --seeds 1 --network " + net +
                 " --profiles " + prof + " --out " + out.string());
  ASSERT_EQ(r.code, cli::kExitOk);
  std::istringstream in(Slurp(out / "sweep.csv"));
  std::string line;
  int rows = 0;
  std::getline(in, line);
  EXPECT_EQ(line, "window,beta,runs,mean_cost,stdev_cost");
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST_F(CliTest, ConfigFileIsOverriddenByFlags) {
  const nlohmann::json doc = testing::MicrogridDocument();
  NetworkModel model = LoadNetwork(doc);
  const std::string net = Write("net.json", doc.dump());
  const std::string prof = Write("prof.csv", FormatProfiles(testing::DailyProfiles(model, 4), model));
  nlohmann::json cfg = {{"network", net},      {"profiles", prof},
                        {"policy", "myopic"}, {"seeds", "2"},
                        {"out", (dir_ / "cfg").string()}};
  const std::string path = Write("cfg.json", cfg.dump());
  ASSERT_EQ(Run("run --config " + path).code, cli::kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "cfg" / "trace_myopic_seed2.csv"));
  ASSERT_EQ(Run("run --config " + path + " --seeds 5").code, cli::kExitOk);
  EXPECT_TRUE(fs::exists(dir_ / "cfg" / "trace_myopic_seed5.csv"));
}

TEST(ParseListsTest, SeedRangesAndLists) {
  EXPECT_EQ(cli::ParseSeeds("1-3,10"), (std::vector<uint64_t>{1, 2, 3, 10}));
  EXPECT_EQ(cli::ParseSeeds("7"), (std::vector<uint64_t>{7}));
  EXPECT_THROW(cli::ParseSeeds("3-1"), std::invalid_argument);
  EXPECT_THROW(cli::ParseSeeds(""), std::invalid_argument);
  EXPECT_EQ(cli::ParseIntList("1,2,5,11"), (std::vector<int>{1, 2, 5, 11}));
  EXPECT_EQ(cli::ParseDoubleList("0.9,1"), (std::vector<double>{0.9, 1.0}));
}

}  // namespace
}  // namespace gridhorizon
