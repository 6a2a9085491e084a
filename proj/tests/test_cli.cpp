#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <pcfgn/fgn.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("pcfgn_cli_") + info->name() + "_" +
                                        std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  RunResult run(const std::string& args) const {
    const fs::path o = dir_ / "stdout.txt";
    const fs::path e = dir_ / "stderr.txt";
    const std::string cmd = std::string("\"") + PCFGN_CLI_PATH + "\" " + args + " > \"" + o.string() + "\" 2> \"" +
                            e.string() + "\"";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(o);
    r.err = slurp(e);
    return r;
  }

  std::string out_flag(const std::string& sub) const { return "--out \"" + (dir_ / sub).string() + "\" "; }

  fs::path write(const std::string& name, const std::string& content) const {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

  fs::path fgn_csv(const std::string& name, double hurst, std::size_t n, std::uint64_t seed,
                   double slope = 0.0) const {
    const auto y = pcfgn::fgn_sample({hurst, 1.0}, n, seed);
    std::ostringstream os;
    os.precision(17);
    os << "year,value\n";
    for (std::size_t t = 0; t < n; ++t) os << 1900 + t << ',' << y[t] + slope * static_cast<double>(t + 1) << '\n';
    return write(name, os.str());
  }

  std::map<std::string, std::string> meta(const std::string& sub, const std::string& kind) const {
    std::map<std::string, std::string> m;
    std::istringstream in(slurp(dir_ / sub / ("prior_" + kind + "_meta.txt")));
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) m[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return m;
  }

  static std::vector<std::vector<double>> read_csv(const fs::path& p) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::vector<double> row;
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
      rows.push_back(row);
    }
    return rows;
  }

  fs::path dir_;
};

double trapezoid(const std::vector<std::vector<double>>& rows, std::size_t x, std::size_t y) {
  double s = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    s += 0.5 * (rows[i][x] - rows[i - 1][x]) * (rows[i][y] + rows[i - 1][y]);
  }
  return s;
}

}  // namespace

TEST_F(CliTest, HelpExitsCleanly) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST_F(CliTest, PriorFgnWritesCalibratedRate) {
  const auto r = run(out_flag("p") + "prior fgn");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = meta("p", "fgn");
  EXPECT_NEAR(std::stod(m.at("lambda")), 1.70, 0.01);
  EXPECT_EQ(m.at("u"), "0.9");
  EXPECT_EQ(m.at("alpha"), "0.1");
  const auto rows = read_csv(dir_ / "p" / "prior_fgn.csv");
  ASSERT_EQ(rows.size(), 2002u);
  // the base point appears twice, once with each one-sided limit
  EXPECT_EQ(rows[1000][0], 0.5);
  EXPECT_EQ(rows[1001][0], 0.5);
  EXPECT_GT(rows[1000][1], rows[1001][1]);
  EXPECT_NEAR(trapezoid(rows, 0, 1), std::stod(m.at("mass_on_grid")), 2e-4);
  const auto dist = read_csv(dir_ / "p" / "prior_fgn_distance.csv");
  ASSERT_GT(dist.size(), 100u);
  for (const auto& row : dist) {
    ASSERT_EQ(row.size(), 3u);
    // the lower branch ends at H = 0.5 with distance -0
    if (std::signbit(row[0])) {
      EXPECT_LE(row[2], 0.5);
    } else {
      EXPECT_GE(row[2], 0.5);
    }
  }
}

TEST_F(CliTest, PriorPrecisionRate) {
  const auto r = run(out_flag("p") + "prior precision");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(meta("p", "precision").at("lambda")), 4.6052, 5e-5);
  const auto sigma = read_csv(dir_ / "p" / "prior_precision_distance.csv");
  EXPECT_NEAR(trapezoid(sigma, 0, 1), 1.0, 1e-4);
}

TEST_F(CliTest, PriorAr1IntegratesToOne) {
  const auto r = run(out_flag("p") + "prior ar1");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = meta("p", "ar1");
  EXPECT_NEAR(std::stod(m.at("lambda")), 1.70, 0.01);
  const auto rows = read_csv(dir_ / "p" / "prior_ar1.csv");
  EXPECT_NEAR(trapezoid(rows, 0, 1), 1.0, 1e-4);
}

TEST_F(CliTest, PriorExplicitRateAndBadKind) {
  ASSERT_EQ(run(out_flag("p") + "prior ar1 --rate 2.5").code, 0);
  EXPECT_EQ(meta("p", "ar1").at("lambda"), "2.5");
  const auto r = run(out_flag("p") + "prior beta");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error:", 0), 0u) << r.err;
}

TEST_F(CliTest, ValidationFailuresExitTwo) {
  for (const std::string args : {"--alpha 0.7 prior fgn", "--u 0.4 prior fgn", "--prec-alpha 0 prior precision",
                                 "--trend quadratic prior fgn", "--bogus 1 prior fgn", "prior",
                                 "simulate --replicates 0", "simulate --hurst 1.2 --replicates 1"}) {
    const auto r = run(out_flag("v") + args);
    EXPECT_EQ(r.code, 2) << args << "\n" << r.err;
    EXPECT_EQ(r.err.rfind("error:", 0), 0u) << args << "\n" << r.err;
  }
  const auto r = run(out_flag("v") + "--alpha 0.7 prior fgn");
  EXPECT_NE(r.err.find("'alpha'"), std::string::npos) << r.err;
}

TEST_F(CliTest, IngestionErrorsNameTheRow) {
  write("gap.csv", "t,y\n1,0.1\n2,0.3\n3,-0.2\n4,0.5\n6,0.1\n7,0.0\n8,0.2\n9,0.4\n10,-0.1\n11,0.3\n");
  auto r = run(out_flag("f") + "compare \"" + (dir_ / "gap.csv").string() + "\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error: row 5 (line 6): irregular spacing"), std::string::npos) << r.err;

  write("short.csv", "t,y\n1,0.1\n2,0.3\n3,-0.2\n");
  r = run(out_flag("f") + "fit \"" + (dir_ / "short.csv").string() + "\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("at least 10"), std::string::npos) << r.err;

  r = run(out_flag("f") + "fit \"" + (dir_ / "missing.csv").string() + "\"");
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, NumericalFailureExitsThreeWithHint) {
  std::ostringstream os;
  os << "t,y\n";
  for (int i = 0; i < 20; ++i) os << i << ',' << (i % 2 ? "1e200" : "-1e200") << '\n';
  write("huge.csv", os.str());
  const auto r = run(out_flag("f") + "compare \"" + (dir_ / "huge.csv").string() + "\"");
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_EQ(r.err.rfind("error:", 0), 0u) << r.err;
  EXPECT_NE(r.err.find("hint: rescale"), std::string::npos) << r.err;
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  write("run.ini", "# shared settings\nalpha = 0.15\nu = 0.9\n");
  const std::string cfg = "--config \"" + (dir_ / "run.ini").string() + "\" ";
  ASSERT_EQ(run(cfg + out_flag("a") + "prior fgn").code, 0);
  EXPECT_NEAR(std::stod(meta("a", "fgn").at("lambda")), 1.27, 0.01);
  ASSERT_EQ(run(cfg + "--alpha 0.2 " + out_flag("b") + "prior fgn").code, 0);
  EXPECT_NEAR(std::stod(meta("b", "fgn").at("lambda")), 0.97, 0.01);

  write("bad.ini", "alpha = 0.15\ncolour = blue\n");
  const auto r = run("--config \"" + (dir_ / "bad.ini").string() + "\" " + out_flag("c") + "prior fgn");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("colour"), std::string::npos) << r.err;

  write("range.ini", "prec-alpha = 0.9\n");
  const auto q = run("--config \"" + (dir_ / "range.ini").string() + "\" " + out_flag("c") + "prior precision");
  EXPECT_EQ(q.code, 2);
  EXPECT_NE(q.err.find("'prec-alpha'"), std::string::npos) << q.err;
}

TEST_F(CliTest, FitWritesSummaries) {
  const auto csv = fgn_csv("fgn.csv", 0.8, 300, 11);
  const auto r = run(out_flag("f") + "fit --model fgn \"" + csv.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(dir_ / "f" / "fit_fgn.json"));
  EXPECT_TRUE(j.at("centered").get<bool>());
  EXPECT_EQ(j.at("n").get<int>(), 300);
  const double h = j.at("fit").at("H").at("mean").get<double>();
  EXPECT_GT(h, 0.6);
  EXPECT_LT(h, 0.95);
  EXPECT_LT(j.at("fit").at("H").at("lower_2.5").get<double>(), h);
  EXPECT_TRUE(fs::exists(dir_ / "f" / "fit_fgn.txt"));
  EXPECT_NE(r.out.find("mean"), std::string::npos);
}

TEST_F(CliTest, CompareWithLinearTrend) {
  const auto csv = fgn_csv("trend.csv", 0.8, 200, 5, 0.01);
  const auto r = run("--trend linear " + out_flag("c") + "compare \"" + csv.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(slurp(dir_ / "c" / "compare.json"));
  EXPECT_FALSE(j.at("centered").get<bool>());
  EXPECT_EQ(j.at("fgn").at("beta").size(), 2u);
  EXPECT_EQ(j.at("ar1").at("beta").size(), 2u);
  const auto& bf = j.at("bayes_factor");
  EXPECT_NEAR(bf.at("log_bf").get<double>(),
              bf.at("log_ml_fgn").get<double>() - bf.at("log_ml_ar1").get<double>(), 1e-12);
  const std::string ev = bf.at("evidence").get<std::string>();
  EXPECT_TRUE(ev == "False" || ev == "No conclusion" || ev == "Positive" || ev == "Strong" ||
              ev == "Very strong")
      << ev;
  EXPECT_NE(r.out.find("beta1"), std::string::npos) << r.out;
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  const auto csv = fgn_csv("series.csv", 0.7, 120, 3);
  const std::vector<std::string> commands = {
      "prior fgn", "prior ar1", "prior precision", "compare \"" + csv.string() + "\"",
      "fit --model ar1 \"" + csv.string() + "\"",
      "--seed 9 simulate --hurst 0.8 --lengths 40,60 --replicates 3"};
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const std::string a = "r" + std::to_string(i) + "a";
    const std::string b = "r" + std::to_string(i) + "b";
    const auto ra = run(out_flag(a) + commands[i]);
    const auto rb = run("--threads 1 " + out_flag(b) + commands[i]);
    ASSERT_EQ(ra.code, 0) << commands[i] << "\n" << ra.err;
    ASSERT_EQ(rb.code, 0) << commands[i] << "\n" << rb.err;
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(dir_ / a)) {
      const auto other = dir_ / b / entry.path().filename();
      ASSERT_TRUE(fs::exists(other)) << other;
      EXPECT_EQ(slurp(entry.path()), slurp(other)) << commands[i] << " " << entry.path().filename();
      ++files;
    }
    EXPECT_GE(files, 2u) << commands[i];
  }
}

TEST_F(CliTest, SimulateWritesAllCells) {
  const auto r = run(out_flag("s") + "simulate --lengths 30 --replicates 2");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv(dir_ / "s" / "simulate_summary.csv");
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 10u);
    EXPECT_NEAR(row[3] + row[4] + row[5] + row[6] + row[7], 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(row[8], row[5] + row[6] + row[7]);
  }
  EXPECT_NE(slurp(dir_ / "s" / "simulate_table.txt").find("BF>3"), std::string::npos);
}
