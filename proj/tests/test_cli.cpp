#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "hitchin_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

CliRun run(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = std::string(HITCHIN_CLI) + " " + args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

/// Data rows of a CSV written by the tool, split on commas; the comment and
/// header lines are checked and dropped.
std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  EXPECT_TRUE(std::getline(in, line));
  EXPECT_EQ(line.rfind("# config_hash=", 0), 0u) << p;
  EXPECT_TRUE(std::getline(in, line));
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

double summary_value(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + "=");
  if (pos == std::string::npos) return NAN;
  return std::stod(text.substr(pos + key.size() + 1));
}

std::string generators_of(const fs::path& p) {
  const std::string s = slurp(p);
  const auto a = s.find("\"generators\"");
  const auto b = s.find("\"meta\"");
  return s.substr(a, b - a);
}

const fs::path& fuchsian_rep() {
  static const fs::path p = [] {
    const fs::path f = scratch() / "fuchsian.json";
    EXPECT_EQ(run("build-rep --kind fuchsian --out " + f.string()).code, 0);
    return f;
  }();
  return p;
}

const fs::path& bent_rep() {
  static const fs::path p = [] {
    const fs::path f = scratch() / "bent.json";
    EXPECT_EQ(run("build-rep --kind bent --eps 0.1 --direction 1,0,0,-1 --out " + f.string()).code, 0);
    return f;
  }();
  return p;
}

}  // namespace

TEST(BuildRep, FuchsianFileAndResidual) {
  const fs::path f = scratch() / "f2.json";
  const CliRun r = run("build-rep --kind fuchsian --out " + f.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(slurp(f).find("\"rank\": 4"), std::string::npos);
  EXPECT_LT(summary_value(r.out, "relator_residual"), 1e-8);
}

TEST(BuildRep, ZeroBendMatchesFuchsian) {
  const fs::path f = scratch() / "b0.json";
  EXPECT_EQ(run("build-rep --kind bent --eps 0 --out " + f.string()).code, 0);
  EXPECT_EQ(generators_of(f), generators_of(fuchsian_rep()));
}

TEST(BuildRep, NonzeroDirectionSumFails) {
  const CliRun r = run("build-rep --kind bent --eps 0.1 --direction 1,1,1,1 --out " + (scratch() / "x.json").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("BadDirection"), std::string::npos);
}

TEST(Leaves, FuchsianMatrixIsSmall) {
  const fs::path out = scratch() / "leaves_f";
  ASSERT_EQ(run("leaves --rep " + fuchsian_rep().string() + " --max-len 4 --out " + out.string()).code, 0);
  const auto rows = read_csv(out / "leaf_distances.csv");
  ASSERT_EQ(rows.size(), 8u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      if (i != j) EXPECT_LT(std::stod(rows[i][3 + j]), 1e-6);
    }
  }
  for (int k = 0; k < 8; ++k) {
    EXPECT_GT(read_csv(out / ("leaf_" + std::to_string(k) + ".csv")).size(), 100u);
    EXPECT_TRUE(fs::exists(out / ("leaf_" + std::to_string(k) + ".svg")));
  }
  EXPECT_FALSE(read_csv(out / "flags.csv").empty());
}

TEST(Leaves, BentMatrixIsFinite) {
  const fs::path out = scratch() / "leaves_b";
  ASSERT_EQ(run("leaves --rep " + bent_rep().string() + " --max-len 4 --out " + out.string()).code, 0);
  double worst = 0.0;
  for (const auto& row : read_csv(out / "leaf_distances.csv")) {
    for (std::size_t j = 3; j < row.size(); ++j) {
      EXPECT_TRUE(std::isfinite(std::stod(row[j])));
      worst = std::max(worst, std::stod(row[j]));
    }
  }
  EXPECT_GT(worst, 1e-6);
}

TEST(Leaves, MissingRepFails) {
  EXPECT_EQ(run("leaves --rep " + (scratch() / "nope.json").string() + " --out " + (scratch() / "x").string()).code,
            1);
}

TEST(Spectra, FuchsianResidualsVanish) {
  const fs::path out = scratch() / "spectra_f";
  const CliRun r = run("spectra --rep " + fuchsian_rep().string() + " --max-len 4 --out " + out.string());
  ASSERT_EQ(r.code, 0);
  const auto rows = read_csv(out / "spectra.csv");
  EXPECT_EQ(rows.size(), 3200u);
  for (const auto& row : rows) EXPECT_LT(std::abs(std::stod(row[5])), 1e-8) << row[0];
  EXPECT_EQ(summary_value(r.out, "cone_rank"), 1.0);
  EXPECT_TRUE(fs::exists(out / "cone.svg"));
  EXPECT_EQ(read_csv(out / "cone.csv").size(), 3200u);
}

TEST(Spectra, BentSummaryShowsDivergence) {
  const CliRun r = run("spectra --rep " + bent_rep().string() + " --max-len 4 --out " + (scratch() / "spectra_b").string());
  ASSERT_EQ(r.code, 0);
  EXPECT_GT(summary_value(r.out, "max_eq1_normalized"), 1e-3);
  EXPECT_GE(summary_value(r.out, "cone_rank"), 2.0);
}

TEST(Spectra, GuardRefusesLengthNine) {
  const CliRun r = run("spectra --max-len 9 --out " + (scratch() / "s9").string());
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("ResourceLimit"), std::string::npos);
  EXPECT_FALSE(fs::exists(scratch() / "s9"));
}

TEST(Spectra, OutputIsDeterministic) {
  const fs::path a = scratch() / "det_a", b = scratch() / "det_b";
  ASSERT_EQ(run("spectra --rep " + bent_rep().string() + " --max-len 3 --seed 5 --out " + a.string()).code, 0);
  ASSERT_EQ(run("spectra --rep " + bent_rep().string() + " --max-len 3 --seed 5 --out " + b.string()).code, 0);
  for (const char* f : {"spectra.csv", "cone.csv", "cone.svg"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(ModelFit, FuchsianA1) {
  const fs::path out = scratch() / "model_f";
  ASSERT_EQ(run("model-fit --rep " + fuchsian_rep().string() + " --word a1 --out " + out.string()).code, 0);
  const auto rows = read_csv(out / "model_fit.csv");
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    EXPECT_NEAR(std::stod(row[2]), 2.0, 1e-8);
    EXPECT_NEAR(std::stod(row[3]), 2.0, 0.1);
  }
}

TEST(ModelFit, IdentityWordFails) {
  EXPECT_EQ(run("model-fit --word e --out " + (scratch() / "model_e").string()).code, 1);
}

TEST(ModelFit, BentScanReportsMismatch) {
  const fs::path out = scratch() / "model_b";
  const CliRun r = run("model-fit --rep " + bent_rep().string() + " --scan --out " + out.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_GT(read_csv(out / "model_scan.csv").size(), 3000u);
  EXPECT_GT(summary_value(r.out, "max_mismatch"), 1e-3);
}

TEST(Benzecri, DefaultSequenceConverges) {
  const fs::path out = scratch() / "benz";
  ASSERT_EQ(run("benzecri-demo --out " + out.string()).code, 0);
  const auto rows = read_csv(out / "benzecri.csv");
  ASSERT_EQ(rows.size(), 21u);
  for (std::size_t k = 3; k < rows.size(); ++k) EXPECT_LE(std::stod(rows[k][1]), std::stod(rows[k - 1][1]));
  EXPECT_LT(std::stod(rows.back()[1]), 1e-3);
  EXPECT_TRUE(fs::exists(out / "benzecri.svg"));
}

TEST(Benzecri, ZeroIterationsAndIdentity) {
  const fs::path a = scratch() / "benz0", b = scratch() / "benz_id";
  ASSERT_EQ(run("benzecri-demo --iterations 0 --out " + a.string()).code, 0);
  const auto one = read_csv(a / "benzecri.csv");
  ASSERT_EQ(one.size(), 1u);
  EXPECT_GT(std::stod(one[0][1]), 0.0);
  ASSERT_EQ(run("benzecri-demo --exponent 0 --iterations 4 --out " + b.string()).code, 0);
  const auto flat = read_csv(b / "benzecri.csv");
  for (const auto& row : flat) EXPECT_EQ(row[1], flat[0][1]);
}

TEST(Config, FileValuesAndCommandLineOverride) {
  const fs::path cfg = scratch() / "config.json";
  const fs::path out = scratch() / "from_config";
  std::ofstream(cfg) << "{\"max_len\": 2, \"out\": \"" << out.string() << "\"}";
  ASSERT_EQ(run("spectra --config " + cfg.string()).code, 0);
  EXPECT_EQ(read_csv(out / "spectra.csv").size(), 64u);
  ASSERT_EQ(run("spectra --config " + cfg.string() + " --max-len 1").code, 0);
  EXPECT_EQ(read_csv(out / "spectra.csv").size(), 8u);
}

TEST(Usage, BadInvocationsExitTwo) {
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("leaves --samples 4").code, 2);
  EXPECT_EQ(run("leaves --max-len").code, 2);
  const fs::path cfg = scratch() / "bad.json";
  std::ofstream(cfg) << "{\"tolerances\": {\"eigen\": -1}}";
  EXPECT_EQ(run("spectra --config " + cfg.string()).code, 2);
  EXPECT_EQ(run("leaves --config " + (scratch() / "missing.json").string()).code, 2);
}
