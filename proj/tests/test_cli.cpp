#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"

using namespace fsynth;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fsynth");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "fsynth_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, BoundsText) {
  const Outcome o = run_cli({"bounds", "--delta", "1e-6", "--R", "2", "--rho", "8"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("n*                    7"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("tau(rho)              0.6543"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("thm_rec.total"), std::string::npos);
}

TEST(Cli, BoundsJson) {
  const Outcome o = run_cli({"bounds", "--format", "json", "--m", "0"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j.at("n_star").get<int>(), 7);
  EXPECT_FALSE(j.contains("thm_rec"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"bounds", "--bogus", "1"}).code, 1);
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"bounds", "--format", "xml"}).code, 1);
  const Outcome hyp = run_cli({"bounds", "--rho", "7"});
  EXPECT_EQ(hyp.code, 2);
  EXPECT_NE(hyp.err.find("rho >= 4R/r"), std::string::npos);
  EXPECT_EQ(run_cli({"coeffs", "--in", (scratch_dir() / "absent.bin").string()}).code, 3);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, SampleCoeffsExtend) {
  const auto dir = scratch_dir();
  const std::string w = (dir / "w.bin").string();
  ASSERT_EQ(run_cli({"sample", "--suite", "indicator", "--r", "2", "--nodes", "32",
                     "--out", w}).code,
            0);
  const Outcome c = run_cli({"coeffs", "--in", w, "--n", "4"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(c.out.substr(0, c.out.find('\n')), "k1,re,im");
  EXPECT_EQ(std::count(c.out.begin(), c.out.end(), '\n'), 5);

  const std::string e = (dir / "e.csv").string();
  ASSERT_EQ(run_cli({"extend", "--in", w, "--R", "4", "--n", "12", "--points", "33",
                     "--out", e}).code,
            0);
  const FieldFile f = load_field(e);
  EXPECT_EQ(f.grid.points[0], 33u);
  EXPECT_EQ(f.grid.half_width[0], 4.0);
  EXPECT_EQ(run_cli({"extend", "--in", w, "--R", "4", "--n", "40", "--out", e}).code, 1);
}

TEST(Cli, TauZeroMatchesNaiveByteForByte) {
  const auto dir = scratch_dir();
  const std::string w = (dir / "bump.bin").string();
  ASSERT_EQ(run_cli({"sample", "--suite", "bump", "--r", "0.5", "--delta", "1e-9",
                     "--seed", "3", "--out", w}).code,
            0);
  const std::string a = (dir / "a.bin").string(), b = (dir / "b.bin").string();
  const std::vector<std::string> common{"--in", w, "--N", "0.01", "--sigma", "2",
                                        "--delta", "1e-8"};
  auto with = [&](std::vector<std::string> extra, const std::string& out) {
    std::vector<std::string> args{"reconstruct"};
    args.insert(args.end(), common.begin(), common.end());
    args.insert(args.end(), extra.begin(), extra.end());
    args.push_back("--out");
    args.push_back(out);
    return run_cli(args);
  };
  ASSERT_EQ(with({"--tau", "0"}, a).code, 0);
  ASSERT_EQ(with({"--naive"}, b).code, 0);
  EXPECT_EQ(read_file(a), read_file(b));

  EXPECT_EQ(with({"--tau", "zero"}, a).code, 1);
  const Outcome aut = with({"--tau", "auto", "--m", "1", "--gamma", "1"}, a);
  EXPECT_EQ(aut.code, 0) << aut.err;
  EXPECT_NE(aut.out.find("(suggested)"), std::string::npos);
}

TEST(Cli, ExperimentWritesCsvAndSummary) {
  const auto dir = scratch_dir();
  const auto cfg = dir / "e2.json";
  write_file(cfg, R"({"schema": 1, "experiment": "E2", "d": 1, "suite": "indicator",
    "r_values": [1], "deltas": [1e-5, 1e-7, 1e-9], "R_over_r": [2],
    "rho_over_R": [4], "nodes": 64, "noise": "worst", "seed": 11})");
  const auto outdir = dir / "out";
  const Outcome o = run_cli({"experiment", "--config", cfg.string(), "--out-dir",
                             outdir.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  const std::string csv = read_file(outdir / "e2.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "delta,tau,R,rho,n,measured,bound,ratio,hyp_ok");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(read_file(outdir / "e2_summary.txt"), o.out);
  EXPECT_NE(o.out.find("E2: rows=3"), std::string::npos);

  write_file(cfg, R"({"schema": 1, "experiment": "E2", "surprise": 0})");
  EXPECT_EQ(run_cli({"experiment", "--config", cfg.string()}).code, 1);
  EXPECT_EQ(run_cli({"experiment", "--config", (dir / "none.json").string()}).code, 3);
}
