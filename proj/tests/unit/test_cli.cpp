#include <gtest/gtest.h>

#include <fstream>
#include <initializer_list>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "rovib/io.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using rovib::testing::scratch_dir;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"rovib"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = rovib::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::string without_run_specific(const std::string& text) {
  std::istringstream in(text);
  std::string line, kept;
  while (std::getline(in, line)) {
    if (line.starts_with("# created:") || line.find("\"created\":") != std::string::npos ||
        line.find("\"output_dir\":") != std::string::npos) {
      continue;
    }
    kept += line + "\n";
  }
  return kept;
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST(Cli, ConstantsJson) {
  const auto o = run({"constants", "N2_X", "--fitted-gamma-e", "--json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_NEAR(j["T_rovib_ps"].get<double>(), 960.173, 0.01);
  EXPECT_NEAR(j["T_rot_ps"].get<double>(), 8.3828, 1e-3);
}

TEST(Cli, BranchingDefault) {
  const auto o = run({"branching", "--json"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("4.616"), std::string::npos);
}

TEST(Cli, TraceWritesFilesAndIsReproducible) {
  const auto a = scratch_dir("cli_trace_a");
  const auto b = scratch_dir("cli_trace_b");
  for (const auto& dir : {a, b}) {
    const auto o = run({"trace", "-o", dir.string(), "--t0", "65", "--t1", "90", "--dt", "0.01"});
    ASSERT_EQ(o.code, 0) << o.err;
  }
  for (const char* name : {"trace.csv", "lines.csv", "ensemble.csv", "trace.gp", "trace.json"}) {
    ASSERT_TRUE(fs::exists(a / name)) << name;
    EXPECT_EQ(without_run_specific(slurp(a / name)), without_run_specific(slurp(b / name))) << name;
  }

  std::ifstream f(a / "trace.csv");
  const auto rec = rovib::read_trace_csv(f);
  EXPECT_EQ(rec.times.size(), 2501u);
  EXPECT_TRUE(rec.metadata.find("created").has_value());
  std::ostringstream again;
  rovib::write_trace_csv(again, rec);
  EXPECT_EQ(again.str(), slurp(a / "trace.csv"));

  const auto meta = nlohmann::json::parse(slurp(a / "trace.json"));
  EXPECT_EQ(meta["command"], "trace");
  EXPECT_EQ(meta["files"].size(), 5u);
  EXPECT_EQ(meta["config"]["grid"]["dt_ps"].get<double>(), 0.01);
}

TEST(Cli, RevivalsFromTraceFile) {
  const auto dir = scratch_dir("cli_revivals");
  ASSERT_EQ(run({"trace", "-o", dir.string(), "--q-only", "--no-decay", "--t1", "1000"}).code, 0);
  const auto o = run({"revivals", "-o", dir.string(), "--trace", (dir / "trace.csv").string(), "--json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_FALSE(j["entries"].empty());
}

TEST(Cli, SpectrumAndHusimi) {
  const auto dir = scratch_dir("cli_spec");
  ASSERT_EQ(run({"spectrum", "-o", dir.string(), "--chirp", "35000"}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "spectrum.csv"));
  EXPECT_TRUE(fs::exists(dir / "spectrum.gp"));
  const auto cfg = dir / "h.json";
  write_text(cfg, R"({"husimi": {"n_time": 32, "n_freq": 32}})");
  ASSERT_EQ(run({"husimi", "-c", cfg.string(), "-o", dir.string()}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "husimi.csv"));
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("cli_codes");
  EXPECT_EQ(run({"trace", "-o", dir.string(), "--dt", "-1"}).code, rovib::cli::kExitConfig);
  const auto cfg = dir / "bad.json";
  write_text(cfg, R"({"pump": {"centre_cm1": 12500}})");
  const auto bad = run({"trace", "-c", cfg.string(), "-o", dir.string()});
  EXPECT_EQ(bad.code, rovib::cli::kExitConfig);
  EXPECT_NE(bad.err.find("pump.centre_cm1"), std::string::npos);
  EXPECT_EQ(run({"nonsense"}).code, rovib::cli::kExitConfig);
  EXPECT_EQ(run({"fit", "-d", (dir / "missing.csv").string()}).code, rovib::cli::kExitConfig);

  const auto flat = dir / "flat.csv";
  std::string rows;
  for (int i = 0; i < 200; ++i) rows += std::to_string(i) + ",1\n";
  write_text(flat, rows);
  EXPECT_EQ(run({"fit", "-d", flat.string(), "-o", dir.string()}).code, rovib::cli::kExitNumerical);
}

TEST(Cli, SmallFit) {
  const auto dir = scratch_dir("cli_fit");
  ASSERT_EQ(run({"trace", "-o", dir.string(), "--t1", "100", "--dt", "0.1", "--tau-c", "150"}).code, 0);
  const auto o = run({"fit", "-d", (dir / "trace.csv").string(), "-o", dir.string(), "--free", "tau_c,scale",
                      "--init", "tau_c=100", "--restarts", "1", "--profile", "tau_c=120:180:3"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(slurp(dir / "fit_result.json"));
  EXPECT_NEAR(j["values"]["tau_c"].get<double>(), 150.0, 0.5);
  EXPECT_TRUE(fs::exists(dir / "fit_model.csv"));
  EXPECT_TRUE(fs::exists(dir / "profile.csv"));
}
