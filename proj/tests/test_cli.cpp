#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gns/cli.hpp"
#include "gns/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

using namespace gns;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  std::vector<const char*> argv;
  argv.push_back("gns");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("gns-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const TempDir& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir.path / name;
  std::ofstream out(p);
  out << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kZeroConfig =
    "M = 6\n"
    "nu = 1.0\n"
    "a = 1.0\n"
    "sigma = 2.0\n"
    "dt = 0.005\n"
    "t_end = 0.05\n"
    "initial = random-divfree\n"
    "amplitude = 0\n"
    "seed = 3\n";

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("full round trip with comments") {
    const SimConfig c = parse_sim_config_text(
        "# experiment\n"
        "M = 8\n"
        "nu = 0.5\n"
        "a = 1.5\n"
        "sigma = 3\n"
        "dt = 0.001\n"
        "t_end = 2\n"
        "initial = taylor-green  # eight modes\n"
        "amplitude = 0.2\n"
        "seed = 11\n"
        "n_max = 2\n"
        "linearized = false\n",
        "inline");
    CHECK(c.M == 8);
    CHECK(c.nu == 0.5);
    CHECK(c.initial == InitialData::taylor_green);
    CHECK(c.n_max == 2);
  }

  SUBCASE("unknown keys are hard errors") {
    CHECK_THROWS(parse_sim_config_text("M = 6\namplitud = 1\n", "inline"));
  }
  SUBCASE("duplicate keys are hard errors") {
    CHECK_THROWS(parse_sim_config_text("M = 6\nM = 8\n", "inline"));
  }
  SUBCASE("bad values are hard errors") {
    CHECK_THROWS(parse_sim_config_text("M = six\n", "inline"));
    CHECK_THROWS(parse_sim_config_text("initial = vortex\n", "inline"));
    CHECK_THROWS(parse_sim_config_text("linearized = maybe\n", "inline"));
  }
}

TEST_CASE("lemma4-const subcommand prints the constant") {
  CHECK(run({"lemma4-const", "--a", "1", "--sigma", "4"}) == 0);
  CHECK(run({"lemma4-const", "--a", "-1", "--sigma", "4"}) == 1);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run({"simulate"}) == 1);              // missing required flags
  CHECK(run({"unknown-subcommand"}) == 1);
  TempDir dir;
  CHECK(run({"simulate", "--config", (dir.path / "absent.cfg").string(), "--out",
             (dir.path / "out").string()}) == 1);
}

TEST_CASE("simulate subcommand writes csv, summary and manifest") {
  TempDir dir;
  const fs::path cfg = write_config(dir, "run.cfg", kZeroConfig);
  const fs::path out = dir.path / "out";
  CHECK(run({"simulate", "--config", cfg.string(), "--out", out.string()}) == 0);
  CHECK(fs::exists(out / "series.csv"));
  CHECK(fs::exists(out / "summary.json"));
  CHECK(fs::exists(out / "manifest.json"));

  const std::string csv = slurp(out / "series.csv");
  CHECK(csv.rfind("t,z_m1,", 0) == 0);
  const std::string manifest = slurp(out / "manifest.json");
  CHECK(manifest.find("series.csv") != std::string::npos);
  CHECK(manifest.find("timestamp_unix_ms") != std::string::npos);

  SUBCASE("identical argv + config + seed reproduce the csv byte for byte") {
    const fs::path out2 = dir.path / "out2";
    CHECK(run({"simulate", "--config", cfg.string(), "--out", out2.string()}) == 0);
    CHECK(slurp(out2 / "series.csv") == csv);
    CHECK(slurp(out2 / "summary.json") == slurp(out / "summary.json"));

    // manifests agree on everything except the timestamp line
    auto strip_timestamp = [](const std::string& text) {
      std::string out_text;
      std::istringstream in(text);
      std::string line;
      while (std::getline(in, line)) {
        if (line.find("timestamp_unix_ms") == std::string::npos) out_text += line + "\n";
      }
      return out_text;
    };
    CHECK(strip_timestamp(slurp(out / "manifest.json")) ==
          strip_timestamp(slurp(out2 / "manifest.json")));
  }

  SUBCASE("the final snapshot feeds a restart through the snapshot selector") {
    REQUIRE(fs::exists(out / "final.gnsf"));
    const fs::path cfg2 = write_config(dir, "restart.cfg",
                                       std::string("M = 6\n"
                                                   "nu = 1.0\n"
                                                   "a = 1.0\n"
                                                   "sigma = 2.0\n"
                                                   "dt = 0.005\n"
                                                   "t_end = 0.02\n"
                                                   "initial = snapshot\n"
                                                   "snapshot_path = ") +
                                           (out / "final.gnsf").string() + "\n");
    const fs::path out3 = dir.path / "restart";
    CHECK(run({"simulate", "--config", cfg2.string(), "--out", out3.string()}) == 0);
    CHECK(fs::exists(out3 / "series.csv"));
  }
}

TEST_CASE("picard subcommand emits diagnostics") {
  TempDir dir;
  const fs::path cfg = write_config(dir, "run.cfg",
                                    "M = 6\n"
                                    "nu = 1.0\n"
                                    "a = 1.0\n"
                                    "sigma = 2.0\n"
                                    "dt = 0.01\n"
                                    "t_end = 0.1\n"
                                    "initial = random-divfree\n"
                                    "amplitude = 0.05\n"
                                    "seed = 5\n");
  const fs::path out = dir.path / "picard";
  CHECK(run({"picard", "--config", cfg.string(), "--out", out.string()}) == 0);
  const std::string diag = slurp(out / "diagnostics.json");
  CHECK(diag.find("\"converged\": true") != std::string::npos);
  CHECK(diag.find("contraction_ratios") != std::string::npos);
  CHECK(diag.find("I_norms") != std::string::npos);

  SUBCASE("infeasible data exits 2 and reports the constraint") {
    const fs::path cfg2 = write_config(dir, "big.cfg",
                                       "M = 6\n"
                                       "nu = 1.0\n"
                                       "a = 1.0\n"
                                       "sigma = 2.0\n"
                                       "dt = 0.01\n"
                                       "t_end = 0.1\n"
                                       "initial = random-divfree\n"
                                       "amplitude = 0.5\n"
                                       "seed = 5\n");
    const fs::path out2 = dir.path / "picard2";
    CHECK(run({"picard", "--config", cfg2.string(), "--out", out2.string()}) == 2);
    CHECK(slurp(out2 / "diagnostics.json").find("\"feasible\": false") != std::string::npos);
  }
}

TEST_CASE("verify subcommand") {
  TempDir dir;
  const fs::path out = dir.path / "verify";
  CHECK(run({"verify", "--lemma", "1", "--grid", "6", "--samples", "50", "--seed", "7", "--a",
             "1", "--sigma", "2", "--out", out.string()}) == 0);
  CHECK(fs::exists(out / "lemma1.json"));
  CHECK(slurp(out / "lemma1.json").find("\"pass\": true") != std::string::npos);

  CHECK(run({"verify", "--lemma", "9", "--out", (dir.path / "bad").string()}) == 1);
}

TEST_CASE("decay sweep aggregates across runs") {
  TempDir dir;
  const fs::path cfg = write_config(dir, "run.cfg", kZeroConfig);
  const fs::path out = dir.path / "sweep";
  CHECK(run({"decay", "--config", cfg.string(), "--sweep-amplitude", "0:0.1:3", "--jobs", "2",
             "--out", out.string()}) == 0);
  for (const char* name : {"run_000", "run_001", "run_002"}) {
    CHECK(fs::exists(out / name / "series.csv"));
    CHECK(fs::exists(out / name / "summary.json"));
  }
  const std::string agg = slurp(out / "aggregate.csv");
  CHECK(agg.rfind("amplitude,terminal_ratio,fitted_rate\n", 0) == 0);
  CHECK(std::count(agg.begin(), agg.end(), '\n') == 4);

  CHECK(run({"decay", "--config", cfg.string(), "--sweep-amplitude", "1:0:3", "--out",
             (dir.path / "bad").string()}) == 1);
}
