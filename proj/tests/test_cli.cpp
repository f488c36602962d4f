#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = BDN_CLI_PATH;

struct RunResult {
  int exit_code = -1;
};

// Runs the CLI with output discarded; tests inspect the files it writes.
RunResult run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bdn_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv_body(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("").exit_code == 2);
  CHECK(run("generate --kind sinusoidal --out /tmp").exit_code == 2);
  CHECK(run("generate --n 10 --out /tmp").exit_code == 2);         // missing kind
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("check --fault-inject bogus").exit_code == 2);
  CHECK(run("train --data /nope.csv --sweeps 5 --burnin 9 --out /tmp/x").exit_code == 2);
}

TEST_CASE("runtime errors exit with code 1") {
  const auto out = fresh_dir("runtime");
  CHECK(run("train --data /nonexistent.csv --out " + out.string()).exit_code == 1);
  CHECK(run("predict --checkpoint /nonexistent.json --data /also-no.csv --out " +
            out.string())
            .exit_code == 1);
}

TEST_CASE("generate writes a deterministic CSV and manifest") {
  const auto d1 = fresh_dir("gen1");
  const auto d2 = fresh_dir("gen2");
  CHECK(run("generate --kind heteroscedastic --n 500 --seed 4 --out " + d1.string())
            .exit_code == 0);
  CHECK(run("generate --kind heteroscedastic --n 500 --seed 4 --out " + d2.string())
            .exit_code == 0);
  CHECK(slurp(d1 / "heteroscedastic.csv") == slurp(d2 / "heteroscedastic.csv"));
  CHECK(slurp(d1 / "heteroscedastic.manifest.json") ==
        slurp(d2 / "heteroscedastic.manifest.json"));
  const json manifest = json::parse(slurp(d1 / "heteroscedastic.manifest.json"));
  CHECK(manifest.at("kind") == "heteroscedastic");
  CHECK(manifest.at("n") == 500);
  const auto rows = read_csv_body(d1 / "heteroscedastic.csv");
  CHECK(rows.size() == 500);
  CHECK(rows[0].size() == 2);
}

TEST_CASE("train, predict, and evaluate round trip through the filesystem") {
  const auto dir = fresh_dir("pipeline");
  REQUIRE(run("generate --kind heteroscedastic --n 200 --seed 9 --out " + dir.string())
              .exit_code == 0);
  const std::string train_common =
      " --hidden 4,4 --sweeps 11 --burnin 10 --thin 1 --seed 5 --pretrain-steps 100 ";

  SUBCASE("minimal sweep budget retains exactly one draw") {
    const auto out = dir / "run";
    REQUIRE(run("train --data " + (dir / "heteroscedastic.csv").string() + train_common +
                "--out " + out.string())
                .exit_code == 0);
    const json ckpt = json::parse(slurp(out / "checkpoint.json"));
    CHECK(ckpt.at("draws").size() == 1);
    CHECK(ckpt.at("log_joint").size() == 1);
    CHECK(fs::exists(out / "sweeps.csv"));
    CHECK(fs::exists(out / "effective_config.toml"));
    const auto sweeps = read_csv_body(out / "sweeps.csv");
    CHECK(sweeps.size() == 11);

    // predict: R=1, M=1 gives one draw per point; summary stats match draws.
    const auto pout = dir / "pred";
    REQUIRE(run("predict --checkpoint " + (out / "checkpoint.json").string() + " --data " +
                (dir / "heteroscedastic.csv").string() +
                " --quantiles 0.1,0.5,0.9 --write-draws --realizations 1 --out " +
                pout.string())
                .exit_code == 1);  // data has a target column too many
    REQUIRE(run("predict --checkpoint " + (out / "checkpoint.json").string() + " --data " +
                (out / "grid.csv").string() + " --out " + pout.string())
                .exit_code == 1);  // missing feature file
    // Build a feature-only CSV from the test split.
    {
      std::ofstream grid(out / "grid.csv");
      grid << "x\n";
      for (int i = 0; i <= 20; ++i) grid << (-1.0 + 0.1 * i) << "\n";
    }
    REQUIRE(run("predict --checkpoint " + (out / "checkpoint.json").string() + " --data " +
                (out / "grid.csv").string() +
                " --quantiles 0.1,0.5,0.9 --write-draws --realizations 1 --out " +
                pout.string())
                .exit_code == 0);
    const auto summary = read_csv_body(pout / "summary.csv");
    const auto draws = read_csv_body(pout / "draws.csv");
    REQUIRE(summary.size() == 21);
    CHECK(draws.size() == 21);  // one retained draw x one realization per point
    for (const auto& row : summary) {
      // columns: point, mean, sd, q0.1, q0.5, q0.9
      REQUIRE(row.size() == 6);
      CHECK(row[3] <= row[4]);
      CHECK(row[4] <= row[5]);
    }
    // With a single draw the summary mean equals that draw exactly.
    for (std::size_t i = 0; i < draws.size(); ++i) {
      CHECK(summary[i][1] == doctest::Approx(draws[i][2]).epsilon(1e-12));
    }

    // evaluate on the held-out split written by train.
    const auto eout = dir / "eval";
    REQUIRE(run("evaluate --checkpoint " + (out / "checkpoint.json").string() + " --data " +
                (out / "test.csv").string() + " --realizations 3 --out " + eout.string())
                .exit_code == 0);
    const json report = json::parse(slurp(eout / "report.json"));
    CHECK(report.at("rmse").get<double>() > 0.0);
    CHECK(report.contains("nll"));
    CHECK(!report.contains("quantile_l1"));
    CHECK(fs::exists(eout / "report.csv"));

    // quantile_l1 needs ground truth: plain CSV data is a usage error.
    CHECK(run("evaluate --checkpoint " + (out / "checkpoint.json").string() + " --data " +
              (out / "test.csv").string() + " --quantile-l1 --out " + eout.string())
              .exit_code == 2);
    // With the manifest it succeeds.
    REQUIRE(run("evaluate --checkpoint " + (out / "checkpoint.json").string() +
                " --from-manifest " + (dir / "heteroscedastic.manifest.json").string() +
                " --quantile-l1 --out " + eout.string())
                .exit_code == 0);
    const json report2 = json::parse(slurp(eout / "report.json"));
    CHECK(report2.at("quantile_l1").get<double>() > 0.0);
  }

  SUBCASE("training twice with one seed is byte-identical") {
    const auto a = dir / "runa";
    const auto b = dir / "runb";
    REQUIRE(run("train --data " + (dir / "heteroscedastic.csv").string() + train_common +
                "--out " + a.string())
                .exit_code == 0);
    REQUIRE(run("train --data " + (dir / "heteroscedastic.csv").string() + train_common +
                "--out " + b.string())
                .exit_code == 0);
    CHECK(slurp(a / "checkpoint.json") == slurp(b / "checkpoint.json"));
    CHECK(slurp(a / "train.csv") == slurp(b / "train.csv"));
  }
}

TEST_CASE("config file values are overridden by flags") {
  const auto dir = fresh_dir("config");
  REQUIRE(run("generate --kind skewed --n 120 --seed 2 --out " + dir.string()).exit_code == 0);
  {
    std::ofstream cfg(dir / "run.toml");
    cfg << "[train]\nsweeps=8\nburnin=5\nhidden=[3,3]\npretrain-steps=50\nseed=6\n";
  }
  const auto out1 = dir / "from_file";
  REQUIRE(run("--config " + (dir / "run.toml").string() + " train --data " +
              (dir / "skewed.csv").string() + " --out " + out1.string())
              .exit_code == 0);
  json ckpt = json::parse(slurp(out1 / "checkpoint.json"));
  CHECK(ckpt.at("gibbs").at("total_sweeps") == 8);
  CHECK(ckpt.at("draws").size() == 3);

  const auto out2 = dir / "overridden";
  REQUIRE(run("--config " + (dir / "run.toml").string() + " train --data " +
              (dir / "skewed.csv").string() + " --sweeps 7 --burnin 6 --out " + out2.string())
              .exit_code == 0);
  ckpt = json::parse(slurp(out2 / "checkpoint.json"));
  CHECK(ckpt.at("gibbs").at("total_sweeps") == 7);
  CHECK(ckpt.at("draws").size() == 1);
  // The effective config echoes the merged values.
  const std::string echoed = slurp(out2 / "effective_config.toml");
  CHECK(echoed.find("sweeps=7") != std::string::npos);
}

TEST_CASE("check subcommand exit codes") {
  CHECK(run("check --rounds 0").exit_code == 0);
  CHECK(run("check --rounds -3").exit_code == 2);
}
