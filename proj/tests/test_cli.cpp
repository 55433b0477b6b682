#include <doctest.h>

#include <cstdio>
#include <iomanip>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "pivotal/penalties.hpp"
#include "pivotal/rng.hpp"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  std::string tag = "/tmp/pivotal_cli_" + std::to_string(counter++);
  std::string cmd = std::string(PIVOTAL_CLI_PATH) + " " + args + " >" + tag +
                    ".out 2>" + tag + ".err";
  int status = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = WEXITSTATUS(status);
  res.out = slurp(tag + ".out");
  res.err = slurp(tag + ".err");
  std::remove((tag + ".out").c_str());
  std::remove((tag + ".err").c_str());
  return res;
}

// Small deterministic dataset written once per process.
struct TestData {
  std::string design = "/tmp/pivotal_test_design.csv";
  std::string response = "/tmp/pivotal_test_response.csv";
  std::string signal = "/tmp/pivotal_test_signal.csv";
  std::string groups = "/tmp/pivotal_test_groups.csv";

  TestData() {
    pivotal::Rng rng(4242);
    std::ofstream x(design), y(response), g(groups);
    const int n = 24, p = 6;
    std::vector<double> beta{3.0, -2.0, 0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      double mean = 0.0;
      for (int j = 0; j < p; ++j) {
        double v = rng.normal();
        mean += beta[j] * v;
        x << v << (j + 1 < p ? "," : "\n");
      }
      y << mean + 0.5 * rng.normal() << "\n";
    }
    for (int j = 0; j < p; ++j) g << j / 2 << "\n";
    std::ofstream s(signal);
    for (int i = 0; i < 40; ++i) {
      s << (i < 20 ? 0.0 : 6.0) + 0.3 * rng.normal() << "\n";
    }
  }
};

const TestData& test_data() {
  static TestData data;
  return data;
}

}  // namespace

TEST_CASE("kstar prints the rule-of-thumb value") {
  CliResult res = run_cli("kstar --n 50 --p 5000");
  CHECK(res.exit_code == 0);
  CHECK(res.out == "3\n");
}

TEST_CASE("pen rows match the library solver") {
  CliResult res = run_cli("pen --n 40 --d 4 --delta 5");
  CHECK(res.exit_code == 0);
  double expected = pivotal::pen_delta_solve(40, 4, 5.0);
  std::ostringstream needle;
  needle << std::setprecision(17) << expected;
  CHECK(res.out.find(needle.str()) != std::string::npos);
}

TEST_CASE("every subcommand answers --help with exit 0") {
  for (const char* sub :
       {"kstar", "pen", "fit-lasso", "fit-sqrt-lasso", "fit-group-lasso",
        "refit-gauss", "select-linselect", "select-cv", "select-bic",
        "select-slope", "bench-oracle", "segment", "simulate"}) {
    CliResult res = run_cli(std::string(sub) + " --help");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("Usage") != std::string::npos);
  }
}

TEST_CASE("usage errors exit 2 with a machine-readable code") {
  CliResult res = run_cli("kstar --n 50 --p 5000 --bogus-flag 1");
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("\"error\"") != std::string::npos);
  CHECK(res.err.find("usage") != std::string::npos);

  CliResult missing = run_cli("fit-lasso --data /tmp/nonexistent.csv");
  CHECK(missing.exit_code == 2);  // no response specified
}

TEST_CASE("data errors exit 1 with a distinct code") {
  std::ofstream bad("/tmp/pivotal_bad.csv");
  bad << "1,2\n3,oops\n";
  bad.close();
  CliResult res = run_cli("fit-lasso --data /tmp/pivotal_bad.csv --response-col 0 --lambda 1");
  CHECK(res.exit_code == 1);
  CHECK(res.err.find("bad-data") != std::string::npos);

  // Dimension mismatch between design and response files.
  std::ofstream shorty("/tmp/pivotal_short.csv");
  for (int i = 0; i < 5; ++i) shorty << i << "\n";
  shorty.close();
  CliResult mism = run_cli("fit-lasso --data " + test_data().design +
                           " --response /tmp/pivotal_short.csv --lambda 1");
  CHECK(mism.exit_code == 1);
  CHECK(mism.err.find("bad-data") != std::string::npos);
}

TEST_CASE("a huge penalty produces the empty-support artifact") {
  const auto& td = test_data();
  CliResult res = run_cli("fit-lasso --data " + td.design + " --response " +
                          td.response + " --lambda 1e9");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("\"support\": []") != std::string::npos);
}

TEST_CASE("artifacts are byte-identical across reruns") {
  const auto& td = test_data();
  std::string base = "fit-lasso --data " + td.design + " --response " +
                     td.response + " --grid-size 20";
  CliResult a = run_cli(base + " --out /tmp/pivotal_a.json");
  CliResult b = run_cli(base + " --out /tmp/pivotal_b.json");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(slurp("/tmp/pivotal_a.json") == slurp("/tmp/pivotal_b.json"));
  CHECK(!slurp("/tmp/pivotal_a.json").empty());
}

TEST_CASE("fitting, refitting and selection chain through files") {
  const auto& td = test_data();
  CliResult path = run_cli("fit-lasso --data " + td.design + " --response " +
                           td.response +
                           " --grid-size 30 --out /tmp/pivotal_path.json");
  REQUIRE(path.exit_code == 0);

  CliResult select = run_cli("select-linselect --data " + td.design +
                             " --response " + td.response +
                             " --path /tmp/pivotal_path.json");
  CHECK(select.exit_code == 0);
  CHECK(select.out.find("\"chosen_lambda\"") != std::string::npos);

  CliResult refit = run_cli("refit-gauss --data " + td.design + " --response " +
                            td.response + " --support 0,1");
  CHECK(refit.exit_code == 0);
  CHECK(refit.out.find("\"rss\"") != std::string::npos);

  CliResult sqrt = run_cli("fit-sqrt-lasso --data " + td.design +
                           " --response " + td.response);
  CHECK(sqrt.exit_code == 0);
  CHECK(sqrt.out.find("\"sigma_hat\"") != std::string::npos);

  CliResult group = run_cli("fit-group-lasso --data " + td.design +
                            " --response " + td.response + " --groups " +
                            td.groups + " --lambda 2.0");
  CHECK(group.exit_code == 0);

  CliResult bench = run_cli("bench-oracle --data " + td.design + " --response " +
                            td.response + " --method bgh");
  CHECK(bench.exit_code == 0);
}

TEST_CASE("stochastic subcommands demand a seed") {
  const auto& td = test_data();
  CliResult res = run_cli("select-cv --data " + td.design + " --response " +
                          td.response + " --vfolds 4");
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("seed") != std::string::npos);

  CliResult ok = run_cli("select-cv --data " + td.design + " --response " +
                         td.response + " --vfolds 4 --seed 7 --grid-size 20");
  CHECK(ok.exit_code == 0);
}

TEST_CASE("segmentation subcommand handles each method") {
  const auto& td = test_data();
  for (const char* method : {"bgh", "lebarbier", "slope", "tv+linselect"}) {
    std::string extra = std::string(method) == "lebarbier" ? " --plugin-variance" : "";
    CliResult res = run_cli("segment --data " + td.signal + " --method " +
                            method + extra);
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("\"breakpoints\"") != std::string::npos);
  }
}

TEST_CASE("simulation artifacts are reproducible and worker independent") {
  std::ofstream cfg("/tmp/pivotal_sim_config.json");
  cfg << R"({"n": 24, "p": 10, "k": 2, "beta_magnitude": 2.5, "sigma": 1.0,
             "reps": 3, "grid_size": 25, "vfolds": 4})";
  cfg.close();
  std::string base = "simulate --experiment 1 --config /tmp/pivotal_sim_config.json --seed 5";
  CliResult a = run_cli(base + " --out /tmp/pivotal_sim_a.json");
  CliResult b = run_cli(base + " --out /tmp/pivotal_sim_b.json --workers 4");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(slurp("/tmp/pivotal_sim_a.json") == slurp("/tmp/pivotal_sim_b.json"));

  CliResult raw = run_cli(
      "simulate --experiment bic-demo --config /tmp/pivotal_sim_config.json "
      "--seed 5 --out /tmp/pivotal_sim_c.json --raw-csv /tmp/pivotal_sim_c.csv");
  CHECK(raw.exit_code == 0);
  CHECK(slurp("/tmp/pivotal_sim_c.csv").find("method,metric,rep,value") == 0);
}
