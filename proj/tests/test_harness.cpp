#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "qelect/harness.hpp"

using namespace qelect;
using namespace qelect::harness;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("argument parsing fills defaults") {
  const auto outcome = parse_args({"election", "--voters", "5", "--seed",
                                   "42"});
  REQUIRE(outcome.config.has_value());
  CHECK(outcome.config->subcommand == "election");
  CHECK(outcome.config->n_voters == 5);
  CHECK(outcome.config->seed == 42);
  CHECK(outcome.config->l == 32);
  CHECK(outcome.config->m == 8);
  CHECK(outcome.config->n_candidates == 2);
}

TEST_CASE("conflicting dimensions are rejected with exit code 2") {
  const auto outcome = parse_args({"election", "--l", "2", "--m", "4"});
  CHECK(!outcome.config.has_value());
  CHECK(outcome.exit_code == kExitConfig);
  CHECK(outcome.message.find("l must exceed m") != std::string::npos);
}

TEST_CASE("unknown flags and missing subcommands fail") {
  CHECK(parse_args({"election", "--bogus", "1"}).exit_code == kExitConfig);
  CHECK(parse_args({}).exit_code == kExitConfig);
  CHECK(parse_args({"attack"}).exit_code == kExitConfig);  // --kind required
}

TEST_CASE("help is exit code 0") {
  const auto outcome = parse_args({"--help"});
  CHECK(outcome.exit_code == kExitOk);
  CHECK(!outcome.config.has_value());
  CHECK(outcome.message.find("Usage") != std::string::npos);
}

TEST_CASE("config file values load and flags override them") {
  TempDir dir("qelect_cfg_test");
  const auto cfg_path = dir.path / "run.ini";
  {
    std::ofstream out(cfg_path);
    out << "[election]\n"
        << "seed=9\n"
        << "voters=7\n";
  }
  const auto from_file =
      parse_args({"election", "--config", cfg_path.string()});
  REQUIRE(from_file.config.has_value());
  CHECK(from_file.config->seed == 9);
  CHECK(from_file.config->n_voters == 7);

  const auto overridden = parse_args(
      {"election", "--config", cfg_path.string(), "--seed", "1234"});
  REQUIRE(overridden.config.has_value());
  CHECK(overridden.config->seed == 1234);
  CHECK(overridden.config->n_voters == 7);

  SUBCASE("unknown config keys are rejected") {
    {
      std::ofstream out(cfg_path);
      out << "[election]\nvoters=7\nnonsense=1\n";
    }
    const auto bad = parse_args({"election", "--config", cfg_path.string()});
    CHECK(bad.exit_code == kExitConfig);
  }
}

TEST_CASE("stats csv renders a missing closed form as an empty field") {
  std::vector<adversary::Outcome> rows(2);
  rows[0].metric = "with_form";
  rows[0].estimate = 0.25;
  rows[0].std_error = 0.01;
  rows[0].closed_form = 0.25;
  rows[0].trials = 100;
  rows[1].metric = "without_form";
  rows[1].estimate = 0.5;
  rows[1].trials = 10;
  const std::string csv = stats_csv(rows);
  CHECK(csv.find("metric,estimate,stderr,closed_form,trials\n") == 0);
  CHECK(csv.find("with_form,0.25,0.01,0.25,100\n") != std::string::npos);
  CHECK(csv.find("without_form,0.5,0,,10\n") != std::string::npos);
}

TEST_CASE("identical configs and seeds write byte-identical artifacts") {
  TempDir dir_a("qelect_det_a");
  TempDir dir_b("qelect_det_b");
  RunConfig cfg;
  cfg.subcommand = "election";
  cfg.n_voters = 4;
  cfg.seed = 424242;
  cfg.l = 20;
  cfg.m = 2;
  cfg.ballot_bits = 2;
  cfg.verify_check_bits = 4;
  cfg.out_dir = dir_a.path.string();
  CHECK(run_subcommand(cfg) == kExitOk);
  cfg.out_dir = dir_b.path.string();
  CHECK(run_subcommand(cfg) == kExitOk);
  CHECK(read_file(dir_a.path / "transcript.jsonl") ==
        read_file(dir_b.path / "transcript.jsonl"));
  CHECK(read_file(dir_a.path / "stats.csv") ==
        read_file(dir_b.path / "stats.csv"));
  CHECK(!read_file(dir_a.path / "transcript.jsonl").empty());
}

TEST_CASE("subcommand runs produce their artifacts and exit codes") {
  TempDir dir("qelect_runs");
  RunConfig cfg;
  cfg.out_dir = dir.path.string();
  cfg.seed = 5;

  SUBCASE("density audit") {
    cfg.subcommand = "density-audit";
    cfg.l = 2;
    cfg.m = 2;
    CHECK(run_subcommand(cfg) == kExitOk);
    const std::string csv = read_file(dir.path / "stats.csv");
    CHECK(csv.find("density_outsider") != std::string::npos);
    CHECK(csv.find("density_counter_blockwise_m2") != std::string::npos);
  }
  SUBCASE("basic key distribution batch") {
    cfg.subcommand = "aqkd-basic";
    cfg.m = 16;
    cfg.sessions = 50;
    CHECK(run_subcommand(cfg) == kExitOk);
    CHECK(read_file(dir.path / "stats.csv").find("basic_keys_identical,1") !=
          std::string::npos);
  }
  SUBCASE("string key distribution batch") {
    cfg.subcommand = "aqkd-string";
    cfg.l = 8;
    cfg.m = 2;
    cfg.verify_check_bits = 2;
    cfg.sessions = 50;
    CHECK(run_subcommand(cfg) == kExitOk);
    CHECK(read_file(dir.path / "stats.csv").find("string_key_exact,1") !=
          std::string::npos);
  }
  SUBCASE("baseline") {
    cfg.subcommand = "baseline";
    cfg.n_voters = 3;
    CHECK(run_subcommand(cfg) == kExitOk);
    CHECK(read_file(dir.path / "stats.csv").find("baseline_completed,1") !=
          std::string::npos);
  }
  SUBCASE("an aborted election exits with the protocol-abort code") {
    cfg.subcommand = "election";
    cfg.n_voters = 3;
    cfg.l = 144;
    cfg.m = 2;
    cfg.ballot_bits = 8;
    cfg.verify_check_bits = 16;
    cfg.ecc_repeat = 3;
    cfg.loss_p = 0.9;  // nearly every session fails
    cfg.max_retries = 0;
    CHECK(run_subcommand(cfg) == kExitProtocolAbort);
    CHECK(read_file(dir.path / "stats.csv").find("election_completed,0") !=
          std::string::npos);
  }
}
