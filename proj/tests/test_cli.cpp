#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kahler/cli.hpp"

using namespace kahler;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "kahler");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Clears the environment variables the CLI reads for the lifetime of a test.
struct CleanEnv {
  CleanEnv() {
    unsetenv("KAHLER_OUTPUT");
    unsetenv("KAHLER_SEED");
  }
  ~CleanEnv() {
    unsetenv("KAHLER_OUTPUT");
    unsetenv("KAHLER_SEED");
  }
};

}  // namespace

TEST_CASE("usage errors exit 2") {
  CleanEnv env;
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"verify-relations"}).code == kExitUsage);
  CHECK(run({"verify-relations", "--m", "0"}).code == kExitUsage);
  CHECK(run({"verify-relations", "--m", "2", "--tol", "-1"}).code == kExitUsage);
  CHECK(run({"torus", "--m", "1"}).code == kExitUsage);
  CHECK(run({"torus", "--m", "1", "--lambda-max", "0"}).code == kExitUsage);
  CHECK(run({"decompose-model", "--m", "2", "--format", "csv"}).code == kExitUsage);
  CHECK(run({"verify-relations", "--m", "2", "--format", "xml"}).code == kExitUsage);
  CHECK(run({"symbols", "--m", "2", "--p", "3", "--q", "0"}).code == kExitUsage);
  CHECK(run({"symbols", "--m", "2", "--p", "1"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("resource guard exits 3") {
  CleanEnv env;
  const auto r = run({"verify-relations", "--m", "6"});
  CHECK(r.code == kExitResource);
  CHECK(r.out.empty());
}

TEST_CASE("a tolerance below the resolution floor exits 1") {
  CleanEnv env;
  const auto r = run({"verify-relations", "--m", "3", "--tol", "1e-30"});
  CHECK(r.code == kExitInvariant);
  CHECK(r.err.find("FAILED") != std::string::npos);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["resolution_floor"].get<double>() > 1e-30);
}

TEST_CASE("verify-relations output") {
  CleanEnv env;
  const auto r = run({"verify-relations", "--m", "2"});
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["command"] == "verify-relations");
  CHECK(doc["all_pass"] == true);
  CHECK(doc["sign_ht_lt_star"]["sign"] == 1);
  CHECK(doc["sign_ht_q_correction"]["sign"] == -1);
  CHECK(r.out.back() == '\n');
}

TEST_CASE("decompose-model reports the multiplicity table") {
  CleanEnv env;
  const auto r = run({"decompose-model", "--m", "3"});
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["m_k"] == nlohmann::json{{"0", 5}, {"1", 4}, {"2", 1}});
  CHECK(doc["closed_form_m_k"] == doc["m_k"]);
  CHECK(doc["total_dim"] == 64);
  CHECK(doc["method_agreement"] == true);
  CHECK(doc["branching_pass"] == true);
}

TEST_CASE("torus csv") {
  CleanEnv env;
  const auto r = run({"torus", "--m", "1", "--lambda-max", "5", "--format", "csv"});
  REQUIRE(r.code == kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "lambda,N_cumulative,ratio_0,ratio_1");
  std::getline(lines, line);
  CHECK(line == "1,16,0.25,0");
  std::getline(lines, line);
  CHECK(line == "2,32,0.25,0");
  std::getline(lines, line);
  CHECK(line == "4,48,0.25,0");
  std::getline(lines, line);
  CHECK(line == "5,80,0.25,0");
  CHECK_FALSE(std::getline(lines, line));
}

TEST_CASE("torus json") {
  CleanEnv env;
  const auto r = run({"torus", "--m", "2", "--lambda-max", "3"});
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["harmonic_dim"] == 16);
  CHECK(doc["weyl"].is_null());
  CHECK(doc["records"].size() == 3);
  CHECK(doc["cesaro"]["ratio"]["1"].get<double>() == 1.0 / 16.0);
}

TEST_CASE("output file and environment precedence") {
  CleanEnv env;
  const auto dir = std::filesystem::temp_directory_path() / "kahler_cli_test";
  std::filesystem::create_directories(dir);
  const auto from_env = dir / "env.json";
  const auto from_flag = dir / "flag.json";
  std::filesystem::remove(from_env);
  std::filesystem::remove(from_flag);

  setenv("KAHLER_OUTPUT", from_env.c_str(), 1);
  auto r = run({"decompose-model", "--m", "1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.empty());
  CHECK(nlohmann::json::parse(slurp(from_env))["m"] == 1);

  r = run({"decompose-model", "--m", "2", "--output", from_flag.string()});
  CHECK(r.code == kExitOk);
  CHECK(nlohmann::json::parse(slurp(from_flag))["m"] == 2);
  CHECK(nlohmann::json::parse(slurp(from_env))["m"] == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("seed precedence") {
  CleanEnv env;
  auto seed_of = [](std::vector<std::string> args) {
    const auto r = run(std::move(args));
    REQUIRE(r.code == kExitOk);
    return nlohmann::json::parse(r.out)["seed"].get<std::uint64_t>();
  };
  const std::vector<std::string> base{"symbols", "--m", "1", "--check", "dirac"};
  CHECK(seed_of(base) == kDefaultSeed);
  setenv("KAHLER_SEED", "42", 1);
  CHECK(seed_of(base) == 42);
  auto flagged = base;
  flagged.insert(flagged.end(), {"--seed", "7"});
  CHECK(seed_of(flagged) == 7);
  setenv("KAHLER_SEED", "nope", 1);
  CHECK(run(base).code == kExitUsage);
}

TEST_CASE("symbols runs every family and is deterministic") {
  CleanEnv env;
  const auto a = run({"symbols", "--m", "2"});
  const auto b = run({"symbols", "--m", "2"});
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  const auto doc = nlohmann::json::parse(a.out);
  for (const char* key : {"projections", "pqk", "commutant", "dirac", "states"}) CHECK(doc.contains(key));
  const auto pqk = run({"symbols", "--m", "2", "--check", "pqk", "--p", "1", "--q", "1", "--k", "1"});
  CHECK(pqk.code == kExitOk);
}
