#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fvklab-cli-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = fvklab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("usage and validation errors") {
  CHECK(run({}).code == fvklab::cli::kValidationError);
  CHECK(run({"--help"}).code == fvklab::cli::kOk);
  CHECK(run({"bogus"}).code == fvklab::cli::kValidationError);
  TempDir t;
  const Result r = run({"relaxed", "--beta", "2", "--alpha-s", "1", "--out", t.path.string()});
  CHECK(r.code == fvklab::cli::kValidationError);
  CHECK(r.err.find("standing assumption") != std::string::npos);
  CHECK(run({"relaxed", "--h", "abc", "--out", t.path.string()}).code ==
        fvklab::cli::kValidationError);
  CHECK(run({"sweep", "--h-decades", "1e-3:1e-2:8", "--out", t.path.string()}).code ==
        fvklab::cli::kValidationError);
}

TEST_CASE("relaxed profile artifacts are reproducible") {
  TempDir t;
  const std::vector<std::string> args = {"relaxed", "--h", "1e-4", "--n-radial", "128",
                                         "--out", t.path.string()};
  REQUIRE(run(args).code == fvklab::cli::kOk);
  const std::string first = slurp(t.path / "relaxed.csv");
  CHECK(first.rfind("# fvklab", 0) == 0);
  const json m = json::parse(slurp(t.path / "manifest.json"));
  CHECK(m["outputs"].size() >= 2);
  REQUIRE(run(args).code == fvklab::cli::kOk);
  CHECK(slurp(t.path / "relaxed.csv") == first);
}

TEST_CASE("config file with flag overrides") {
  TempDir t;
  const fs::path cfg = t.path / "run.cfg";
  std::ofstream(cfg) << "h = 1e-2\nbeta = 1\nn_radial = 64\n";
  REQUIRE(run({"minimize", "--functional", "f0", "--config", cfg.string(), "--h", "1e-3", "--out",
               (t.path / "o").string()})
              .code == fvklab::cli::kOk);
  const std::string csv = slurp(t.path / "o" / "minimize_f0.csv");
  CHECK(csv.find("# config h = 0.001") != std::string::npos);
}

TEST_CASE("f0 sweep recovers the relaxed exponent") {
  TempDir t;
  const Result r = run({"sweep", "--mode", "f0-scaling", "--beta", "1", "--h-decades",
                        "1e-6:1e-2:8", "--jobs", "2", "--out", t.path.string()});
  REQUIRE(r.code == fvklab::cli::kOk);
  const json j = json::parse(slurp(t.path / "sweep.json"));
  CHECK(j["slope"].get<double>() == doctest::Approx(0.5).epsilon(0.02));
  CHECK(fs::exists(t.path / "sweep.svg"));

  const fs::path out2 = t.path / "refit";
  REQUIRE(run({"report", "--input", (t.path / "sweep.csv").string(), "--mode", "f0-scaling",
               "--out", out2.string()})
              .code == fvklab::cli::kOk);
  const json k = json::parse(slurp(out2 / "report.json"));
  CHECK(k["slope"].get<double>() == j["slope"].get<double>());
}

TEST_CASE("lemma certificates") {
  TempDir t;
  const Result r = run({"lemma-check", "--h", "1e-3", "--alpha-s", "1e-4", "--count", "3",
                        "--out", t.path.string()});
  CHECK(r.code == fvklab::cli::kOk);
  const json j = json::parse(slurp(t.path / "lemma_ws2.json"));
  CHECK(j["cases"].size() == 3);
  CHECK(j["failures"] == 0);
}
