#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gaplab/cli_commands.hpp"
#include "gaplab/parallel.hpp"

using namespace gaplab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("gaplab_test_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args, const fs::path& log) {
  std::string cmd = std::string(GAPLAB_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool python_jsonschema_available() { return std::system("python3 -c 'import jsonschema' > /dev/null 2>&1") == 0; }

// Independent check with the reference Python implementation of JSON Schema.
bool python_validates(const fs::path& schema, const fs::path& doc) {
  std::string cmd = "python3 -c 'import json,sys,jsonschema; jsonschema.validate(json.load(open(sys.argv[2])), "
                    "json.load(open(sys.argv[1])))' " +
                    schema.string() + " " + doc.string() + " > /dev/null 2>&1";
  return std::system(cmd.c_str()) == 0;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(RunConfig::from_json(Json{{"paths", 0}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(Json{{"unknown_field", 1}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(Json{{"ball_radius", {-1.0}}}), ConfigError);
  RunConfig c = RunConfig::from_json(Json{{"scenario", "coin"}, {"n", 10}, {"paths", 3}, {"seed", 5}});
  CHECK(c.n == 10);
  CHECK(c.seed == 5u);
  RunConfig d = c;
  d.out = "elsewhere";
  d.threads = 7;
  CHECK(c.hash() == d.hash());
  d.seed = 6;
  CHECK(c.hash() != d.hash());
  RunConfig no_seed;
  CHECK_THROWS_AS(run_simulate(no_seed), ConfigError);
  RunConfig bad_h = c;
  bad_h.horizons = {5, 3};
  CHECK_THROWS_AS(bad_h.validate(), ConfigError);
}

TEST_CASE("schema validator agrees with hand-made cases") {
  Json s = Json::parse(R"({"type":"object","required":["a"],"additionalProperties":false,
    "properties":{"a":{"type":"integer","minimum":1},"b":{"type":["string","null"]},
                  "c":{"type":"array","minItems":1,"items":{"enum":[1,2]}}}})");
  CHECK(validate_schema(s, Json{{"a", 1}}).empty());
  CHECK(validate_schema(s, Json{{"a", 1}, {"b", nullptr}, {"c", {1, 2}}}).empty());
  CHECK(validate_schema(s, Json{{"a", 0}}).size() == 1);
  CHECK(validate_schema(s, Json{{"a", 1.5}}).size() == 1);
  CHECK(validate_schema(s, Json{{"b", "x"}}).size() == 1);
  CHECK(validate_schema(s, Json{{"a", 2}, {"z", 1}}).size() == 1);
  CHECK(validate_schema(s, Json{{"a", 2}, {"c", Json::array()}}).size() == 1);
  CHECK(validate_schema(s, Json{{"a", 2}, {"c", {3}}}).size() == 1);
  for (const char* name : {"run_config", "summary", "spectral_report", "verify_report"}) {
    CHECK(schema(name) == Json::parse(slurp(fs::path(GAPLAB_SCHEMA_DIR) / (std::string(name) + ".schema.json"))));
  }
}

TEST_CASE("in-process commands are deterministic across thread counts") {
  RunConfig c;
  c.scenario = "torus_sl2";
  c.n = 300;
  c.paths = 20;
  c.seed = 11;
  c.horizons = {10, 300};
  c.csv_paths = 2;
  c.centering_samples = 500;
  set_thread_count(1);
  CommandResult a = run_simulate(c);
  set_thread_count(4);
  CommandResult b = run_simulate(c);
  set_thread_count(0);
  CHECK(a.files == b.files);
  REQUIRE(a.files.count("summary.json") == 1);
  Json s = Json::parse(a.files["summary.json"]);
  CHECK(validate_schema(schema("summary"), s).empty());
  CHECK(s["config_hash"] == c.hash());
  CHECK(a.files["trajectory_0000.csv"].rfind("# gaplab " + tool_version() + " config_hash=" + c.hash(), 0) == 0);

  RunConfig inline_cfg = c;
  inline_cfg.scenario = Json{{"space", "torus"}, {"generators", {{{2, 1}, {1, 1}}, {{1, 1}, {1, 2}}}}};
  Json t = Json::parse(run_simulate(inline_cfg).files["summary.json"]);
  CHECK(t["endpoints"] == s["endpoints"]);
  inline_cfg.scenario = Json{{"space", "torus"}, {"generators", {{{2, 0}, {0, 1}}}}};
  CHECK_THROWS_AS(run_simulate(inline_cfg), ConfigError);
}

TEST_CASE("spectral command") {
  RunConfig c;
  c.scenario = "torus_sl2";
  c.seed = 3;
  c.ball_radius = {10.0, 20.0, 40.0};
  c.fourier_radius = 10.0;
  CommandResult r = run_spectral(c);
  CHECK(r.status == kExitOk);
  Json j = Json::parse(r.files["spectral.json"]);
  CHECK(validate_schema(schema("spectral_report"), j).empty());
  REQUIRE(j["dual_radius"].size() == 3);
  for (const auto& d : j["dual_radius"]) CHECK(d["value"].get<double>() < 1.0);
  const auto& k0 = j["k_lambda"][0];
  CHECK(k0["lambda"] == Json::array({0.0, 0.0}));
  CHECK(std::abs(k0["re"].get<double>() - 1.0) <= 1e-10);
  CHECK(std::abs(k0["im"].get<double>()) <= 1e-10);

  RunConfig s = c;
  s.scenario = "scenery_free_group";
  try {
    run_spectral(s);
    FAIL("expected UnsupportedFeature");
  } catch (const UnsupportedFeature& e) {
    CHECK(std::string(e.what()).find("unsupported feature") != std::string::npos);
    CHECK(std::string(e.what()).find("scenery") != std::string::npos);
  }
  RunConfig h = c;
  h.scenario = "heisenberg_H7";
  h.ball_radius = {3.0};
  h.lambda_grid = std::vector<std::vector<double>>{{0, 0, 0, 0, 0, 0}};
  CHECK_THROWS_AS(run_spectral(h), UnsupportedFeature);
  h.lambda_grid.reset();
  Json hj = Json::parse(run_spectral(h).files["spectral.json"]);
  CHECK(hj["dual_radius"].size() == 1);
  CHECK_FALSE(hj.contains("k_lambda"));
}

TEST_CASE("verify subset") {
  RunConfig c;
  c.criteria = {1, 11};
  std::ostringstream table;
  CommandResult r = run_verify(c, table, nullptr);
  CHECK(r.status == kExitOk);
  Json j = Json::parse(r.files["verify.json"]);
  CHECK(validate_schema(schema("verify_report"), j).empty());
  REQUIRE(j["criteria"].size() == 2);
  for (const auto& cr : j["criteria"]) {
    CHECK(cr.contains("measured"));
    CHECK(cr.contains("threshold"));
    CHECK(cr.contains("seed"));
  }
  CHECK(table.str().find("PASS") != std::string::npos);
}

TEST_CASE("executable: exit codes, determinism and schemas") {
  fs::path dir = scratch("exe");
  CHECK(run_cli("list-scenarios", dir / "list.log") == 0);
  CHECK(slurp(dir / "list.log").find("torus_sl2") != std::string::npos);
  CHECK(run_cli("simulate --scenario coin --paths 0 --seed 1 --out " + (dir / "z").string(), dir / "z.log") == 2);
  CHECK(run_cli("simulate --scenario coin --paths 5", dir / "noseed.log") == 2);
  CHECK(run_cli("simulate --scenario nope --seed 1", dir / "nope.log") == 2);
  CHECK(run_cli("frobnicate", dir / "frob.log") == 2);
  CHECK(run_cli("spectral --scenario scenery_free_group --seed 1 --out " + (dir / "sc").string(), dir / "sc.log") == 2);
  CHECK(slurp(dir / "sc.log").find("unsupported feature") != std::string::npos);

  std::string common = "simulate --scenario torus_sl2 --n 500 --paths 16 --seed 42 ";
  REQUIRE(run_cli(common + "--threads 1 --out " + (dir / "a").string(), dir / "a.log") == 0);
  REQUIRE(run_cli(common + "--threads 3 --out " + (dir / "b").string(), dir / "b.log") == 0);
  ::setenv("GAPLAB_THREADS", "2", 1);
  REQUIRE(run_cli(common + "--out " + (dir / "c").string(), dir / "c.log") == 0);
  ::unsetenv("GAPLAB_THREADS");
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    std::string name = e.path().filename().string();
    CHECK_MESSAGE(slurp(e.path()) == slurp(dir / "b" / name), name);
    CHECK_MESSAGE(slurp(e.path()) == slurp(dir / "c" / name), name);
  }

  // Config file, with a flag overriding one of its fields.
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"scenario": "torus_sl2", "n": 500, "paths": 99, "seed": 42})";
  }
  REQUIRE(run_cli("simulate --config " + (dir / "cfg.json").string() + " --paths 16 --out " + (dir / "d").string(),
                  dir / "d.log") == 0);
  CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "d" / "summary.json"));
  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"({"scenario": "torus_sl2", "paths": 0, "seed": 1})";
  }
  CHECK(run_cli("simulate --config " + (dir / "bad.json").string(), dir / "bad.log") == 2);

  REQUIRE(run_cli("spectral --scenario torus_sl2 --ball-radius 10 --seed 5 --out " + (dir / "s").string(),
                  dir / "s.log") == 0);
  REQUIRE(run_cli("verify --criteria 1,11 --out " + (dir / "v").string(), dir / "v.log") == 0);

  if (python_jsonschema_available()) {
    fs::path sd(GAPLAB_SCHEMA_DIR);
    CHECK(python_validates(sd / "summary.schema.json", dir / "a" / "summary.json"));
    CHECK(python_validates(sd / "spectral_report.schema.json", dir / "s" / "spectral.json"));
    CHECK(python_validates(sd / "verify_report.schema.json", dir / "v" / "verify.json"));
    CHECK(python_validates(sd / "run_config.schema.json", dir / "cfg.json"));
    CHECK_FALSE(python_validates(sd / "run_config.schema.json", dir / "bad.json"));
  } else {
    MESSAGE("python3 jsonschema not available; cross-validation skipped");
  }
  fs::remove_all(dir.parent_path());
}
