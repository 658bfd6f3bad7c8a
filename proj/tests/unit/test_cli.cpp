#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "stickyflow/commands.hpp"
#include "stickyflow/config.hpp"
#include "stickyflow/io.hpp"

using namespace stickyflow;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("stickyflow_test_" + name);
  fs::remove_all(p);
  return p;
}

ConfigError::Kind error_kind(const std::string& text, std::string* key = nullptr) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    if (key) *key = e.key();
    return e.kind();
  }
  FAIL("expected a config error for " << text);
  return ConfigError::Kind::Invalid;
}

int invoke(std::vector<std::string> args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("periodic-scheme defaults") {
  const RunConfig cfg = parse_config(R"({"command": "periodic-scheme", "initial": {"preset": "fig123"}})");
  CHECK(cfg.command == Command::PeriodicScheme);
  CHECK(cfg.grid == 400);
  CHECK(cfg.tau == 0.001);
  CHECK(cfg.steps == 5000);
  CHECK(command_name(cfg.command) == "periodic-scheme");
}

TEST_CASE("config errors are named and classified") {
  std::string key;
  CHECK(error_kind(R"({"command": "simulate-particles", "initial": {"preset": "dirac"}})", &key) ==
        ConfigError::Kind::MissingField);
  CHECK(key == "force");
  CHECK(error_kind(R"({"command": "periodic-scheme", "tau": -1})", &key) ==
        ConfigError::Kind::OutOfRange);
  CHECK(key == "tau");
  CHECK(error_kind(R"({"command": "dance"})") == ConfigError::Kind::UnknownCommand);
  CHECK(error_kind(R"({"command": "periodic-scheme", "grid": "big"})", &key) ==
        ConfigError::Kind::BadType);
  CHECK(key == "grid");
  CHECK(error_kind(R"({"command": )") == ConfigError::Kind::Syntax);
  CHECK(error_kind(R"({"command": "project", "values": [1, "x"]})", &key) ==
        ConfigError::Kind::BadType);
  CHECK(key == "values[1]");
  CHECK(error_kind(R"({"command": "solve-attractive", "force": {"kind": "euler-poisson", "lambda": -1},
                       "initial": {"preset": "dirac"}})",
                   &key) == ConfigError::Kind::OutOfRange);
  CHECK(key == "force.lambda");
  CHECK(error_kind(R"({"command": "compare", "grid": 100, "particles": [64]})", &key) ==
        ConfigError::Kind::OutOfRange);
  CHECK(error_kind(R"({"command": "simulate-particles", "force": {"kind": "euler-poisson", "lambda": 0},
                       "initial": {"masses": [1], "positions": [0, 1], "velocities": [0]}})") ==
        ConfigError::Kind::Invalid);
}

TEST_CASE("make_force builds the requested shapes") {
  ForceSpec spec;
  spec.kind = "potential";
  spec.shape = "linear";
  spec.strength = 2.0;
  const Grid g(2);
  const TransportMap x(g, {0, 1});
  auto f = eval_force(make_force(spec), x);
  CHECK(f == std::vector<double>{-2, -2});
  spec.kind = "interaction";
  spec.shape = "abs";
  spec.strength = 1.0;
  f = eval_force(make_force(spec), x);
  CHECK(f == std::vector<double>{0.5, -0.5});
}

TEST_CASE("shortest round-trip float formatting") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
  std::ostringstream os;
  CsvWriter csv(os);
  csv.field("a").field(std::size_t{3}).empty().field(2.5).end_row();
  CHECK(os.str() == "a,3,,2.5\n");
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("project command writes the projection") {
  const fs::path dir = scratch("project");
  run(parse_config(R"({"command": "project", "values": [1, -1]})"), dir);
  CHECK(read_file(dir / "projection.csv") == "index,value\n0,0\n1,0\n");
  fs::remove_all(dir);
}

TEST_CASE("runs are byte-identical and the manifest lists every file") {
  const std::string cfg_text = R"({"command": "simulate-particles", "seed": 7, "particles": 24,
      "force": {"kind": "euler-poisson", "lambda": 1}, "initial": {"preset": "random"}, "t_end": 3})";
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const auto out = run(parse_config(cfg_text), a);
  run(parse_config(cfg_text), b);
  for (const std::string& name : out.files) {
    CHECK(read_file(a / name) == read_file(b / name));
  }
  const auto manifest = nlohmann::json::parse(read_file(a / "manifest.json"));
  CHECK(manifest["command"] == "simulate-particles");
  CHECK(manifest["seed"] == 7);
  CHECK(manifest["config"]["particles"] == 24);
  CHECK(manifest.contains("wall_time_seconds"));
  CHECK(manifest.contains("version"));
  REQUIRE(manifest["files"].size() == out.files.size());
  for (const auto& entry : manifest["files"]) {
    const std::string bytes = read_file(a / entry["path"].get<std::string>());
    CHECK(entry["bytes"] == bytes.size());
    CHECK(entry["fnv1a64"] == hex64(fnv1a64(bytes)));
  }
  CHECK(manifest["summary"]["initial_particles"] == 24);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("every command runs on a small configuration") {
  const std::vector<std::string> configs{
      R"({"command": "evolve-inclusion", "grid": 32, "t_end": 0.2, "tau": 0.01,
          "force": {"kind": "euler-poisson", "lambda": -1}, "initial": {"preset": "dirac"}})",
      R"({"command": "solve-attractive", "grid": 64, "force": {"kind": "euler-poisson", "lambda": 1},
          "initial": {"preset": "two-rarefaction"}})",
      R"({"command": "periodic-scheme", "grid": 40, "steps": 30, "tau": 0.01})",
      R"({"command": "weak-check", "scenario": "two-particle-merge"})",
      R"({"command": "compare", "grid": 256, "particles": [8, 16], "times": [0.5]})",
  };
  for (const std::string& text : configs) {
    const fs::path dir = scratch("cmd");
    const auto out = run(parse_config(text), dir);
    CHECK_FALSE(out.files.empty());
    for (const std::string& name : out.files) CHECK(fs::file_size(dir / name) > 0);
    CHECK(fs::exists(dir / "manifest.json"));
    fs::remove_all(dir);
  }
}

TEST_CASE("solve-attractive reports a passing certificate") {
  const fs::path dir = scratch("attractive");
  const auto out = run(parse_config(R"({"command": "solve-attractive", "grid": 256,
      "force": {"kind": "euler-poisson", "lambda": 1}, "initial": {"preset": "random"}, "seed": 3})"),
                       dir);
  CHECK(out.summary["inclusion_certificate_pass"] == true);
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  fs::create_directories(dir);
  write_file(dir / "ok.json", R"({"command": "project", "values": [3, 1, 2]})");
  write_file(dir / "bad.json", R"({"command": "simulate-particles"})");
  write_file(dir / "nonfinite.json", R"({"command": "simulate-particles", "t_end": 1,
      "force": {"kind": "potential", "shape": "quadratic", "strength": 1e308, "offset": 1e308},
      "initial": {"masses": [0.5, 0.5], "positions": [1e308, 1.5e308], "velocities": [1e308, -1e308]}})");
  CHECK(invoke({"stickyflow", "--config", (dir / "ok.json").string(), "--out",
                (dir / "out").string(), "--quiet"}) == kExitOk);
  CHECK(read_file(dir / "out" / "projection.csv") == "index,value\n0,2\n1,2\n2,2\n");
  CHECK(invoke({"stickyflow", "--config", (dir / "bad.json").string(), "--out",
                (dir / "out").string(), "--quiet"}) == kExitConfig);
  CHECK(invoke({"stickyflow", "--config", (dir / "missing.json").string(), "--quiet"}) == kExitIo);
  CHECK(invoke({"stickyflow", "--quiet"}) == kExitConfig);
  CHECK(invoke({"stickyflow", "--config", (dir / "nonfinite.json").string(), "--out",
                (dir / "out").string(), "--quiet"}) == kExitNumerical);
  write_file(dir / "blocker", "");
  CHECK(invoke({"stickyflow", "--config", (dir / "ok.json").string(), "--out",
                (dir / "blocker" / "sub").string(), "--quiet"}) == kExitIo);
  fs::remove_all(dir);
}
