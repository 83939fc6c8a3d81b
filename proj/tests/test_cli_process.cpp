#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

// Drives the installed binary as a child process: exit codes, report files,
// stdout fallback, and flag/config merging.

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

std::string env(const char* key) {
  const char* v = std::getenv(key);
  return v ? std::string(v) : std::string();
}

fs::path work_dir() {
  auto dir = fs::temp_directory_path() / "orbitkit_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = env("ORBITKIT_BIN") + " " + args;
  int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  return Json::parse(in);
}

std::string data_file(const char* name) {
  return (fs::path(env("ORBITKIT_DATA")) / name).string();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("harness environment is wired") {
  REQUIRE(!env("ORBITKIT_BIN").empty());
  REQUIRE(!env("ORBITKIT_DATA").empty());
  REQUIRE(fs::exists(env("ORBITKIT_BIN")));
  REQUIRE(fs::exists(data_file("descend_quadratic.json")));
}

TEST_CASE("clean run writes the report to --out and exits 0") {
  const auto out = work_dir() / "quadratic_report.json";
  int rc = run_cli("descend --config " + data_file("descend_quadratic.json") + " --out " +
                   out.string() + " > /dev/null 2>&1");
  CHECK(rc == 0);
  Json r = read_json(out);
  CHECK(r["schema_version"] == 1);
  CHECK(r["tool"] == "orbitkit");
  CHECK(r["command"] == "descend");
  CHECK(r["violations"] == Json::array());
  CHECK(r["results"]["certificate"]["xbar"] == "1/64");
  CHECK(r["results"]["certificate"]["sigma_length"] == "63/64");
}

TEST_CASE("stdout carries the report when --out is absent") {
  const auto cap = work_dir() / "stdout_capture.json";
  int rc = run_cli("remetrize --config " + data_file("remetrize_halving.json") + " > " +
                   cap.string() + " 2>/dev/null");
  CHECK(rc == 0);
  Json r = read_json(cap);
  CHECK(r["command"] == "remetrize");
  CHECK(r["results"]["remetrizable"] == true);
}

TEST_CASE("a refuted invariant exits 1 and names the violation") {
  const auto out = work_dir() / "zero_audit.json";
  int rc = run_cli("audit --config " + data_file("audit_zero.json") + " --out " + out.string() +
                   " > /dev/null 2>&1");
  CHECK(rc == 1);
  Json r = read_json(out);
  REQUIRE(!r["violations"].empty());
  CHECK(r["results"]["axioms"]["zero_dichotomy"]["verdict"] == "refuted");
}

TEST_CASE("configuration problems exit 2") {
  CHECK(run_cli("verify-finite --config " + data_file("bad_unknown_key.json") +
                " > /dev/null 2>&1") == 2);
  CHECK(run_cli("verify-finite --config " + data_file("verify_cap.json") +
                " > /dev/null 2>&1") == 2);
  CHECK(run_cli("gallery --config /nonexistent/missing.json > /dev/null 2>&1") == 2);
  CHECK(run_cli("> /dev/null 2>&1") == 2);            // missing subcommand
  CHECK(run_cli("gallery > /dev/null 2>&1") == 2);    // missing --config
  CHECK(run_cli("--help > /dev/null 2>&1") == 0);

  const auto bad = work_dir() / "not_json.json";
  write_text(bad, "{ definitely not json");
  CHECK(run_cli("gallery --config " + bad.string() + " > /dev/null 2>&1") == 2);
}

TEST_CASE("instance files flow through verify-finite") {
  const auto cfg = work_dir() / "instance_cfg.json";
  write_text(cfg, std::string("{\"instance\": \"") + data_file("sierpinski.space") + "\"}");
  const auto out = work_dir() / "instance_report.json";
  int rc = run_cli("verify-finite --config " + cfg.string() + " --out " + out.string() +
                   " > /dev/null 2>&1");
  CHECK(rc == 0);
  Json r = read_json(out);
  CHECK(r["results"]["open_count"] == 3);
  CHECK(r["results"]["closed_graph"] == false);
  CHECK(r["results"]["fixed_point_audit"]["consistent"] == true);
}

TEST_CASE("--seed satisfies the sampling requirement and lands in the config echo") {
  const auto cfg = work_dir() / "seedless.json";
  write_text(cfg, "{\"scenario\": \"rationals-halving\"}");
  CHECK(run_cli("gallery --config " + cfg.string() + " > /dev/null 2>&1") == 2);

  const auto out = work_dir() / "seeded_report.json";
  int rc = run_cli("gallery --config " + cfg.string() + " --seed 2 --out " + out.string() +
                   " > /dev/null 2>&1");
  CHECK(rc == 0);
  Json r = read_json(out);
  CHECK(r["seed"] == 2);
  CHECK(r["config"]["seed"] == 2);
}

TEST_CASE("identical invocations produce identical payloads") {
  const auto a = work_dir() / "det_a.json", b = work_dir() / "det_b.json";
  const std::string base =
      "gallery --config " + data_file("gallery_two_origins.json") + " --out ";
  REQUIRE(run_cli(base + a.string() + " > /dev/null 2>&1") == 0);
  REQUIRE(run_cli(base + b.string() + " > /dev/null 2>&1") == 0);
  Json ra = read_json(a), rb = read_json(b);
  ra.erase("wall_time_ms");
  rb.erase("wall_time_ms");
  CHECK(ra.dump() == rb.dump());
  CHECK(ra["results"]["witness_pair"] == Json::array({"origin-a", "origin-b"}));
}
