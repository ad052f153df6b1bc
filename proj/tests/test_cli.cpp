#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/cli.hpp"
#include <json.hpp>

#include "blab/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {
struct Run {
  int code;
  std::string out, err;
};

Run blab_run(std::vector<std::string> args) {
  args.insert(args.begin(), "blab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = blab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("blab_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

json last_report(const fs::path& out) {
  fs::path latest;
  for (const auto& e : fs::directory_iterator(out / "reports"))
    if (latest.empty() || e.path() > latest) latest = e.path();
  for (const auto& e : fs::directory_iterator(latest))
    if (e.path().filename() != "summary.json") return json::parse(blab::read_file(e.path()));
  return {};
}
}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(blab_run({"frobnicate"}).code == 2);
  CHECK(blab_run({"verify", "NOT_A_CHECK", "--out", fresh_dir("bad").string()}).code == 2);
  CHECK(blab_run({"--h", "-1", "alpha", "--out", fresh_dir("neg").string()}).code == 2);
}

TEST_CASE("verify writes a report and report bundles it") {
  fs::path out = fresh_dir("verify");
  Run r = blab_run({"--out", out.string(), "verify", "PROP_PLANAR"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PROP_PLANAR") != std::string::npos);
  json rep = last_report(out);
  CHECK(rep["check_id"] == "PROP_PLANAR");
  CHECK(rep["status"] == "pass");
  Run b = blab_run({"--out", out.string(), "report"});
  CHECK(b.code == 0);
  CHECK(b.out.find("bundle.json") != std::string::npos);
}

TEST_CASE("config file is merged and flags win") {
  fs::path out = fresh_dir("config");
  blab::write_atomic(out / "cfg.json", json({{"seed", 99}, {"h", 0.125}}).dump());
  Run r = blab_run({"--config", (out / "cfg.json").string(), "--seed", "5", "--out", out.string(), "verify",
                    "PROP_PLANAR"});
  CHECK(r.code == 0);
  json rep = last_report(out);
  CHECK(rep["seed"] == 5);
  CHECK(rep["config"]["h"] == 0.125);
  blab::write_atomic(out / "bad.json", json({{"colour", 1}}).dump());
  CHECK(blab_run({"--config", (out / "bad.json").string(), "--out", out.string(), "verify", "PROP_PLANAR"}).code == 2);
}

TEST_CASE("capacity and basin subcommands") {
  fs::path out = fresh_dir("cap");
  Run r = blab_run({"--out", out.string(), "capacity", "--set", R"({"type":"circle","radius":0.7})", "--n", "16",
                    "--restarts", "2"});
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "tables" / "fekete_points.csv"));
  Run b = blab_run({"--out", out.string(), "basin", "--poly", "1,0,0", "--levels", "4", "--rays", "16"});
  CHECK(b.code == 0);
}
