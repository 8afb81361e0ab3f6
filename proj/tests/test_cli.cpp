#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace jspec::cli;
using json = nlohmann::ordered_json;

namespace {

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "jspec_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_config(const std::string& name, const std::string& body) {
  const auto path = scratch() / name;
  std::ofstream(path) << body;
  return path.string();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "jspec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

double num(const json& v) { return std::stod(v.get<std::string>()); }

}  // namespace

TEST_CASE("float formatting") {
  CHECK(fixed17(0.1) == "0.10000000000000001");
  CHECK(shortest(0.1) == "0.1");
  CHECK(std::stod(shortest(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(shortest(-2.5e-300) == "-2.5e-300");
}

TEST_CASE("config loading and overrides") {
  const std::string path =
      write_config("load.json", R"({"model": "qhyper", "params": {"q": 0.8}, "options": {"N": 10}})");
  RunConfig cfg = load_config(path);
  CHECK(cfg.model == "qhyper");
  CHECK(cfg.params["q"] == 0.8);
  apply_override(cfg, "c=0.7");
  apply_override(cfg, "q=0.9");
  apply_override(cfg, "quad_nodes=200");
  apply_override(cfg, "format=csv");
  CHECK(cfg.params["c"] == 0.7);
  CHECK(cfg.params["q"] == 0.9);
  CHECK(cfg.options["quad_nodes"] == 200);
  CHECK(cfg.format == "csv");
  CHECK_THROWS_AS(apply_override(cfg, "novalue"), InvalidInput);
  CHECK_THROWS_AS(load_config(write_config("bad.json", "{")), InvalidInput);
  CHECK_THROWS_AS(load_config(write_config("extra.json", R"({"modle": "x"})")), InvalidInput);
  CHECK_THROWS_AS(load_config((scratch() / "missing.json").string()), InvalidInput);
}

TEST_CASE("classify") {
  const std::string sw = write_config("sw.json", R"({"model": "stieltjes_wigert", "params": {"q": 0.5}})");
  Run r = invoke({"classify", "--config", sw});
  REQUIRE(r.code == kOk);
  json doc = json::parse(r.out);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["verdict"] == "indeterminate");

  const std::string ch = write_config("ch.json", R"({"model": "chebyshev"})");
  r = invoke({"classify", "--config", ch});
  REQUIRE(r.code == kOk);
  CHECK(json::parse(r.out)["verdict"] == "determinate");

  const std::string qh = write_config("qh.json", R"({"model": "qhyper", "params": {"q": 0.8, "c": 0.7, "d": 0.9}})");
  r = invoke({"classify", "--config", qh});
  REQUIRE(r.code == kOk);
  CHECK(json::parse(r.out)["total"] == "(1,1)");
  r = invoke({"classify", "--config", qh, "--set", "c=0.5"});
  REQUIRE(r.code == kOk);
  CHECK(json::parse(r.out)["total"] == "(0,0)");

  const std::string mx = write_config("mx.json", R"({"model": "meixner"})");
  r = invoke({"classify", "--config", mx});
  REQUIRE(r.code == kOk);
  CHECK(json::parse(r.out)["total"] == "(0,0)");

  r = invoke({"classify", "--config", qh, "--set", "q=1.5"});
  CHECK(r.code == kInvalidInput);
  CHECK(r.err.find("error") != std::string::npos);
  r = invoke({"classify", "--config", qh, "--set", "bogus=1"});
  CHECK(r.code == kInvalidInput);
  r = invoke({"classify", "--config", qh, "--set", "model=nothing"});
  CHECK(r.code == kInvalidInput);
}

TEST_CASE("spectrum") {
  const std::string ch = write_config("ch_spec.json", R"({"model": "chebyshev", "options": {"N": 50}})");
  Run r = invoke({"spectrum", "--config", ch});
  REQUIRE(r.code == kOk);
  json doc = json::parse(r.out);
  REQUIRE(doc["atoms"].size() == 51);
  for (const auto& a : doc["atoms"]) {
    CHECK(std::abs(num(a["location"])) < 1.0);
    CHECK(num(a["mass"]) > 0.0);
  }

  const std::string mx = write_config("mx_spec.json", R"({"model": "meixner", "params": {"a": 2, "eps": 0.25}})");
  r = invoke({"spectrum", "--config", mx});
  REQUIRE(r.code == kOk);
  doc = json::parse(r.out);
  REQUIRE(doc["atoms"].size() == 5);
  for (std::size_t i = 0; i + 1 < 5; ++i) {
    CHECK(std::abs(num(doc["atoms"][i + 1]["location"]) - num(doc["atoms"][i]["location"]) -
                   2.0 * std::sqrt(3.0)) < 1e-12);
  }

  const std::string qh = write_config("qh_spec.json", R"({"model": "qhyper"})");
  r = invoke({"spectrum", "--config", qh});
  REQUIRE(r.code == kOk);
  doc = json::parse(r.out);
  for (const auto& d : doc["density"]) CHECK(num(d["density"]) > 0.0);
  REQUIRE(doc["atoms"].size() >= 2);
  for (std::size_t i = 0; i + 1 < doc["atoms"].size(); ++i) {
    CHECK(std::abs(num(doc["atoms"][i + 1]["location"])) > std::abs(num(doc["atoms"][i]["location"])));
  }
  CHECK(std::abs(num(doc["metadata"]["total_mass"]) - 1.0) < 1e-8);

  r = invoke({"spectrum", "--config", ch, "--format", "csv", "--set", "N=3"});
  REQUIRE(r.code == kOk);
  CHECK(r.out.rfind("kind,x,mass,density\n", 0) == 0);
  CHECK(r.out.find('\r') == std::string::npos);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
}

TEST_CASE("verify") {
  const std::string mx = write_config("mx_ver.json", R"({"model": "meixner"})");
  Run r = invoke({"verify", "--config", mx});
  REQUIRE(r.code == kOk);
  json doc = json::parse(r.out);
  CHECK(num(doc["max_defect"]) < 1e-6);
  CHECK(doc["passed"] == true);

  r = invoke({"verify", "--config", mx, "--set", "K=5"});
  CHECK(r.code == kVerificationFailed);
  CHECK(r.err.find("verification failed") != std::string::npos);

  r = invoke({"verify", "--config", mx, "--set", "threshold=1e-30"});
  CHECK(r.code == kVerificationFailed);

  const std::string qh = write_config("qh_ver.json", R"({"model": "qhyper"})");
  r = invoke({"verify", "--config", qh, "--set", "k_min=-1", "--set", "k_max=1"});
  REQUIRE(r.code == kOk);
  doc = json::parse(r.out);
  for (const auto& d : doc["diagonal_ratios"]) CHECK(std::abs(num(d["ratio"]) - 1.0) < 1e-5);
}

TEST_CASE("limit") {
  const std::string lm = write_config("lim.json", R"({"model": "qhyper", "params": {"a": 2, "eps": 0.25}, "options": {"p": 1, "q_list": [0.9, 0.95, 0.99]}})");
  Run r = invoke({"limit", "--config", lm});
  REQUIRE(r.code == kOk);
  const json doc = json::parse(r.out);
  REQUIRE(doc["rows"].size() == 3);
  const double pred = num(doc["rows"][0]["predicted_limit"]);
  for (const auto& row : doc["rows"]) CHECK(num(row["predicted_limit"]) == pred);
  CHECK(doc["gap_decreasing"] == true);

  r = invoke({"limit", "--config", lm, "--set", "a=0.5"});
  CHECK(r.code == kInvalidInput);
  CHECK(r.err.find("not implemented") != std::string::npos);
  r = invoke({"limit", "--config", lm, "--set", "s=-0.5"});
  CHECK(r.code == kInvalidInput);
}

TEST_CASE("output file and determinism") {
  const std::string mx = write_config("det.json", R"({"model": "meixner"})");
  const auto a = scratch() / "a.json", b = scratch() / "b.json";
  REQUIRE(invoke({"spectrum", "--config", mx, "--out", a.string()}).code == kOk);
  REQUIRE(invoke({"spectrum", "--config", mx, "--out", b.string()}).code == kOk);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(!slurp(a).empty());
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("argument errors") {
  CHECK(invoke({}).code == kInvalidInput);
  CHECK(invoke({"frobnicate"}).code == kInvalidInput);
  CHECK(invoke({"classify"}).code == kInvalidInput);
  const std::string ch = write_config("fmt.json", R"({"model": "chebyshev"})");
  CHECK(invoke({"classify", "--config", ch, "--format", "xml"}).code == kInvalidInput);
}
