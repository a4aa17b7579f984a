#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "membrane/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "reinforce");
  std::ostringstream out, err;
  Invocation r;
  r.code = membrane::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("membrane_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("radial command writes the profile and summary") {
  const fs::path dir = scratch("radial");
  const auto r = invoke({"radial", "--lambda", "10", "--m", "5", "--samples", "101", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("a_bar = 0.2444") != std::string::npos);
  CHECK(count_lines(dir / "radial_profile.csv") == 102);
  const auto j = nlohmann::json::parse(slurp(dir / "radial.json"));
  CHECK(std::abs(j["result"]["mass_L"].get<double>() - 0.424242) < 1e-4);
}

TEST_CASE("radial command rejects inadmissible eigenvalues") {
  const auto r = invoke({"radial", "--lambda", "1", "--out", scratch("radial_bad").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("lambda not admissible") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"radial", "--bogus", "1"}).code == 1);
  CHECK(invoke({"optimize", "--damping", "2", "--out", scratch("damp").string()}).code == 1);
  CHECK(invoke({"optimize", "--p-schedule", "1.5,2", "--out", scratch("sched").string()}).code == 1);
  CHECK(invoke({"eigen", "--refinement", "abc"}).code == 1);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("config file is overridden by flags") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "# eigen run\ndomain = rect\nrefinement = 4\nout = " << (dir / "from_file").string() << "\n";
  }
  const auto r = invoke({"eigen", "--config", (dir / "run.cfg").string(), "--refinement", "8"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "from_file" / "eigen.json"));
  CHECK(j["config"]["refinement"] == "8");
  CHECK(j["config"]["domain"] == "rect");
  CHECK(j["result"]["triangles"] == 128);

  {
    std::ofstream cfg(dir / "bad.cfg");
    cfg << "refinement = 4\nrefinement 5\n";
  }
  const auto bad = invoke({"eigen", "--config", (dir / "bad.cfg").string()});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("line 2") != std::string::npos);
}

TEST_CASE("eigen command with and without a density") {
  const fs::path dir = scratch("eigen");
  const auto plain = invoke({"eigen", "--domain", "disk", "--refinement", "8", "--out", (dir / "a").string()});
  REQUIRE(plain.code == 0);
  CHECK(plain.out.find("lambda1 = 5.8") != std::string::npos);
  std::ifstream csv(dir / "a" / "eigen.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "node,x,y,u");

  const fs::path opt = dir / "opt";
  REQUIRE(invoke({"optimize", "--refinement", "8", "--p-schedule", "2", "--out", opt.string()}).code == 0);
  const auto with_theta = invoke({"eigen", "--refinement", "8", "--theta", (opt / "theta.csv").string(), "--m",
                                  "5", "--out", (dir / "b").string()});
  REQUIRE(with_theta.code == 0);
  const auto report = nlohmann::json::parse(slurp(opt / "report.json"));
  const auto eig = nlohmann::json::parse(slurp(dir / "b" / "eigen.json"));
  CHECK(std::abs(eig["result"]["lambda1"].get<double>() - report["stages"][0]["lambda1"].get<double>()) < 1e-8);

  {
    std::ofstream bad(dir / "bad.csv");
    bad << "tri_or_node,x,y,value\n0,0,0,1\n1,0,0,-2\n";
  }
  const auto malformed =
      invoke({"eigen", "--refinement", "8", "--theta", (dir / "bad.csv").string(), "--out", (dir / "c").string()});
  CHECK(malformed.code == 1);
  CHECK(malformed.err.find("line 3") != std::string::npos);
}

TEST_CASE("optimize command report layout") {
  const fs::path dir = scratch("optimize");
  const auto r = invoke({"optimize", "--refinement", "8", "--p-schedule", "3,2", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("upper_bound = ") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j["params"]["m"] == 5.0);
  CHECK(j["stages"].size() == 2);
  CHECK(j["stages"][1]["p"] == 2.0);
  for (const char* key : {"lambda1", "upper_bound", "gap"}) CHECK(j["final"].contains(key));
  CHECK(j["fields"]["theta"] == "theta.csv");
  CHECK(fs::exists(dir / "theta.csv"));
  CHECK(fs::exists(dir / "u.csv"));
}

TEST_CASE("optimize reports a stage failure with exit code 2") {
  const fs::path dir = scratch("optimize_fail");
  const auto r =
      invoke({"optimize", "--refinement", "8", "--p-schedule", "1.5", "--max-iter", "2", "--out", dir.string()});
  CHECK(r.code == 2);
  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j["final"].is_null());
  CHECK(j["stages"].size() == 1);
}

TEST_CASE("unwritable output directory is reported") {
  const fs::path dir = scratch("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  const auto r = invoke({"mesh", "--refinement", "2", "--out", (dir / "file" / "sub").string()});
  CHECK(r.code != 0);
  CHECK(r.err.find("output directory") != std::string::npos);
}

TEST_CASE("mesh command writes a loadable mesh") {
  const fs::path dir = scratch("mesh");
  const auto r = invoke({"mesh", "--domain", "rect", "--refinement", "3", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("triangles = 18") != std::string::npos);
  const auto again = invoke({"eigen", "--domain", "file:" + (dir / "mesh.txt").string(), "--out",
                             (dir / "e").string()});
  CHECK(again.code == 0);
}
