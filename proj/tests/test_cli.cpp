#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "zkgame/error.hpp"

using namespace zkgame;
using namespace zkgame::cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "zkgame");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = main_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  const std::string path = "zkgame_cli_test_" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("build") {
  const auto r = invoke({"build", "--builtin", "magic-square"});
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("n") == 9);
  CHECK(j.at("constraints").size() == 6);

  const auto cnf = temp_file("ok.cnf", "p cnf 2 1\n1 -2 0\n");
  CHECK(invoke({"build", "--cnf", cnf}).code == 0);

  const auto bad = temp_file("bad.cnf", "p cnf 2 1\n1 q 0\n");
  const auto rb = invoke({"build", "--cnf", bad});
  CHECK(rb.code == 2);
  CHECK(rb.err.find("line 2") != std::string::npos);

  CHECK(invoke({"build"}).code == 2);
  CHECK(invoke({"build", "--builtin", "nope"}).code == 2);
  std::remove(cnf.c_str());
  std::remove(bad.c_str());
}

TEST_CASE("transform is reproducible") {
  const std::vector<std::string> args{"transform", "--builtin", "magic-square", "--pass", "cv",
                                      "--pass", "oracularize", "--seed", "3"};
  const auto a = invoke(args), b = invoke(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = json::parse(a.out);
  CHECK(j.at("reports").size() == 2);
  CHECK(j.at("game").at("kind") == "oracularized");

  const auto bad = invoke({"transform", "--builtin", "magic-square", "--pass", "shuffle"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("shuffle") != std::string::npos);
}

TEST_CASE("value") {
  const auto c = invoke({"value", "--builtin", "magic-square", "--pass", "cv", "--classical"});
  CHECK(c.code == 0);
  CHECK(json::parse(c.out).at("value") == "35/36");

  const auto q = invoke({"value", "--builtin", "magic-square", "--pass", "cv", "--strategy", "pauli"});
  CHECK(q.code == 0);
  CHECK(json::parse(q.out).at("value").get<double>() >= 1 - 1e-9);

  CHECK(invoke({"value", "--builtin", "magic-square", "--pass", "cv"}).code == 2);
  CHECK(invoke({"value", "--builtin", "magic-square", "--classical"}).code == 2);
}

TEST_CASE("zk-test") {
  const auto u = invoke({"zk-test", "--builtin", "tiny-3sat", "--pass", "pzk:l=8,k=9", "--suite", "uniformity", "--exact"});
  CHECK(u.code == 0);
  CHECK(json::parse(u.out).at("pass") == true);

  ZkTestOptions o;
  o.suite = "probe";
  SourceSpec src;
  src.builtin = "tiny-3sat";
  CHECK_FALSE(cmd_zk_test(src, {"pzk:l=4,k=5"}, o).pass);

  CHECK(invoke({"zk-test", "--builtin", "tiny-3sat", "--pass", "cv"}).code == 2);
}

TEST_CASE("run") {
  const std::vector<std::string> args{"run", "--builtin", "magic-square", "--pass", "cv", "--provers", "pauli",
                                      "--rounds", "300", "--seed", "9"};
  const auto a = invoke(args);
  CHECK(a.code == 0);
  const auto j = json::parse(a.out);
  CHECK(j.at("accepted") == 300);

  auto threaded = args;
  threaded.insert(threaded.end(), {"--jobs", "3"});
  CHECK(invoke(threaded).out == a.out);

  const auto sim = invoke({"run", "--builtin", "tiny-3sat", "--pass", "pzk:l=4,k=5", "--pass", "cv", "--provers",
                           "simulator", "--policy", "uniform", "--rounds", "100"});
  CHECK(sim.code == 0);
  CHECK(invoke({"run", "--builtin", "magic-square", "--pass", "cv", "--provers", "nobody"}).code == 2);
}
