// End-to-end checks of the installed command line: exit codes and output
// determinism are a documented contract.
#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "fincover/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string bin() {
  const char* b = std::getenv("FINCOVER_BIN");
  REQUIRE_MESSAGE(b != nullptr, "FINCOVER_BIN not set");
  return b;
}

std::string fixture(const std::string& name) {
  return std::string(FIXTURES_DIR) + "/" + name;
}

fs::path scratch() {
  fs::path dir = fs::temp_directory_path() / "fincover_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const std::string& stdout_file = "") {
  std::string cmd = bin() + " " + args + " 2>/dev/null";
  if (!stdout_file.empty()) cmd += " > " + stdout_file;
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("cli exit codes") {
  CHECK(run("check " + fixture("k4.in") + " " + fixture("k33.in")) == 0);
  CHECK(run("check " + fixture("k4.in") + " " + fixture("c5.in")) == 2);
  CHECK(run("cover " + fixture("k4.in") + " " + fixture("c5.in")) == 2);
  CHECK(run("cover " + fixture("k4.in") + " " + fixture("k33.in") + " --solver measure") == 0);
  CHECK(run("nfold " + fixture("tri3.in") + " 3 --seed 0") == 0);
  CHECK(run("check missing-file.in other.in") == 1);
  CHECK(run("export " + fixture("hex6.in") + " --dot") == 0);
}

TEST_CASE("cover writes verifiable, reproducible files") {
  auto dir = scratch();
  auto out1 = (dir / "c1.json").string();
  auto out2 = (dir / "c2.json").string();
  std::string inputs = fixture("tri3.in") + " " + fixture("hex6.in");
  REQUIRE(run("cover " + inputs + " --seed 3 --out " + out1) == 0);
  REQUIRE(run("cover " + inputs + " --seed 3 --out " + out2) == 0);
  CHECK(fincover::read_file(out1) == fincover::read_file(out2));
  CHECK(fincover::read_file(out1 + ".phi1.json") == fincover::read_file(out2 + ".phi1.json"));
  CHECK(fincover::read_file(out1 + ".phi2.json") == fincover::read_file(out2 + ".phi2.json"));

  // the emitted files verify through the cli as well
  CHECK(run("verify " + out1 + " " + out1 + ".phi1.json " + fixture("tri3.in")) == 0);
  CHECK(run("verify " + out1 + " " + out1 + ".phi2.json " + fixture("hex6.in")) == 0);

  // a corrupted map is rejected with exit 4
  auto maps = fincover::parse_maps(fincover::read_file(out1 + ".phi1.json"));
  REQUIRE_FALSE(maps.vertex_map.empty());
  maps.vertex_map.begin()->second = maps.vertex_map.begin()->second == "v1" ? "v2" : "v1";
  auto broken = (dir / "broken.phi.json").string();
  fincover::write_file(broken, fincover::serialize_maps(maps));
  int code = run("verify " + out1 + " " + broken + " " + fixture("tri3.in"));
  CHECK((code == 4 || code == 1));
}

TEST_CASE("the pair cap can be overridden through the environment") {
  std::string cmd = "FINCOVER_PAIR_CAP=10 " + bin() + " cover " + fixture("k4.in") + " " +
                    fixture("k33.in") + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  CHECK(WEXITSTATUS(status) == 1);
}

TEST_CASE("gen is reproducible and its output covers") {
  auto dir = scratch();
  auto g1 = (dir / "g1.in").string();
  auto g2 = (dir / "g2.in").string();
  REQUIRE(run("gen --seed 12 --out " + g1) == 0);
  REQUIRE(run("gen --seed 12 --out " + g2) == 0);
  CHECK(fincover::read_file(g1) == fincover::read_file(g2));
  CHECK(run("cover " + g1 + " --seed 1") == 0);
}

TEST_CASE("dot export is byte-stable across runs") {
  auto dir = scratch();
  auto d1 = (dir / "t1.dot").string();
  auto d2 = (dir / "t2.dot").string();
  REQUIRE(run("export " + fixture("tri3.in") + " --dot", d1) == 0);
  REQUIRE(run("export " + fixture("tri3.in") + " --dot", d2) == 0);
  CHECK(fincover::read_file(d1) == fincover::read_file(d2));
}
