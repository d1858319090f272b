#include "fincover/io.hpp"

#include "doctest.h"
#include "fixtures.hpp"

using namespace fincover;

namespace {

const char* kFixtures[] = {"seg.in", "tri3.in", "k4.in", "k33.in", "c5.in",
                           "rose2a.in", "hex6.in"};

std::string fixture_path(const std::string& name) {
  return std::string(FIXTURES_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("parse and serialize canonicalize idempotently on all fixtures") {
  for (const char* name : kFixtures) {
    CAPTURE(name);
    std::string text = read_file(fixture_path(name));
    Instance inst = parse_instance(text);
    REQUIRE(inst.complexes.size() == 1);
    CHECK(validate(inst.complexes[0]).ok());
    std::string once = serialize_instance(inst);
    std::string twice = serialize_instance(parse_instance(once));
    CHECK(once == twice);
  }
}

TEST_CASE("parsed fixtures match the programmatic ones") {
  auto seg = parse_instance(read_file(fixture_path("seg.in")));
  CHECK(isomorphic(seg.complexes[0], fixtures::seg()));
  auto hex = parse_instance(read_file(fixture_path("hex6.in")));
  CHECK(isomorphic(hex.complexes[0], fixtures::hex6()));
  auto rose = parse_instance(read_file(fixture_path("rose2a.in")));
  CHECK(isomorphic(rose.complexes[0], fixtures::rose2a()));
}

TEST_CASE("parse errors carry field context") {
  SUBCASE("fin referencing a missing edge") {
    std::string text = R"({
      "format": "gwf-instance", "version": 1,
      "complexes": [{"name": "x", "vertices": ["v"], "edges": [["a","v","v"]],
                     "fins": [["zz"]]}]
    })";
    CHECK_THROWS_WITH_AS(parse_instance(text), doctest::Contains("zz"), Error);
  }
  SUBCASE("version mismatch") {
    std::string text = R"({"format": "gwf-instance", "version": 99, "complexes": []})";
    CHECK_THROWS_WITH_AS(parse_instance(text), doctest::Contains("unsupported version"), Error);
  }
  SUBCASE("unknown fields are rejected") {
    std::string text = R"({"format": "gwf-instance", "version": 1, "complexes": [], "zap": 1})";
    CHECK_THROWS_WITH_AS(parse_instance(text), doctest::Contains("unknown field"), Error);
    std::string text2 = R"({
      "format": "gwf-instance", "version": 1,
      "complexes": [{"name": "x", "vertices": ["v"], "edges": [["a","v","v"]], "colour": 3}]
    })";
    CHECK_THROWS_WITH_AS(parse_instance(text2), doctest::Contains("unknown field"), Error);
  }
  SUBCASE("ids must not look like reversed darts") {
    std::string text = R"({
      "format": "gwf-instance", "version": 1,
      "complexes": [{"name": "x", "vertices": ["v"], "edges": [["-a","v","v"]]}]
    })";
    CHECK_THROWS_AS(parse_instance(text), Error);
  }
}

TEST_CASE("expected block round-trips") {
  Instance inst;
  inst.complexes = {fixtures::seg(), fixtures::c5()};
  inst.expected.present = true;
  inst.expected.equivalent = false;
  inst.expected.notes = "degree mismatch";
  auto text = serialize_instance(inst);
  Instance back = parse_instance(text);
  REQUIRE(back.expected.present);
  CHECK(back.expected.equivalent == false);
  CHECK(back.expected.notes == "degree mismatch");
  CHECK(back.complexes.size() == 2);
}

TEST_CASE("maps serialize and parse") {
  auto m = fixtures::hex6_to_tri3_maps();
  auto text = serialize_maps(m);
  auto back = parse_maps(text);
  CHECK(back.vertex_map == m.vertex_map);
  CHECK(back.edge_map == m.edge_map);
  CHECK(back.fin_map.at("f0") == m.fin_map.at("f0"));
  CHECK(serialize_maps(back) == text);
}

TEST_CASE("dot export is deterministic with the documented shape") {
  auto seg_dot = export_dot(fixtures::seg());
  CHECK(seg_dot == export_dot(fixtures::seg()));
  int nodes = 0, edges = 0, fins = 0;
  std::istringstream in(seg_dot);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("->") != std::string::npos)
      ++edges;
    else if (line.find("// fin") != std::string::npos)
      ++fins;
    else if (line.find(';') != std::string::npos)
      ++nodes;
  }
  CHECK(nodes == 2);
  CHECK(edges == 1);
  CHECK(fins == 0);

  auto tri_dot = export_dot(fixtures::tri3());
  nodes = edges = fins = 0;
  std::istringstream in2(tri_dot);
  while (std::getline(in2, line)) {
    if (line.find("->") != std::string::npos)
      ++edges;
    else if (line.find("// fin") != std::string::npos)
      ++fins;
    else if (line.find(';') != std::string::npos)
      ++nodes;
  }
  CHECK(nodes == 3);
  CHECK(edges == 3);
  CHECK(fins == 1);
}
