#pragma once

#include "fincover/complex.hpp"

// Shared hand-built instances used across the test suites.
namespace fixtures {

using fincover::Dart;
using fincover::GraphWithFins;
using fincover::make_graph;

// Two vertices joined by one edge, no fins.
inline GraphWithFins seg() {
  return make_graph("SEG", {"u", "v"}, {{"e", "u", "v"}});
}

// 3-cycle with one fin running around it once.
inline GraphWithFins tri3() {
  return make_graph("TRI3", {"v0", "v1", "v2"},
                    {{"e0", "v0", "v1"}, {"e1", "v1", "v2"}, {"e2", "v2", "v0"}},
                    {{{"e0", true}, {"e1", true}, {"e2", true}}});
}

// TRI3 with the fin listed twice (repeated circles are allowed).
inline GraphWithFins tri3_doubled() {
  return make_graph("TRI3x2", {"v0", "v1", "v2"},
                    {{"e0", "v0", "v1"}, {"e1", "v1", "v2"}, {"e2", "v2", "v0"}},
                    {{{"e0", true}, {"e1", true}, {"e2", true}},
                     {{"e0", true}, {"e1", true}, {"e2", true}}});
}

inline GraphWithFins k4() {
  return make_graph("K4", {"v0", "v1", "v2", "v3"},
                    {{"e01", "v0", "v1"},
                     {"e02", "v0", "v2"},
                     {"e03", "v0", "v3"},
                     {"e12", "v1", "v2"},
                     {"e13", "v1", "v3"},
                     {"e23", "v2", "v3"}});
}

inline GraphWithFins k33() {
  std::vector<fincover::EdgeRec> edges;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      edges.push_back({"e" + std::to_string(i) + std::to_string(j),
                       "a" + std::to_string(i), "b" + std::to_string(j)});
  return make_graph("K33", {"a0", "a1", "a2", "b0", "b1", "b2"}, std::move(edges));
}

inline GraphWithFins cycle(int n, const std::string& name) {
  std::vector<std::string> vs;
  std::vector<fincover::EdgeRec> es;
  for (int i = 0; i < n; ++i) vs.push_back("c" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    es.push_back({"d" + std::to_string(i), vs[i], vs[(i + 1) % n]});
  return make_graph(name, std::move(vs), std::move(es));
}

inline GraphWithFins c5() { return cycle(5, "C5"); }

// One vertex, two loop petals, a length-1 fin around petal a.
inline GraphWithFins rose2a() {
  return make_graph("ROSE2A", {"v"}, {{"a", "v", "v"}, {"b", "v", "v"}},
                    {{{"a", true}}});
}

// Hexagon whose single fin wraps the whole cycle: the classical double cover
// of TRI3 (vertex i lies over v(i mod 3)).
inline GraphWithFins hex6() {
  std::vector<std::string> vs;
  std::vector<fincover::EdgeRec> es;
  std::vector<Dart> fin;
  for (int i = 0; i < 6; ++i) vs.push_back("w" + std::to_string(i));
  for (int i = 0; i < 6; ++i) {
    es.push_back({"h" + std::to_string(i), vs[i], vs[(i + 1) % 6]});
    fin.push_back({"h" + std::to_string(i), true});
  }
  return make_graph("HEX6", std::move(vs), std::move(es), {fin});
}

inline fincover::CellMaps hex6_to_tri3_maps() {
  fincover::CellMaps m;
  m.cover_name = "HEX6";
  m.base_name = "TRI3";
  for (int i = 0; i < 6; ++i) {
    m.vertex_map["w" + std::to_string(i)] = "v" + std::to_string(i % 3);
    m.edge_map["h" + std::to_string(i)] = {"e" + std::to_string(i % 3), true};
  }
  m.fin_map["f0"] = {"f0", +1, 0};
  return m;
}

}  // namespace fixtures
