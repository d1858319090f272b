#include "fincover/complex.hpp"

#include <algorithm>
#include <map>

#include "doctest.h"
#include "fixtures.hpp"

using namespace fincover;

namespace {

// Independent scan oracle: fin visits at a vertex, counted straight off the
// circles (no ComplexView involved).
int visits_at_oracle(const GraphWithFins& x, const VertexId& v) {
  std::map<EdgeId, const EdgeRec*> emap;
  for (const auto& e : x.edges) emap[e.id] = &e;
  int n = 0;
  for (const auto& f : x.fins)
    for (const auto& d : f.darts) {
      const EdgeRec* e = emap.at(d.edge);
      if ((d.forward ? e->tail : e->head) == v) ++n;
    }
  return n;
}

int squares_over_oracle(const GraphWithFins& x, const EdgeId& e) {
  int n = 0;
  for (const auto& f : x.fins)
    for (const auto& d : f.darts)
      if (d.edge == e) ++n;
  return n;
}

}  // namespace

TEST_CASE("validate accepts the minimal complex") {
  CHECK(validate(fixtures::seg()).ok());
  CHECK(validate(fixtures::tri3()).ok());
  CHECK(validate(fixtures::rose2a()).ok());
}

TEST_CASE("validate flags an immediately reversed fin dart") {
  auto x = make_graph("bad", {"v"}, {{"a", "v", "v"}},
                      {{{"a", true}, {"a", false}}});
  auto rep = validate(x);
  REQUIRE_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.message.find("backtracking at position 1") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("a length-1 loop fin is cyclically reduced") {
  // wrap-around pair (a, a) is not a reversal
  auto x = make_graph("ok", {"v"}, {{"a", "v", "v"}}, {{{"a", true}}});
  CHECK(validate(x).ok());
}

TEST_CASE("validate reports structural problems") {
  auto dangling = make_graph("d", {"u"}, {{"e", "u", "w"}});
  CHECK_FALSE(validate(dangling).ok());

  auto disconnected = make_graph("dc", {"u", "v", "w"}, {{"e", "u", "v"}});
  auto rep = validate(disconnected);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations.front().message.find("disconnected") != std::string::npos);

  auto empty = make_graph("e", {"u"}, {});
  CHECK_FALSE(validate(empty).ok());

  auto noncomp = make_graph("nc", {"u", "v"}, {{"e", "u", "v"}, {"g", "u", "v"}},
                            {{{"e", true}, {"g", true}}});
  rep = validate(noncomp);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations.front().message.find("non-composable") != std::string::npos);
}

TEST_CASE("subdivide splits every edge and doubles fins") {
  auto [seg2, rec_seg] = subdivide(fixtures::seg());
  CHECK(seg2.vertices.size() == 3);
  CHECK(seg2.edges.size() == 2);
  CHECK(seg2.fins.empty());
  CHECK(rec_seg.edges.size() == 1);

  auto [tri2, rec_tri] = subdivide(fixtures::tri3());
  CHECK(tri2.vertices.size() == 6);
  CHECK(tri2.edges.size() == 6);
  REQUIRE(tri2.fins.size() == 1);
  CHECK(tri2.fins[0].darts.size() == 6);
  CHECK(ComplexView(tri2).n_squares() == 6);
  CHECK(rec_tri.fin_lengths.at("f0") == 3);

  auto [k42, rec_k4] = subdivide(fixtures::k4());
  CHECK(k42.vertices.size() == 10);
  CHECK(k42.edges.size() == 12);

  CHECK(validate(seg2).ok());
  CHECK(validate(tri2).ok());
  CHECK(validate(k42).ok());
}

TEST_CASE("subdivided edges run from original to midpoint") {
  for (const auto& x : {fixtures::tri3(), fixtures::k4(), fixtures::rose2a()}) {
    auto [y, rec] = subdivide(x);
    for (const auto& e : y.edges) {
      CHECK_FALSE(y.midpoints.count(e.tail));
      CHECK(y.midpoints.count(e.head));
    }
    // fin lengths double
    for (std::size_t i = 0; i < x.fins.size(); ++i)
      CHECK(y.fins[i].darts.size() == 2 * x.fins[i].darts.size());
  }
}

TEST_CASE("unsubdivide inverts subdivide up to relabeling") {
  for (const auto& x :
       {fixtures::seg(), fixtures::tri3(), fixtures::k4(), fixtures::rose2a(),
        fixtures::hex6(), fixtures::tri3_doubled()}) {
    auto [y, rec] = subdivide(x);
    auto [z, maps] = unsubdivide(y, rec, identity_maps(y));
    CHECK(validate(z).ok());
    CHECK(isomorphic(z, x));
    // and the maps point every merged cell at a real base cell
    for (const auto& [k, v] : maps.vertex_map) {
      (void)k;
      CHECK(std::find(x.vertices.begin(), x.vertices.end(), v) != x.vertices.end());
    }
  }
}

TEST_CASE("unsubdivide rejects a midpoint fibre of degree 3") {
  auto [seg2, rec] = subdivide(fixtures::seg());
  (void)seg2;
  auto fake = make_graph("fake", {"a1", "a2", "a3", "m"},
                         {{"e1", "a1", "m"}, {"e2", "a2", "m"}, {"e3", "a3", "m"}});
  CellMaps maps;
  maps.vertex_map = {{"a1", "u"}, {"a2", "v"}, {"a3", "u"}, {"m", "e.m"}};
  maps.edge_map = {{"e1", {"e.a", true}}, {"e2", {"e.b", true}}, {"e3", {"e.a", true}}};
  CHECK_THROWS_WITH_AS(unsubdivide(fake, rec, maps),
                       doctest::Contains("3 darts"), Error);
}

TEST_CASE("star_at exposes darts and corners") {
  auto k4 = fixtures::k4();
  for (const auto& v : k4.vertices) {
    auto s = star_at(k4, v);
    CHECK(s.darts.size() == 3);
    CHECK(s.corners.empty());
  }

  auto tri = fixtures::tri3();
  for (const auto& v : tri.vertices) {
    auto s = star_at(tri, v);
    CHECK(s.darts.size() == 2);
    CHECK(static_cast<int>(s.corners.size()) == visits_at_oracle(tri, v));
    CHECK(s.corners.size() == 1);
  }

  auto rose = fixtures::rose2a();
  auto s = star_at(rose, "v");
  CHECK(s.darts.size() == 4);
  REQUIRE(s.corners.size() == 1);
  CHECK(static_cast<int>(s.corners.size()) == visits_at_oracle(rose, "v"));
  // the corner's dart pair consists of the two a-based darts
  auto pair = std::minmax(s.corners[0].in_rev, s.corners[0].out);
  CHECK(pair.first == Dart{"a", false});
  CHECK(pair.second == Dart{"a", true});

  CHECK_THROWS_AS(star_at(k4, "nope"), Error);
}

TEST_CASE("face_at lists the squares over an edge") {
  auto k4 = fixtures::k4();
  for (const auto& e : k4.edges) CHECK(face_at(k4, e.id).squares.empty());

  auto tri = fixtures::tri3();
  for (const auto& e : tri.edges) {
    auto f = face_at(tri, e.id);
    CHECK(static_cast<int>(f.squares.size()) == squares_over_oracle(tri, e.id));
    CHECK(f.squares.size() == 1);
  }

  auto dbl = fixtures::tri3_doubled();
  for (const auto& e : dbl.edges)
    CHECK(face_at(dbl, e.id).squares.size() == 2);

  CHECK_THROWS_AS(face_at(k4, "nope"), Error);
}

TEST_CASE("stars and faces partition the square incidences") {
  for (const auto& x : {fixtures::tri3(), fixtures::rose2a(), fixtures::hex6(),
                        fixtures::tri3_doubled()}) {
    ComplexView view(x);
    // total squares = total fin length
    std::size_t total = 0;
    for (const auto& f : x.fins) total += f.darts.size();
    CHECK(view.n_squares() == static_cast<int>(total));
    // every square appears in exactly one face
    int in_faces = 0;
    for (int e = 0; e < view.n_edges(); ++e) in_faces += static_cast<int>(view.squares_over(e).size());
    CHECK(in_faces == view.n_squares());
    // every square hangs off its origin corner on one side and its terminus
    // corner on the other
    for (int s = 0; s < view.n_squares(); ++s) {
      int o = view.square_origin(s), t = view.square_terminus(s);
      CHECK((view.corner_square_prev(o) == s || view.corner_square_next(o) == s));
      CHECK((view.corner_square_prev(t) == s || view.corner_square_next(t) == s));
    }
    // ... and each corner sits in exactly the two squares on its dart sides
    for (int c = 0; c < view.n_corners(); ++c) {
      CHECK(view.corner_square_along(c, view.corner_dart_in_rev(c)) ==
            view.corner_square_prev(c));
      CHECK(view.corner_square_along(c, view.corner_dart_out(c)) ==
            view.corner_square_next(c));
    }
  }
}

TEST_CASE("length-1 fin: the single corner carries both sides of its square") {
  ComplexView view(fixtures::rose2a());
  REQUIRE(view.n_squares() == 1);
  REQUIRE(view.n_corners() == 1);
  CHECK(view.square_origin(0) == 0);
  CHECK(view.square_terminus(0) == 0);
  CHECK(view.corner_square_prev(0) == 0);
  CHECK(view.corner_square_next(0) == 0);
}

TEST_CASE("canonical_circle is rotation and reversal invariant") {
  std::vector<Dart> c = {{"a", true}, {"b", false}, {"c", true}};
  auto canon = canonical_circle(c);
  std::vector<Dart> rot = {{"b", false}, {"c", true}, {"a", true}};
  CHECK(canonical_circle(rot) == canon);
  std::vector<Dart> rev = {{"c", false}, {"b", true}, {"a", false}};
  CHECK(canonical_circle(rev) == canon);
}

TEST_CASE("find_isomorphism matches relabeled complexes") {
  auto tri = fixtures::tri3();
  auto tri_rot = make_graph(
      "TRI3'", {"x", "y", "z"},
      {{"p", "x", "y"}, {"q", "y", "z"}, {"r", "z", "x"}},
      {{{"q", true}, {"r", true}, {"p", true}}});  // rotated fin listing
  auto iso = find_isomorphism(tri, tri_rot);
  REQUIRE(iso.has_value());
  CHECK(iso->vertex_map.size() == 3);

  // reversed fin traversal is the same complex
  auto tri_rev = make_graph(
      "TRI3r", {"x", "y", "z"},
      {{"p", "x", "y"}, {"q", "y", "z"}, {"r", "z", "x"}},
      {{{"r", false}, {"q", false}, {"p", false}}});
  CHECK(isomorphic(tri, tri_rev));

  CHECK_FALSE(isomorphic(fixtures::k4(), fixtures::k33()));
  CHECK_FALSE(isomorphic(fixtures::tri3(), fixtures::tri3_doubled()));
  CHECK(isomorphic(fixtures::rose2a(), fixtures::rose2a()));
}

TEST_CASE("components and restriction") {
  GraphWithFins two;
  two.name = "two";
  two.vertices = {"a", "b", "c", "d", "e"};
  two.edges = {{"e1", "a", "b"}, {"e2", "c", "d"}, {"e3", "d", "e"}};
  finalize(two);
  auto comps = components(two);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].size() == 2);  // smallest first
  auto small = component_of(two, "");
  CHECK(small.vertices == std::vector<VertexId>{"a", "b"});
  auto big = component_of(two, "d");
  CHECK(big.vertices.size() == 3);
  CHECK_THROWS_AS(component_of(two, "zz"), Error);
}
