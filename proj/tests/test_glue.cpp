#include "fincover/glue.hpp"

#include <set>

#include "doctest.h"
#include "fincover/verify.hpp"
#include "fixtures.hpp"

using namespace fincover;

namespace {

struct Stage {
  std::pair<GraphWithFins, SubdivisionRecord> d1, d2;
  ComplexView v1, v2;
  Colouring c;
  PolyPairEnumeration P;
  std::vector<FacePair> F;
  IncidenceTable inc;

  Stage(const GraphWithFins& a, const GraphWithFins& b)
      : d1(subdivide(a)),
        d2(subdivide(b)),
        v1(d1.first),
        v2(d2.first),
        c(stable_colouring(v1, v2)),
        P(enumerate_poly_pairs(v1, v2, c)),
        F(enumerate_face_pairs(v1, v2, c)),
        inc(incidences(v1, v2, c, P.pairs, F)) {}
  Stage(const Stage&) = delete;

  const GraphWithFins& s1 = d1.first;
  const GraphWithFins& s2 = d2.first;
  const SubdivisionRecord& r1 = d1.second;
  const SubdivisionRecord& r2 = d2.second;

  Weighting measure_weights() const {
    auto q = colour_quotient(v1, v2, c);
    auto counts = edge_colour_counts(v1, c, F, inc);
    REQUIRE(counts.constant);
    REQUIRE(counts.positive);
    auto res = solve_measure(q, counts.per_edge_colour);
    REQUIRE(std::holds_alternative<MeasureAssignment>(res));
    return weights_from_measure(std::get<MeasureAssignment>(res), v1, c, P.pairs);
  }
};

void expect_certified(const GraphWithFins& cover, const CellMaps& maps,
                      const GraphWithFins& base, long degree) {
  auto res = check_cover(cover, maps, base);
  REQUIRE_MESSAGE(std::holds_alternative<CoverCertificate>(res),
                  std::get<CoverViolation>(res).to_string());
  CHECK(std::get<CoverCertificate>(res).degree == degree);
}

}  // namespace

TEST_CASE("SEG assembles into two copies of the subdivided segment") {
  Stage s(fixtures::seg(), fixtures::seg());
  auto w = s.measure_weights();
  auto cover = assemble(s.v1, s.v2, s.P.pairs, s.F, s.inc, w, 0);

  long originals = 0, midpoints = 0;
  for (const auto& v : cover.cover.vertices)
    (cover.cover.midpoints.count(v) ? midpoints : originals) += 1;
  CHECK(originals == 4);
  CHECK(midpoints == 2);

  expect_certified(cover.cover, cover.phi1, s.s1, 2);
  expect_certified(cover.cover, cover.phi2, s.s2, 2);

  auto comps = components(cover.cover);
  REQUIRE(comps.size() == 2);
  auto piece = extract_component(cover);
  CHECK(isomorphic(piece.cover, s.s1));
  expect_certified(piece.cover, piece.phi1, s.s1, 1);
}

TEST_CASE("K4/K33 assembles with the counts of the classical fixture") {
  Stage s(fixtures::k4(), fixtures::k33());
  auto w = s.measure_weights();
  auto cover = assemble(s.v1, s.v2, s.P.pairs, s.F, s.inc, w, 0);

  CHECK(cover.cover.vertices.size() == 360);  // 144 * 1 + 108 * 2
  long originals = 0;
  for (const auto& v : cover.cover.vertices)
    if (!cover.cover.midpoints.count(v)) ++originals;
  CHECK(originals == 144);

  expect_certified(cover.cover, cover.phi1, s.s1, 36);  // 144 / 4
  expect_certified(cover.cover, cover.phi2, s.s2, 24);  // 144 / 6

  // provenance: every star block traces back to a (pair, copy)
  for (const auto& v : cover.cover.vertices) CHECK(cover.provenance.count(v) == 1);

  auto piece = extract_component(cover);
  long piece_originals = 0;
  for (const auto& v : piece.cover.vertices)
    if (!piece.cover.midpoints.count(v)) ++piece_originals;
  CHECK(piece_originals % 12 == 0);  // 4 | n and 6 | n
  auto common = check_common(piece.cover, piece.phi1, s.s1, piece.phi2, s.s2);
  bool certified = std::holds_alternative<std::pair<CoverCertificate, CoverCertificate>>(common);
  CHECK(certified);
}

TEST_CASE("different seeds still verify") {
  Stage s(fixtures::tri3(), fixtures::tri3());
  auto w = s.measure_weights();
  for (std::uint64_t seed : {0ull, 1ull, 5ull}) {
    CAPTURE(seed);
    auto cover = assemble(s.v1, s.v2, s.P.pairs, s.F, s.inc, w, seed);
    auto r1 = check_cover(cover.cover, cover.phi1, s.s1);
    auto r2 = check_cover(cover.cover, cover.phi2, s.s2);
    CHECK(std::holds_alternative<CoverCertificate>(r1));
    CHECK(std::holds_alternative<CoverCertificate>(r2));
  }
}

TEST_CASE("assembled covers of finned complexes unsubdivide and verify") {
  Stage s(fixtures::tri3(), fixtures::hex6());
  auto w = s.measure_weights();
  auto cover = assemble(s.v1, s.v2, s.P.pairs, s.F, s.inc, w, 0);
  auto piece = extract_component(cover);
  auto [z, maps] = unsubdivide_all(piece.cover, {{&s.r1, &piece.phi1}, {&s.r2, &piece.phi2}});
  auto common = check_common(z, maps[0], fixtures::tri3(), maps[1], fixtures::hex6());
  bool certified = std::holds_alternative<std::pair<CoverCertificate, CoverCertificate>>(common);
  REQUIRE_MESSAGE(certified, std::get<CoverViolation>(common).to_string());
  const auto& [c1, c2] = std::get<std::pair<CoverCertificate, CoverCertificate>>(common);
  CHECK(c1.degree * 3 == c2.degree * 6);
}

TEST_CASE("assemble rejects bad weightings") {
  Stage s(fixtures::seg(), fixtures::seg());
  Weighting bad;
  bad.omega.assign(s.P.pairs.size(), 1);
  bad.omega[0] = 2;  // breaks some equation
  CHECK_THROWS_AS(assemble(s.v1, s.v2, s.P.pairs, s.F, s.inc, bad, 0), Error);
  Weighting zero;
  zero.omega.assign(s.P.pairs.size(), 0);
  CHECK_THROWS_AS(assemble(s.v1, s.v2, s.P.pairs, s.F, s.inc, zero, 0), Error);
}

TEST_CASE("n_fold_cover") {
  SUBCASE("n = 1 reproduces the input") {
    for (const auto& x : {fixtures::tri3(), fixtures::rose2a(), fixtures::k4()}) {
      auto r = n_fold_cover(x, 1, 0);
      CHECK(isomorphic(r.cover, x));
    }
  }
  SUBCASE("TRI3 squares double at n = 2") {
    auto r = n_fold_cover(fixtures::tri3(), 2, 9);
    std::size_t total = 0;
    for (const auto& f : r.cover.fins) total += f.darts.size();
    CHECK(total == 6);
    expect_certified(r.cover, r.map, fixtures::tri3(), 2);
  }
  SUBCASE("degree three at any seed") {
    for (std::uint64_t seed : {0ull, 3ull}) {
      auto r = n_fold_cover(fixtures::tri3(), 3, seed);
      expect_certified(r.cover, r.map, fixtures::tri3(), 3);
      auto k = n_fold_cover(fixtures::k4(), 3, seed);
      expect_certified(k.cover, k.map, fixtures::k4(), 3);
    }
  }
}
