#include "fincover/gen.hpp"

#include "doctest.h"
#include "fincover/io.hpp"
#include "fincover/refine.hpp"
#include "fixtures.hpp"

using namespace fincover;

namespace {

VoltageAssignment tri3_voltages(int n, std::map<EdgeId, std::vector<int>> volts) {
  VoltageAssignment va;
  va.base = fixtures::tri3();
  va.degree = n;
  va.voltages = std::move(volts);
  return va;
}

// Independent holonomy oracle: cycle structure of the permutation product
// around a fin circle determines the lifted fins.
std::vector<int> holonomy_cycle_lengths(const VoltageAssignment& va, const FinCircle& fin) {
  std::vector<int> inv_scratch(va.degree);
  auto apply = [&](const Dart& d, int sheet) {
    const auto& perm = va.voltages.at(d.edge);
    if (d.forward) return perm[sheet];
    for (int i = 0; i < va.degree; ++i)
      if (perm[i] == sheet) return i;
    throw Error("bad permutation");
  };
  std::vector<int> h(va.degree);
  for (int i = 0; i < va.degree; ++i) {
    int s = i;
    for (const auto& d : fin.darts) s = apply(d, s);
    h[i] = s;
  }
  std::vector<int> lengths;
  std::vector<char> seen(va.degree, 0);
  for (int i = 0; i < va.degree; ++i) {
    if (seen[i]) continue;
    int len = 0, s = i;
    while (!seen[s]) {
      seen[s] = 1;
      s = h[s];
      ++len;
    }
    lengths.push_back(len);
  }
  return lengths;
}

}  // namespace

TEST_CASE("degree-1 lifts reproduce the base") {
  for (const auto& x : {fixtures::tri3(), fixtures::rose2a(), fixtures::k4()}) {
    VoltageAssignment va;
    va.base = x;
    va.degree = 1;
    for (const auto& e : x.edges) va.voltages[e.id] = {0};
    auto [up, maps] = lift(va);
    CHECK(isomorphic(up, x));
  }
}

TEST_CASE("a transposition holonomy doubles the fin") {
  auto va = tri3_voltages(
      2, {{"e0", {1, 0}}, {"e1", {0, 1}}, {"e2", {0, 1}}});
  auto [up, maps] = lift(va);
  CHECK(up.vertices.size() == 6);
  REQUIRE(up.fins.size() == 1);
  CHECK(up.fins[0].darts.size() == 6);
  CHECK(isomorphic(up, fixtures::hex6()));
  // oracle agreement
  auto lens = holonomy_cycle_lengths(va, va.base.fins[0]);
  REQUIRE(lens.size() == 1);
  CHECK(lens[0] == 2);
}

TEST_CASE("identity holonomy splits the fin into sheets") {
  auto va = tri3_voltages(
      3, {{"e0", {0, 1, 2}}, {"e1", {0, 1, 2}}, {"e2", {0, 1, 2}}});
  auto [up, maps] = lift(va);
  CHECK(up.vertices.size() == 9);
  CHECK(up.fins.size() == 3);
  for (const auto& f : up.fins) CHECK(f.darts.size() == 3);
}

TEST_CASE("lift sizes and fin lengths follow the holonomy cycles") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng.below(3));
    VoltageAssignment va;
    va.base = fixtures::tri3();
    va.degree = n;
    for (const auto& e : va.base.edges) {
      auto p = rng.permutation(n);
      va.voltages[e.id] = std::vector<int>(p.begin(), p.end());
    }
    auto [up, maps] = lift(va);
    CHECK(up.vertices.size() == va.base.vertices.size() * n);
    auto lens = holonomy_cycle_lengths(va, va.base.fins[0]);
    std::multiset<std::size_t> expect, got;
    for (int l : lens) expect.insert(static_cast<std::size_t>(l) * 3);
    for (const auto& f : up.fins) got.insert(f.darts.size());
    CHECK(expect == got);
  }
}

TEST_CASE("gen_instance is deterministic and well-formed") {
  GenParams p;
  auto [a1, b1] = gen_instance(p, 7);
  auto [a2, b2] = gen_instance(p, 7);
  Instance i1{{a1, b1}, {}};
  Instance i2{{a2, b2}, {}};
  CHECK(serialize_instance(i1) == serialize_instance(i2));
  CHECK(validate(a1).ok());
  CHECK(validate(b1).ok());
  auto [a3, b3] = gen_instance(p, 8);
  (void)b3;
  CHECK(serialize_instance(Instance{{a1}, {}}) != serialize_instance(Instance{{a3}, {}}));
}

TEST_CASE("generated pairs pass the equivalence check") {
  GenParams p;
  for (std::uint64_t seed : {0ull, 1ull, 2ull, 3ull, 11ull}) {
    auto [a, b] = gen_instance(p, seed);
    CAPTURE(seed);
    auto res = check_equivalence(a, b);
    CHECK(std::holds_alternative<CommonBase>(res));
  }
}
