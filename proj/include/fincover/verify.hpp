#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "fincover/complex.hpp"

namespace fincover {

struct CoverViolation {
  std::string cell;  // first failing cell (deterministic order)
  std::string message;
  std::string to_string() const { return cell + ": " + message; }
};

// The verified content of a covering map: local bijections, winding degrees
// and the global degree.
struct CoverCertificate {
  long degree = 0;
  std::map<VertexId, std::vector<std::pair<Dart, Dart>>> dart_bijections;
  std::map<VertexId, std::vector<std::pair<CellPos, CellPos>>> corner_bijections;
  std::map<FinId, long> windings;  // per cover fin
};

using CoverResult = std::variant<CoverCertificate, CoverViolation>;

// Local characterization of covering maps, re-derived from scratch: incidence
// preservation, dart and corner bijections on every star, fin alignment with
// integer winding, and exact fibre counts.  The cover may be disconnected;
// the base must be valid (and hence connected).
CoverResult check_cover(const GraphWithFins& cover, const CellMaps& maps,
                        const GraphWithFins& base);

using CommonResult =
    std::variant<std::pair<CoverCertificate, CoverCertificate>, CoverViolation>;

// Both covering maps must certify and the cover must be connected.
CommonResult check_common(const GraphWithFins& cover, const CellMaps& phi1,
                          const GraphWithFins& x1, const CellMaps& phi2,
                          const GraphWithFins& x2);

// Rooted tree of non-backtracking edge paths (universal-cover ball).  Only
// for fin-free graphs.
struct RootedTree {
  struct Node {
    int parent = -1;
    std::vector<int> children;
  };
  std::vector<Node> nodes;  // node 0 is the root

  std::size_t size() const { return nodes.size(); }
  std::string canonical_code() const;  // AHU bracket encoding
};

RootedTree unfold_ball(const GraphWithFins& x, const VertexId& v, int radius);

// Canonical ball codes without materializing the tree, so large radii are
// cheap.  Codes interned through a shared table compare across graphs:
// ball_code(x1, v, r, t) == ball_code(x2, w, r, t) iff the radius-r balls are
// isomorphic as rooted trees.
struct BallCodeInterner {
  std::map<std::vector<long>, long> table;
  long intern(std::vector<long> key);
};

long ball_code(const GraphWithFins& x, const VertexId& v, int radius, BallCodeInterner& interner);

// Codes for every vertex (indexed like ComplexView) in one level computation.
std::vector<long> ball_codes(const GraphWithFins& x, int radius, BallCodeInterner& interner);

}  // namespace fincover
