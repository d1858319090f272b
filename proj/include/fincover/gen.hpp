#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "fincover/complex.hpp"

namespace fincover {

// A permutation voltage on a base complex: each edge carries a permutation of
// the sheets {0..degree-1}.  Lifts are degree-n covers by construction, which
// makes them the generator for guaranteed-solvable instances.
struct VoltageAssignment {
  GraphWithFins base;
  int degree = 1;
  std::map<EdgeId, std::vector<int>> voltages;  // edge -> image of each sheet
};

// The lifted complex and its covering map onto the base.  The lift can be
// disconnected; it is self-checked against verify::check_cover before return.
// Fins lift along holonomy cycles: a cycle of length k yields a fin of length
// k * (base fin length) with winding k.
std::pair<GraphWithFins, CellMaps> lift(const VoltageAssignment& va);

struct GenParams {
  int max_vertices = 8;
  int max_edges = 12;
  int max_fins = 2;
  int max_fin_length = 6;
  int degree1 = 2;
  int degree2 = 3;
  int max_base_degree = 4;  // keeps star-isomorphism counts tractable
};

// Random connected base, two independent voltage lifts (one connected
// component each), cell ids relabeled and shuffled so that the pipeline
// cannot exploit id correlations.  Deterministic per seed.  The outputs have
// isomorphic universal covers by construction.
std::pair<GraphWithFins, GraphWithFins> gen_instance(const GenParams& params, std::uint64_t seed);

}  // namespace fincover
