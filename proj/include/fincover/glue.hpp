#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "fincover/solve.hpp"

namespace fincover {

// The assembled complex over the two subdivided bases, with both covering
// maps and the provenance of every star block.
struct AssembledCover {
  GraphWithFins cover;
  CellMaps phi1, phi2;
  std::map<VertexId, std::pair<std::string, long>> provenance;  // (pair id, copy)
};

// Glues omega(P) copies of every polyhedral pair along the face pairs.  For
// each face pair, left and right copies are matched by sorted zip when
// seed == 0 and by a seeded shuffle otherwise (any bijection yields a valid
// cover).  The weighting is re-checked against the gluing equations first.
AssembledCover assemble(const ComplexView& x1, const ComplexView& x2,
                        const std::vector<PolyPair>& pairs, const std::vector<FacePair>& faces,
                        const IncidenceTable& inc, const Weighting& w, std::uint64_t seed);

// Connected component of the anchor (default: smallest component, ties by
// smallest vertex id), with maps and provenance restricted and fins
// renumbered canonically.
AssembledCover extract_component(const AssembledCover& cover, const VertexId& anchor = "");

struct CoverWithMap {
  GraphWithFins cover;
  CellMaps map;
};

// The single-complex construction: n copies of every star, glued along each
// edge by a seeded bijection (seed 0 = identity matching).  Local
// verification runs before return.
CoverWithMap n_fold_cover(const GraphWithFins& x, int n, std::uint64_t seed);

}  // namespace fincover
