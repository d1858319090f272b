#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fincover/refine.hpp"

namespace fincover {

// Enumeration would exceed its configured cap.  Carries a size report.
class CapError : public Error {
 public:
  explicit CapError(const std::string& what) : Error(what) {}
};

inline constexpr std::size_t kDefaultPairCap = 1000000;

// A colour-preserving isomorphism between two stars: a dart bijection plus a
// compatible corner bijection.  Encoded positionally against darts_at(u1) /
// corners_at(u1); values are global dart / corner indices in the target view.
struct StarIso {
  std::vector<int> dart_map;
  std::vector<int> corner_map;
  friend bool operator==(const StarIso&, const StarIso&) = default;
  friend auto operator<=>(const StarIso&, const StarIso&) = default;
};

// (u1, u2, sigma) with matching colours; the gluing blocks of the cover.
struct PolyPair {
  std::string id;
  int u1 = -1;  // vertex index in the first view
  int u2 = -1;  // vertex index in the second view
  StarIso iso;
};

// (e1, e2, tau): tau maps positions of squares_over(e1) to positions of
// squares_over(e2), preserving square colours.
struct FacePair {
  std::string id;
  int e1 = -1;
  int e2 = -1;
  std::vector<int> tau;
};

// All colour-preserving star isomorphisms star(u1) -> star(u2), in
// deterministic order.  The colouring must come from stable_colouring on the
// pair of complexes the views belong to (u1 on side 0, u2 on side 1).
std::vector<StarIso> enumerate_star_isos(const ComplexView& x1, const ComplexView& x2, int u1,
                                         int u2, const Colouring& c,
                                         std::size_t max_count = kDefaultPairCap);

struct PolyPairEnumeration {
  std::vector<PolyPair> pairs;
  // star-iso counts must be constant within a vertex colour class; when they
  // are not, the measure solver may not be used and this report says why.
  bool iso_counts_constant = true;
  std::string homogeneity_report;
};

PolyPairEnumeration enumerate_poly_pairs(const ComplexView& x1, const ComplexView& x2,
                                         const Colouring& c,
                                         std::size_t cap = kDefaultPairCap);

std::vector<FacePair> enumerate_face_pairs(const ComplexView& x1, const ComplexView& x2,
                                           const Colouring& c,
                                           std::size_t cap = kDefaultPairCap);

// Left/right incidence between face pairs and polyhedral pairs: a pair sits
// on the left of the restriction of each of its tail-side slots and on the
// right of each head-side slot.
struct IncidenceTable {
  std::vector<std::vector<int>> left;   // per face pair: poly pair indices
  std::vector<std::vector<int>> right;
  // the slot behind each entry: the global x1 dart of that pair's star
  std::vector<std::vector<int>> left_darts;
  std::vector<std::vector<int>> right_darts;
};

IncidenceTable incidences(const ComplexView& x1, const ComplexView& x2, const Colouring& c,
                          const std::vector<PolyPair>& pairs,
                          const std::vector<FacePair>& faces);

// (nL, nR) of one face pair; throws if either side is empty (the colouring
// admitted a pair with no gluing partner: "possible inadmissible pair").
std::pair<long, long> extension_counts(const IncidenceTable& inc, int face_row);

// (nL, nR) collected per edge colour, with the homogeneity verdicts the
// measure solver depends on.
struct EdgeColourCounts {
  std::map<int, std::pair<long, long>> per_edge_colour;
  bool constant = true;   // nL/nR identical across each edge colour class
  bool positive = true;   // no face pair has an empty side
  std::string report;     // human-readable reason when a flag is false
};

EdgeColourCounts edge_colour_counts(const ComplexView& x1, const Colouring& c,
                                    const std::vector<FacePair>& faces,
                                    const IncidenceTable& inc);

// Colour preservation overapproximates admissibility: a face pair can have a
// realizable tau on one side only, and its partners then have no gluing
// partner.  This removes such pairs to a fixpoint.  Pairs admissible in the
// paper's sense always survive: their slot restrictions are admissible face
// pairs with admissible partners on both sides.
struct PruneResult {
  std::vector<PolyPair> pairs;  // survivors, original ids kept
  IncidenceTable inc;           // recomputed over (pairs, faces)
  std::size_t removed = 0;
  int rounds = 0;
};

PruneResult prune_to_gluable_core(const ComplexView& x1, const ComplexView& x2,
                                  const Colouring& c, std::vector<PolyPair> pairs,
                                  const std::vector<FacePair>& faces);

}  // namespace fincover
