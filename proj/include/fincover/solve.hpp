#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "fincover/pairs.hpp"

namespace fincover {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// The gluing equations: one row per (non-vacuous) face pair demanding equal
// total weight on its two sides.  Entries are +1 (left) / -1 (right), stored
// sparse as column index lists.
struct GluingSystem {
  struct Row {
    std::string id;  // face pair id
    std::vector<int> plus;
    std::vector<int> minus;
  };
  std::vector<Row> rows;
  std::size_t n_cols = 0;
  std::vector<std::string> col_ids;  // poly pair ids

  // exact zero-residual check; also demands strict positivity and size match
  bool satisfied_by(const std::vector<Int>& omega) const;
};

GluingSystem build_system(const std::vector<PolyPair>& pairs, const std::vector<FacePair>& faces,
                          const IncidenceTable& inc);

// A strictly positive integer solution of the gluing system.
struct Weighting {
  std::vector<Int> omega;  // per poly pair
};

// Positive rationals per colour class standing in for the Haar measures of
// star and face stabilizers: m(tail) * nL = m_face = m(head) * nR.
struct MeasureAssignment {
  std::map<int, Rational> vertex_colour_measure;
  std::map<int, Rational> edge_colour_measure;
};

// A cycle of edge colours whose ratio product is not 1.
struct RatioInconsistency {
  std::vector<int> cycle_edge_colours;
  std::string message;
};

using MeasureResult = std::variant<MeasureAssignment, RatioInconsistency>;

// Fixes m = 1 at the smallest vertex colour of each component and propagates
// the ratios nL/nR along a spanning tree, then verifies every non-tree edge
// colour.  `counts` holds (nL, nR) per edge colour (must be per-colour
// constants; asserted upstream).
MeasureResult solve_measure(const ColourGraph& cg,
                            const std::map<int, std::pair<long, long>>& counts);

// omega(P) = m(colour(u1(P))), scaled to coprime positive integers.
Weighting weights_from_measure(const MeasureAssignment& ma, const ComplexView& x1,
                               const Colouring& c, const std::vector<PolyPair>& pairs);

// Farkas-style certificate: a row combination z with z^T M >= 0 componentwise
// and sum(z^T M) > 0, so M x = 0 has no solution with x >= 1.
struct InfeasibleCertificate {
  std::vector<Rational> row_combination;
  std::string message;
};

using KernelResult = std::variant<Weighting, InfeasibleCertificate>;

// Exact-rational simplex: minimizes the total weight subject to M omega = 0,
// omega >= 1, then scales to coprime integers.  Deterministic (Bland's rule).
KernelResult solve_positive_kernel(const GluingSystem& sys);

}  // namespace fincover
