#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "fincover/complex.hpp"

namespace fincover {

enum class CellKind : int { Vertex = 0, Dart = 1, Corner = 2, Square = 3 };

std::string to_string(CellKind k);

// Relation tags entering refinement signatures.  kRev* are the reverse
// directions of the incidences (a cell also sees who points at it).
enum RelTag : int {
  kDartTail = 0,
  kDartHead,
  kDartReverse,
  kCornerVertex,
  kCornerDart,  // used for both darts of the (unordered) corner pair
  kSquareDart,
  kSquareOrigin,
  kSquareTerminus,
  kRevDartTail,
  kRevDartHead,
  kRevCornerVertex,
  kRevCornerDart,
  kRevSquareDart,
  kRevSquareOrigin,
  kRevSquareTerminus,
};

// The stable joint colouring of two complexes.  Colour ids are canonical:
// they are derived from signature content only, so relabeling cells of either
// complex yields the identical colouring on corresponding cells.
struct Colouring {
  struct SigEntry {
    int tag;
    int colour;
    friend auto operator<=>(const SigEntry&, const SigEntry&) = default;
  };
  struct ColourInfo {
    CellKind kind;
    int initial;                     // initial (type x flag) colour
    std::vector<SigEntry> signature;  // relations under the final colouring
  };

  // colour per cell, indexed like ComplexView, per complex 0/1
  std::array<std::vector<int>, 2> vertex_colour, dart_colour, corner_colour, square_colour;
  int colour_count = 0;
  int rounds = 0;                      // refinement rounds executed
  std::vector<int> colours_per_round;  // audit trail: class count per round
  std::vector<ColourInfo> info;        // per colour, the defining signature

  CellKind kind_of(int colour) const { return info[colour].kind; }
};

Colouring stable_colouring(const ComplexView& x1, const ComplexView& x2);
Colouring stable_colouring(const GraphWithFins& x1, const GraphWithFins& x2);

// The colour quotient: one node per colour with incidence data and per-complex
// multiplicities.  An edge colour is the colour of the edge's forward dart.
struct ColourGraph {
  struct VertexColour {
    int colour;
    bool midpoint;
    long mult[2];
  };
  struct EdgeColour {
    int colour;
    int tail_colour;
    int head_colour;
    long mult[2];
  };
  struct CornerColour {
    int colour;
    int vertex_colour;
    long mult[2];
  };
  struct SquareColour {
    int colour;
    int edge_colour;
    int origin_colour;
    int terminus_colour;
    long mult[2];
  };

  std::vector<VertexColour> vertex_colours;
  std::vector<EdgeColour> edge_colours;
  std::vector<CornerColour> corner_colours;
  std::vector<SquareColour> square_colours;

  const VertexColour& vertex_colour(int colour) const;
  const EdgeColour& edge_colour(int colour) const;
};

ColourGraph colour_quotient(const ComplexView& x1, const ComplexView& x2, const Colouring& c);

// Produced when some colour class is empty on one side: the two complexes
// cannot have isomorphic universal covers.
struct MismatchCertificate {
  int colour = -1;
  CellKind kind = CellKind::Vertex;
  long mult1 = 0;
  long mult2 = 0;
  std::string witness;       // a cell of that colour on the non-empty side
  std::string witness_side;  // name of the complex owning the witness
  std::string to_string() const;
};

// Everything downstream stages need when the equivalence check succeeds.
struct CommonBase {
  GraphWithFins sub1, sub2;
  SubdivisionRecord rec1, rec2;
  Colouring colouring;  // of (sub1, sub2)
  ColourGraph quotient;
};

using EquivalenceResult = std::variant<CommonBase, MismatchCertificate>;

// Subdivides both inputs, refines jointly and checks that every colour has
// positive multiplicity on both sides.
EquivalenceResult check_equivalence(const GraphWithFins& x1, const GraphWithFins& x2);

}  // namespace fincover
