#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fincover/util.hpp"

namespace fincover {

using VertexId = std::string;
using EdgeId = std::string;
using FinId = std::string;

// A directed traversal of an edge.  forward = tail -> head.
struct Dart {
  EdgeId edge;
  bool forward = true;

  Dart reverse() const { return {edge, !forward}; }
  friend bool operator==(const Dart& a, const Dart& b) = default;
  friend auto operator<=>(const Dart& a, const Dart& b) = default;
};

std::string to_string(const Dart& d);

struct EdgeRec {
  EdgeId id;
  VertexId tail;
  VertexId head;
};

// A fin circle: a cyclically reduced closed edge-path carrying a strip of
// squares.  Ids are positional ("f0", "f1", ...) and reassigned by finalize().
struct FinCircle {
  FinId id;
  std::vector<Dart> darts;
};

// A finite graph together with fin circles.  `midpoints` marks subdivision
// vertices; it is empty for complexes that were not produced by subdivide()
// (or by covering a subdivided complex).
struct GraphWithFins {
  std::string name;
  std::vector<VertexId> vertices;
  std::vector<EdgeRec> edges;
  std::vector<FinCircle> fins;
  std::set<VertexId> midpoints;
};

// Sorts vertices and edges by id and assigns positional fin ids.
// Every operation producing a complex returns it finalized.
void finalize(GraphWithFins& x);

GraphWithFins make_graph(std::string name, std::vector<VertexId> vertices,
                         std::vector<EdgeRec> edges,
                         std::vector<std::vector<Dart>> fins = {});

struct Violation {
  std::string cell;     // offending cell id (or "graph")
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate(const GraphWithFins& x);

// Position `pos` of fin `fin` (corner and square indices share this scheme).
struct CellPos {
  int fin = -1;
  int pos = -1;
  friend bool operator==(const CellPos&, const CellPos&) = default;
  friend auto operator<=>(const CellPos&, const CellPos&) = default;
};

std::string to_string(const CellPos& c);

// The fin visit at position pos: the fin arrives along darts[pos-1] and
// leaves along darts[pos].  The dart pair {in_rev, out} is unordered as a
// pair; the two squares attached to the corner are kept per dart side.
struct Corner {
  CellPos ref;
  VertexId vertex;
  Dart in_rev;        // reverse of the arriving dart; based at `vertex`
  Dart out;           // the departing dart; based at `vertex`
  CellPos square_prev;  // the square along in_rev  = (fin, pos-1)
  CellPos square_next;  // the square along out     = (fin, pos)
};

// One strip square: position pos of a fin, sitting over edge(darts[pos]).
struct Square {
  CellPos ref;
  EdgeId edge;
  CellPos origin;    // corner at tail(edge)
  CellPos terminus;  // corner at head(edge)
};

struct Star {
  VertexId center;
  std::vector<Dart> darts;      // all darts based at center
  std::vector<Corner> corners;  // all fin visits at center
};

struct Face {
  EdgeId edge;
  std::vector<CellPos> squares;  // all squares over the edge, in fin order
};

// Indexed view of a structurally valid complex: dense cell indices and all
// incidences the algorithms need.  Derived from the raw complex alone.
//
// Index scheme: vertices/edges sorted by id; dart 2*e+(forward?0:1);
// corners and squares flattened fin by fin.
class ComplexView {
 public:
  explicit ComplexView(const GraphWithFins& x);

  const GraphWithFins& graph() const { return *x_; }

  int n_vertices() const { return static_cast<int>(vids_.size()); }
  int n_edges() const { return static_cast<int>(eids_.size()); }
  int n_darts() const { return 2 * n_edges(); }
  int n_corners() const { return static_cast<int>(corner_vertex_.size()); }
  int n_squares() const { return static_cast<int>(square_edge_.size()); }
  int n_fins() const { return static_cast<int>(x_->fins.size()); }

  const VertexId& vertex_id(int vi) const { return vids_[vi]; }
  const EdgeId& edge_id(int ei) const { return eids_[ei]; }
  int vertex_index(const VertexId& v) const;
  int edge_index(const EdgeId& e) const;
  bool has_vertex(const VertexId& v) const { return v_index_.count(v) != 0; }
  bool has_edge(const EdgeId& e) const { return e_index_.count(e) != 0; }

  int edge_tail(int ei) const { return edge_tail_[ei]; }
  int edge_head(int ei) const { return edge_head_[ei]; }

  int dart_index(const Dart& d) const { return 2 * edge_index(d.edge) + (d.forward ? 0 : 1); }
  Dart dart_of(int di) const { return {eids_[di / 2], di % 2 == 0}; }
  int dart_edge(int di) const { return di / 2; }
  bool dart_forward(int di) const { return di % 2 == 0; }
  int dart_reverse(int di) const { return di ^ 1; }
  int dart_tail(int di) const { return di % 2 == 0 ? edge_tail_[di / 2] : edge_head_[di / 2]; }
  int dart_head(int di) const { return di % 2 == 0 ? edge_head_[di / 2] : edge_tail_[di / 2]; }

  bool is_midpoint(int vi) const { return midpoint_[vi] != 0; }

  const std::vector<int>& darts_at(int vi) const { return darts_at_[vi]; }
  const std::vector<int>& corners_at(int vi) const { return corners_at_[vi]; }
  const std::vector<int>& squares_over(int ei) const { return squares_over_[ei]; }

  // corners
  int corner_vertex(int ci) const { return corner_vertex_[ci]; }
  int corner_dart_in_rev(int ci) const { return corner_in_rev_[ci]; }
  int corner_dart_out(int ci) const { return corner_out_[ci]; }
  int corner_square_prev(int ci) const { return corner_square_prev_[ci]; }
  int corner_square_next(int ci) const { return corner_square_next_[ci]; }
  CellPos corner_pos(int ci) const { return cell_pos(corner_fin_, corner_pos_, ci); }
  // The square attached to corner ci on the side of dart di
  // (di must be one of the corner's two darts).
  int corner_square_along(int ci, int di) const;
  // The corner of fin f at position p, as a global corner index.
  int corner_at_pos(int fin, int pos) const { return fin_offset_[fin] + pos; }

  // squares
  int square_edge(int si) const { return square_edge_[si]; }
  int square_fwd_dart(int si) const { return 2 * square_edge_[si]; }
  int square_origin(int si) const { return square_origin_[si]; }
  int square_terminus(int si) const { return square_terminus_[si]; }
  CellPos square_pos(int si) const { return cell_pos(square_fin_, square_pos_, si); }
  int square_at_pos(int fin, int pos) const { return fin_offset_[fin] + pos; }
  // The fin dart this square sits over (dart darts[pos] of its fin).
  int square_dart(int si) const { return square_dart_[si]; }

  int fin_length(int fin) const { return fin_length_[fin]; }
  int fin_of_flat(int flat) const;  // fin owning a flat corner/square index

  Star star_at(int vi) const;
  Face face_at(int ei) const;

 private:
  static CellPos cell_pos(const std::vector<int>& fins, const std::vector<int>& poss, int i) {
    return {fins[i], poss[i]};
  }

  const GraphWithFins* x_;
  std::vector<VertexId> vids_;
  std::vector<EdgeId> eids_;
  std::map<VertexId, int> v_index_;
  std::map<EdgeId, int> e_index_;
  std::vector<int> edge_tail_, edge_head_;
  std::vector<char> midpoint_;
  std::vector<std::vector<int>> darts_at_, corners_at_, squares_over_;
  std::vector<int> fin_offset_, fin_length_;
  std::vector<int> corner_vertex_, corner_in_rev_, corner_out_;
  std::vector<int> corner_square_prev_, corner_square_next_;
  std::vector<int> corner_fin_, corner_pos_;
  std::vector<int> square_edge_, square_origin_, square_terminus_;
  std::vector<int> square_fin_, square_pos_, square_dart_;
};

Star star_at(const GraphWithFins& x, const VertexId& v);
Face face_at(const GraphWithFins& x, const EdgeId& e);

struct SubdivisionRecord {
  struct EdgeSplit {
    EdgeId a;        // half on the original tail side, oriented tail -> mid
    VertexId mid;
    EdgeId b;        // half on the original head side, oriented head -> mid
  };
  // Original edge -> its two halves.  Squares split positionally: the square
  // at (fin, p) becomes the squares at (fin, 2p) and (fin, 2p+1).
  std::map<EdgeId, EdgeSplit> edges;
  // Original fin lengths (fin ids are preserved by subdivide).
  std::map<FinId, int> fin_lengths;

  bool is_midpoint(const VertexId& v) const;
  // half edge id -> (original edge, true if the tail-side half)
  std::map<EdgeId, std::pair<EdgeId, bool>> half_index() const;
};

// Splits every edge at a fresh midpoint; both halves are oriented
// original -> midpoint, so the subdivided complex carries the canonical
// orientation used throughout the pipeline.  Fin circles double in length.
std::pair<GraphWithFins, SubdivisionRecord> subdivide(const GraphWithFins& x);

// How one fin circle of a cover maps onto a base fin circle:
//   dir = +1: cover dart at position q  |->  base dart at (offset + q) mod l
//   dir = -1: cover dart at position q  |->  reverse of base dart at
//             (offset - q) mod l
// where l is the base fin length.  Winding = cover length / l.
struct FinImage {
  FinId fin;
  int dir = +1;
  int offset = 0;
  friend bool operator==(const FinImage&, const FinImage&) = default;
};

// A cellular map between complexes, determined on vertices, edges and fins.
// edge_map gives the image of the edge traversed tail -> head (so a backward
// dart means the edge maps onto its image with reversed orientation).
struct CellMaps {
  std::string cover_name;
  std::string base_name;
  std::map<VertexId, VertexId> vertex_map;
  std::map<EdgeId, Dart> edge_map;
  std::map<FinId, FinImage> fin_map;

  Dart dart_image(const Dart& d) const;
};

CellMaps identity_maps(const GraphWithFins& x);

// Given the image dart sequence of a candidate cover fin and a base circle,
// finds the lexicographically least (dir, offset) alignment, if any.
std::optional<FinImage> align_circle(const std::vector<Dart>& image_darts,
                                     const FinId& base_fin,
                                     const std::vector<Dart>& base_darts);

// Reverses one subdivision step under a covering map.  `cover` must cover the
// subdivided complex the record came from (via `maps`); midpoint fibres are
// merged away and the returned maps target the unsubdivided base.  Throws
// Error if some midpoint-fibre vertex does not have exactly two darts.
std::pair<GraphWithFins, CellMaps> unsubdivide(const GraphWithFins& cover,
                                               const SubdivisionRecord& record,
                                               const CellMaps& maps);

// Same merge applied once while rewriting several maps (the common-cover
// pipeline unsubdivides with respect to both bases simultaneously).
std::pair<GraphWithFins, std::vector<CellMaps>> unsubdivide_all(
    const GraphWithFins& cover,
    const std::vector<std::pair<const SubdivisionRecord*, const CellMaps*>>& bases);

// Restriction of a complex to the connected component of `anchor` (or of the
// smallest component when anchor is empty; ties by smallest vertex id).
GraphWithFins component_of(const GraphWithFins& x, const VertexId& anchor);
std::vector<std::vector<VertexId>> components(const GraphWithFins& x);

// Drops map entries for cells absent from `sub` (a subcomplex of the
// original cover).
CellMaps restrict_maps(const CellMaps& maps, const GraphWithFins& sub);

// Renumbers fins positionally ("f0", "f1", ...) and rewrites the fin-map keys
// of the given maps to match.  Serialized complexes list fins positionally,
// so maps written next to a complex must use these canonical ids.
void renumber_fins(GraphWithFins& x, const std::vector<CellMaps*>& maps);

// Lexicographically least representative among all rotations of the circle
// and of its reverse.  Two circles are equal as fins iff their canonical
// forms are equal.
std::vector<Dart> canonical_circle(const std::vector<Dart>& darts);

// Explicit isomorphism search (ids are opaque, so equality of complexes is
// always up to relabeling).  Returns a degree-one covering map X1 -> X2.
std::optional<CellMaps> find_isomorphism(const GraphWithFins& x1, const GraphWithFins& x2);
bool isomorphic(const GraphWithFins& x1, const GraphWithFins& x2);

}  // namespace fincover
