#include "fincover/refine.hpp"

#include <algorithm>
#include <map>

namespace fincover {

std::string to_string(CellKind k) {
  switch (k) {
    case CellKind::Vertex: return "vertex";
    case CellKind::Dart: return "dart";
    case CellKind::Corner: return "corner";
    case CellKind::Square: return "square";
  }
  return "?";
}

namespace {

// Reverse incidence lists a ComplexView does not precompute.
struct RevIncidence {
  std::vector<std::vector<int>> corners_with_dart;  // dart -> corners having it
  std::vector<std::vector<int>> squares_origin_at;  // corner -> squares
  std::vector<std::vector<int>> squares_terminus_at;

  explicit RevIncidence(const ComplexView& v) {
    corners_with_dart.resize(v.n_darts());
    squares_origin_at.resize(v.n_corners());
    squares_terminus_at.resize(v.n_corners());
    for (int c = 0; c < v.n_corners(); ++c) {
      corners_with_dart[v.corner_dart_in_rev(c)].push_back(c);
      corners_with_dart[v.corner_dart_out(c)].push_back(c);
    }
    for (int s = 0; s < v.n_squares(); ++s) {
      squares_origin_at[v.square_origin(s)].push_back(s);
      squares_terminus_at[v.square_terminus(s)].push_back(s);
    }
  }
};

using Sig = std::vector<std::pair<int, int>>;          // (tag, colour), sorted
using Key = std::pair<int, Sig>;                        // (own colour, relations)

struct Layer {
  std::array<std::vector<int>, 2> vertex, dart, corner, square;
  bool operator==(const Layer&) const = default;
};

Sig cell_signature(const ComplexView& v, const RevIncidence& rev, const Layer& col, int side,
                   CellKind kind, int i) {
  Sig sig;
  const auto& vc = col.vertex[side];
  const auto& dc = col.dart[side];
  const auto& cc = col.corner[side];
  const auto& sc = col.square[side];
  switch (kind) {
    case CellKind::Vertex:
      for (int d : v.darts_at(i)) {
        sig.push_back({kRevDartTail, dc[d]});
        sig.push_back({kRevDartHead, dc[v.dart_reverse(d)]});
      }
      for (int c : v.corners_at(i)) sig.push_back({kRevCornerVertex, cc[c]});
      break;
    case CellKind::Dart:
      sig.push_back({kDartTail, vc[v.dart_tail(i)]});
      sig.push_back({kDartHead, vc[v.dart_head(i)]});
      sig.push_back({kDartReverse, dc[v.dart_reverse(i)]});
      for (int c : rev.corners_with_dart[i]) sig.push_back({kRevCornerDart, cc[c]});
      if (v.dart_forward(i))
        for (int s : v.squares_over(v.dart_edge(i))) sig.push_back({kRevSquareDart, sc[s]});
      break;
    case CellKind::Corner:
      sig.push_back({kCornerVertex, vc[v.corner_vertex(i)]});
      sig.push_back({kCornerDart, dc[v.corner_dart_in_rev(i)]});
      sig.push_back({kCornerDart, dc[v.corner_dart_out(i)]});
      for (int s : rev.squares_origin_at[i]) sig.push_back({kRevSquareOrigin, sc[s]});
      for (int s : rev.squares_terminus_at[i]) sig.push_back({kRevSquareTerminus, sc[s]});
      break;
    case CellKind::Square:
      sig.push_back({kSquareDart, dc[v.square_fwd_dart(i)]});
      sig.push_back({kSquareOrigin, cc[v.square_origin(i)]});
      sig.push_back({kSquareTerminus, cc[v.square_terminus(i)]});
      break;
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

template <typename Fn>
void for_each_cell(const ComplexView* views[2], Fn&& fn) {
  for (int side = 0; side < 2; ++side) {
    const ComplexView& v = *views[side];
    for (int i = 0; i < v.n_vertices(); ++i) fn(side, CellKind::Vertex, i);
    for (int i = 0; i < v.n_darts(); ++i) fn(side, CellKind::Dart, i);
    for (int i = 0; i < v.n_corners(); ++i) fn(side, CellKind::Corner, i);
    for (int i = 0; i < v.n_squares(); ++i) fn(side, CellKind::Square, i);
  }
}

std::vector<int>& layer_of(Layer& l, CellKind k, int side) {
  switch (k) {
    case CellKind::Vertex: return l.vertex[side];
    case CellKind::Dart: return l.dart[side];
    case CellKind::Corner: return l.corner[side];
    case CellKind::Square: return l.square[side];
  }
  throw Error("bad cell kind");
}

}  // namespace

Colouring stable_colouring(const ComplexView& x1, const ComplexView& x2) {
  const ComplexView* views[2] = {&x1, &x2};
  RevIncidence rev1(x1), rev2(x2);
  const RevIncidence* revs[2] = {&rev1, &rev2};

  Layer col;
  for (int side = 0; side < 2; ++side) {
    const ComplexView& v = *views[side];
    col.vertex[side].assign(v.n_vertices(), 0);
    col.dart[side].assign(v.n_darts(), 0);
    col.corner[side].assign(v.n_corners(), 0);
    col.square[side].assign(v.n_squares(), 0);
  }

  // Initial colours: (cell kind) x (original vs midpoint), content-ordered.
  std::map<std::pair<int, int>, int> init_keys;
  auto init_key = [&](int side, CellKind kind, int i) -> std::pair<int, int> {
    int flag = kind == CellKind::Vertex && views[side]->is_midpoint(i) ? 1 : 0;
    return {static_cast<int>(kind), flag};
  };
  for_each_cell(views, [&](int side, CellKind kind, int i) { init_keys[init_key(side, kind, i)]; });
  {
    int next = 0;
    for (auto& [k, id] : init_keys) {
      (void)k;
      id = next++;
    }
  }
  for_each_cell(views, [&](int side, CellKind kind, int i) {
    layer_of(col, kind, side)[i] = init_keys.at(init_key(side, kind, i));
  });

  Colouring out;
  out.colours_per_round.push_back(static_cast<int>(init_keys.size()));
  std::vector<int> colour_initial;  // per current colour: its initial colour id
  for (const auto& [k, id] : init_keys) {
    (void)k;
    colour_initial.push_back(id);
  }

  // Iterated signature refinement.  Each round renumbers classes by sorted
  // (old colour, signature) keys, so numbering stays content-derived and the
  // fixpoint reproduces its own ids; we stop when the layer is unchanged.
  while (true) {
    std::map<Key, int> ids;
    for_each_cell(views, [&](int side, CellKind kind, int i) {
      Key k{layer_of(col, kind, side)[i],
            cell_signature(*views[side], *revs[side], col, side, kind, i)};
      ids.emplace(std::move(k), 0);
    });
    int next = 0;
    for (auto& [k, id] : ids) {
      (void)k;
      id = next++;
    }
    Layer fresh = col;
    for_each_cell(views, [&](int side, CellKind kind, int i) {
      Key k{layer_of(col, kind, side)[i],
            cell_signature(*views[side], *revs[side], col, side, kind, i)};
      layer_of(fresh, kind, side)[i] = ids.at(k);
    });
    std::vector<int> fresh_initial(ids.size());
    for (const auto& [k, id] : ids) fresh_initial[id] = colour_initial[k.first];

    ++out.rounds;
    out.colours_per_round.push_back(static_cast<int>(ids.size()));
    bool stable = fresh == col;
    col = std::move(fresh);
    colour_initial = std::move(fresh_initial);
    if (stable) break;
  }

  out.vertex_colour = col.vertex;
  out.dart_colour = col.dart;
  out.corner_colour = col.corner;
  out.square_colour = col.square;
  out.colour_count = out.colours_per_round.back();

  // Final signature table: every member of a colour must exhibit the same
  // signature under the final colouring (that is what stability means).
  out.info.assign(out.colour_count, {});
  std::vector<char> seen(out.colour_count, 0);
  for_each_cell(views, [&](int side, CellKind kind, int i) {
    int c = layer_of(col, kind, side)[i];
    Sig sig = cell_signature(*views[side], *revs[side], col, side, kind, i);
    std::vector<Colouring::SigEntry> entries;
    for (auto& [tag, cc] : sig) entries.push_back({tag, cc});
    if (!seen[c]) {
      seen[c] = 1;
      out.info[c].kind = kind;
      out.info[c].initial = colour_initial[c];
      out.info[c].signature = std::move(entries);
    } else if (out.info[c].signature != entries || out.info[c].kind != kind) {
      throw Error("stable_colouring: colour class with inconsistent signatures (bug)");
    }
  });

  return out;
}

Colouring stable_colouring(const GraphWithFins& x1, const GraphWithFins& x2) {
  ComplexView v1(x1), v2(x2);
  return stable_colouring(v1, v2);
}

const ColourGraph::VertexColour& ColourGraph::vertex_colour(int colour) const {
  for (const auto& c : vertex_colours)
    if (c.colour == colour) return c;
  throw Error(concat("no vertex colour ", colour));
}

const ColourGraph::EdgeColour& ColourGraph::edge_colour(int colour) const {
  for (const auto& c : edge_colours)
    if (c.colour == colour) return c;
  throw Error(concat("no edge colour ", colour));
}

ColourGraph colour_quotient(const ComplexView& x1, const ComplexView& x2, const Colouring& c) {
  const ComplexView* views[2] = {&x1, &x2};
  ColourGraph g;

  std::map<int, ColourGraph::VertexColour> vcs;
  std::map<int, ColourGraph::EdgeColour> ecs;
  std::map<int, ColourGraph::CornerColour> ccs;
  std::map<int, ColourGraph::SquareColour> scs;

  for (int side = 0; side < 2; ++side) {
    const ComplexView& v = *views[side];
    for (int i = 0; i < v.n_vertices(); ++i) {
      int colour = c.vertex_colour[side][i];
      auto [it, fresh] = vcs.try_emplace(colour);
      if (fresh) {
        it->second = {colour, v.is_midpoint(i), {0, 0}};
      } else if (it->second.midpoint != v.is_midpoint(i)) {
        throw Error("colour_quotient: vertex colour mixes originals and midpoints");
      }
      ++it->second.mult[side];
    }
    for (int e = 0; e < v.n_edges(); ++e) {
      int colour = c.dart_colour[side][2 * e];
      int tc = c.vertex_colour[side][v.edge_tail(e)];
      int hc = c.vertex_colour[side][v.edge_head(e)];
      auto [it, fresh] = ecs.try_emplace(colour);
      if (fresh) {
        it->second = {colour, tc, hc, {0, 0}};
      } else if (it->second.tail_colour != tc || it->second.head_colour != hc) {
        throw Error("colour_quotient: edge colour with inconsistent endpoints");
      }
      ++it->second.mult[side];
    }
    for (int i = 0; i < v.n_corners(); ++i) {
      int colour = c.corner_colour[side][i];
      int vc = c.vertex_colour[side][v.corner_vertex(i)];
      auto [it, fresh] = ccs.try_emplace(colour);
      if (fresh) {
        it->second = {colour, vc, {0, 0}};
      } else if (it->second.vertex_colour != vc) {
        throw Error("colour_quotient: corner colour with inconsistent vertex colour");
      }
      ++it->second.mult[side];
    }
    for (int i = 0; i < v.n_squares(); ++i) {
      int colour = c.square_colour[side][i];
      int ec = c.dart_colour[side][v.square_fwd_dart(i)];
      int oc = c.corner_colour[side][v.square_origin(i)];
      int tc = c.corner_colour[side][v.square_terminus(i)];
      auto [it, fresh] = scs.try_emplace(colour);
      if (fresh) {
        it->second = {colour, ec, oc, tc, {0, 0}};
      } else if (it->second.edge_colour != ec || it->second.origin_colour != oc ||
                 it->second.terminus_colour != tc) {
        throw Error("colour_quotient: square colour with inconsistent incidences");
      }
      ++it->second.mult[side];
    }
  }

  for (auto& [k, v] : vcs) {
    (void)k;
    g.vertex_colours.push_back(v);
  }
  for (auto& [k, v] : ecs) {
    (void)k;
    g.edge_colours.push_back(v);
  }
  for (auto& [k, v] : ccs) {
    (void)k;
    g.corner_colours.push_back(v);
  }
  for (auto& [k, v] : scs) {
    (void)k;
    g.square_colours.push_back(v);
  }
  return g;
}

std::string MismatchCertificate::to_string() const {
  return concat("universal covers differ: colour ", colour, " (", fincover::to_string(kind),
                ") has multiplicity ", mult1, " in the first complex and ", mult2,
                " in the second; witness: ", witness, " in '", witness_side, "'");
}

EquivalenceResult check_equivalence(const GraphWithFins& x1, const GraphWithFins& x2) {
  for (const GraphWithFins* x : {&x1, &x2}) {
    ValidationReport rep = validate(*x);
    if (!rep.ok())
      throw Error("check_equivalence: invalid input '" + x->name + "':\n" + rep.to_string());
  }

  CommonBase base;
  std::tie(base.sub1, base.rec1) = subdivide(x1);
  std::tie(base.sub2, base.rec2) = subdivide(x2);
  ComplexView v1(base.sub1), v2(base.sub2);
  base.colouring = stable_colouring(v1, v2);
  base.quotient = colour_quotient(v1, v2, base.colouring);

  // per-colour multiplicities over all cell kinds
  std::vector<long> mult1(base.colouring.colour_count, 0), mult2(base.colouring.colour_count, 0);
  const ComplexView* views[2] = {&v1, &v2};
  for (int side = 0; side < 2; ++side) {
    auto& m = side == 0 ? mult1 : mult2;
    const auto& c = base.colouring;
    const ComplexView& v = *views[side];
    for (int i = 0; i < v.n_vertices(); ++i) ++m[c.vertex_colour[side][i]];
    for (int i = 0; i < v.n_darts(); ++i) ++m[c.dart_colour[side][i]];
    for (int i = 0; i < v.n_corners(); ++i) ++m[c.corner_colour[side][i]];
    for (int i = 0; i < v.n_squares(); ++i) ++m[c.square_colour[side][i]];
  }

  for (int colour = 0; colour < base.colouring.colour_count; ++colour) {
    if (mult1[colour] > 0 && mult2[colour] > 0) continue;
    MismatchCertificate cert;
    cert.colour = colour;
    cert.kind = base.colouring.kind_of(colour);
    cert.mult1 = mult1[colour];
    cert.mult2 = mult2[colour];
    int side = mult1[colour] > 0 ? 0 : 1;
    cert.witness_side = side == 0 ? base.sub1.name : base.sub2.name;
    const ComplexView& v = *views[side];
    const auto& c = base.colouring;
    for (int i = 0; i < v.n_vertices() && cert.witness.empty(); ++i)
      if (c.vertex_colour[side][i] == colour) cert.witness = "vertex " + v.vertex_id(i);
    for (int i = 0; i < v.n_darts() && cert.witness.empty(); ++i)
      if (c.dart_colour[side][i] == colour) cert.witness = "dart " + to_string(v.dart_of(i));
    for (int i = 0; i < v.n_corners() && cert.witness.empty(); ++i)
      if (c.corner_colour[side][i] == colour)
        cert.witness = "corner " + to_string(v.corner_pos(i));
    for (int i = 0; i < v.n_squares() && cert.witness.empty(); ++i)
      if (c.square_colour[side][i] == colour)
        cert.witness = "square " + to_string(v.square_pos(i));
    return cert;
  }

  return base;
}

}  // namespace fincover
