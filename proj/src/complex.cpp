#include "fincover/complex.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <tuple>

namespace fincover {

namespace {

int mmod(long a, int m) {
  long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

}  // namespace

std::string to_string(const Dart& d) { return d.forward ? d.edge : "-" + d.edge; }

std::string to_string(const CellPos& c) { return concat("f", c.fin, "[", c.pos, "]"); }

void finalize(GraphWithFins& x) {
  std::sort(x.vertices.begin(), x.vertices.end());
  std::sort(x.edges.begin(), x.edges.end(),
            [](const EdgeRec& a, const EdgeRec& b) { return a.id < b.id; });
  std::set<std::string> taken;
  for (const auto& f : x.fins)
    if (!f.id.empty()) taken.insert(f.id);
  int i = 0;
  for (auto& f : x.fins) {
    if (f.id.empty()) f.id = fresh_id(concat("f", i), taken);
    ++i;
  }
}

GraphWithFins make_graph(std::string name, std::vector<VertexId> vertices,
                         std::vector<EdgeRec> edges,
                         std::vector<std::vector<Dart>> fins) {
  GraphWithFins x;
  x.name = std::move(name);
  x.vertices = std::move(vertices);
  x.edges = std::move(edges);
  for (auto& f : fins) x.fins.push_back({"", std::move(f)});
  finalize(x);
  return x;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::vector<std::string> lines;
  for (const auto& v : violations) lines.push_back(v.cell + ": " + v.message);
  return join(lines, "\n");
}

namespace {

ValidationReport validate_impl(const GraphWithFins& x, bool check_connectivity) {
  ValidationReport r;
  auto add = [&](const std::string& cell, std::string msg) {
    r.violations.push_back({cell, std::move(msg)});
  };

  std::set<VertexId> vset;
  for (const auto& v : x.vertices)
    if (!vset.insert(v).second) add(v, "duplicate vertex id");
  std::map<EdgeId, const EdgeRec*> emap;
  for (const auto& e : x.edges)
    if (!emap.emplace(e.id, &e).second) add(e.id, "duplicate edge id");
  std::set<FinId> fset;
  for (const auto& f : x.fins)
    if (!fset.insert(f.id).second) add(f.id, "duplicate fin id");

  if (x.vertices.empty()) add("graph", "no vertices");
  if (x.edges.empty()) add("graph", "no edges (a graph with fins needs at least one edge)");

  bool endpoints_ok = true;
  for (const auto& e : x.edges) {
    if (!vset.count(e.tail)) {
      add(e.id, "dangling tail vertex '" + e.tail + "'");
      endpoints_ok = false;
    }
    if (!vset.count(e.head)) {
      add(e.id, "dangling head vertex '" + e.head + "'");
      endpoints_ok = false;
    }
  }

  for (const auto& m : x.midpoints)
    if (!vset.count(m)) add(m, "midpoint flag on unknown vertex");

  auto dart_tail = [&](const Dart& d) {
    const EdgeRec* e = emap.at(d.edge);
    return d.forward ? e->tail : e->head;
  };
  auto dart_head = [&](const Dart& d) {
    const EdgeRec* e = emap.at(d.edge);
    return d.forward ? e->head : e->tail;
  };

  for (const auto& f : x.fins) {
    if (f.darts.empty()) {
      add(f.id, "empty fin circle");
      continue;
    }
    bool edges_ok = true;
    for (std::size_t p = 0; p < f.darts.size(); ++p) {
      if (!emap.count(f.darts[p].edge)) {
        add(f.id, concat("references missing edge '", f.darts[p].edge, "' at position ", p));
        edges_ok = false;
      }
    }
    if (!edges_ok) continue;
    const std::size_t l = f.darts.size();
    for (std::size_t p = 0; p < l; ++p) {
      std::size_t q = (p + 1) % l;
      if (dart_head(f.darts[p]) != dart_tail(f.darts[q]))
        add(f.id, concat("non-composable darts at positions ", p, " -> ", q));
      if (f.darts[q] == f.darts[p].reverse())
        add(f.id, concat("backtracking at position ", q,
                         " (a dart immediately followed by its reverse; "
                         "fin circles must be cyclically reduced)"));
    }
  }

  if (check_connectivity && endpoints_ok && !x.vertices.empty() && r.ok()) {
    std::map<VertexId, std::vector<VertexId>> adj;
    for (const auto& e : x.edges) {
      adj[e.tail].push_back(e.head);
      adj[e.head].push_back(e.tail);
    }
    std::set<VertexId> seen{x.vertices.front()};
    std::deque<VertexId> queue{x.vertices.front()};
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      for (const auto& w : adj[v])
        if (seen.insert(w).second) queue.push_back(w);
    }
    if (seen.size() != x.vertices.size())
      add("graph", concat("disconnected: ", seen.size(), " of ", x.vertices.size(),
                          " vertices reachable from '", x.vertices.front(), "'"));
  }

  return r;
}

void require_structural(const GraphWithFins& x, const char* who) {
  ValidationReport rep = validate_impl(x, false);
  if (!rep.ok()) throw Error(concat(who, ": invalid complex '", x.name, "':\n", rep.to_string()));
}

}  // namespace

ValidationReport validate(const GraphWithFins& x) { return validate_impl(x, true); }

ComplexView::ComplexView(const GraphWithFins& x) : x_(&x) {
  require_structural(x, "ComplexView");

  vids_ = x.vertices;
  std::sort(vids_.begin(), vids_.end());
  for (int i = 0; i < static_cast<int>(vids_.size()); ++i) v_index_[vids_[i]] = i;

  std::vector<const EdgeRec*> es;
  for (const auto& e : x.edges) es.push_back(&e);
  std::sort(es.begin(), es.end(),
            [](const EdgeRec* a, const EdgeRec* b) { return a->id < b->id; });
  for (const auto* e : es) {
    e_index_[e->id] = static_cast<int>(eids_.size());
    eids_.push_back(e->id);
    edge_tail_.push_back(v_index_.at(e->tail));
    edge_head_.push_back(v_index_.at(e->head));
  }

  midpoint_.assign(vids_.size(), 0);
  for (const auto& m : x.midpoints) midpoint_[v_index_.at(m)] = 1;

  darts_at_.assign(vids_.size(), {});
  corners_at_.assign(vids_.size(), {});
  squares_over_.assign(eids_.size(), {});
  for (int ei = 0; ei < n_edges(); ++ei) {
    darts_at_[edge_tail_[ei]].push_back(2 * ei);
    darts_at_[edge_head_[ei]].push_back(2 * ei + 1);
  }
  for (auto& v : darts_at_) std::sort(v.begin(), v.end());

  int offset = 0;
  for (int fi = 0; fi < n_fins(); ++fi) {
    const auto& darts = x.fins[fi].darts;
    const int l = static_cast<int>(darts.size());
    fin_offset_.push_back(offset);
    fin_length_.push_back(l);
    for (int p = 0; p < l; ++p) {
      int dp = dart_index(darts[p]);
      int dprev = dart_index(darts[mmod(p - 1, l)]);
      int flat = offset + p;
      // square at (fi, p)
      square_fin_.push_back(fi);
      square_pos_.push_back(p);
      square_edge_.push_back(dp / 2);
      square_dart_.push_back(dp);
      if (dp % 2 == 0) {  // forward traversal: the fin enters at the edge tail
        square_origin_.push_back(flat);
        square_terminus_.push_back(offset + (p + 1) % l);
      } else {
        square_origin_.push_back(offset + (p + 1) % l);
        square_terminus_.push_back(flat);
      }
      squares_over_[dp / 2].push_back(flat);
      // corner at (fi, p)
      corner_fin_.push_back(fi);
      corner_pos_.push_back(p);
      corner_vertex_.push_back(dart_tail(dp));
      corner_in_rev_.push_back(dprev ^ 1);
      corner_out_.push_back(dp);
      corner_square_prev_.push_back(offset + mmod(p - 1, l));
      corner_square_next_.push_back(flat);
      corners_at_[dart_tail(dp)].push_back(flat);
    }
    offset += l;
  }
  for (auto& v : corners_at_) std::sort(v.begin(), v.end());
}

int ComplexView::vertex_index(const VertexId& v) const {
  auto it = v_index_.find(v);
  if (it == v_index_.end()) throw Error("unknown vertex id '" + v + "'");
  return it->second;
}

int ComplexView::edge_index(const EdgeId& e) const {
  auto it = e_index_.find(e);
  if (it == e_index_.end()) throw Error("unknown edge id '" + e + "'");
  return it->second;
}

int ComplexView::corner_square_along(int ci, int di) const {
  if (di == corner_in_rev_[ci]) return corner_square_prev_[ci];
  if (di == corner_out_[ci]) return corner_square_next_[ci];
  throw Error(concat("corner ", to_string(corner_pos(ci)), " has no side along dart ",
                     to_string(dart_of(di))));
}

int ComplexView::fin_of_flat(int flat) const { return corner_fin_[flat]; }

Star ComplexView::star_at(int vi) const {
  Star s;
  s.center = vids_[vi];
  for (int di : darts_at_[vi]) s.darts.push_back(dart_of(di));
  for (int ci : corners_at_[vi]) {
    Corner c;
    c.ref = corner_pos(ci);
    c.vertex = vids_[vi];
    c.in_rev = dart_of(corner_in_rev_[ci]);
    c.out = dart_of(corner_out_[ci]);
    c.square_prev = square_pos(corner_square_prev_[ci]);
    c.square_next = square_pos(corner_square_next_[ci]);
    s.corners.push_back(c);
  }
  return s;
}

Face ComplexView::face_at(int ei) const {
  Face f;
  f.edge = eids_[ei];
  for (int si : squares_over_[ei]) f.squares.push_back(square_pos(si));
  return f;
}

Star star_at(const GraphWithFins& x, const VertexId& v) {
  ComplexView view(x);
  return view.star_at(view.vertex_index(v));
}

Face face_at(const GraphWithFins& x, const EdgeId& e) {
  ComplexView view(x);
  return view.face_at(view.edge_index(e));
}

bool SubdivisionRecord::is_midpoint(const VertexId& v) const {
  for (const auto& [e, split] : edges) {
    (void)e;
    if (split.mid == v) return true;
  }
  return false;
}

std::map<EdgeId, std::pair<EdgeId, bool>> SubdivisionRecord::half_index() const {
  std::map<EdgeId, std::pair<EdgeId, bool>> idx;
  for (const auto& [e, split] : edges) {
    idx[split.a] = {e, true};
    idx[split.b] = {e, false};
  }
  return idx;
}

std::pair<GraphWithFins, SubdivisionRecord> subdivide(const GraphWithFins& x) {
  ValidationReport rep = validate(x);
  if (!rep.ok()) throw Error("subdivide: invalid input:\n" + rep.to_string());

  GraphWithFins y;
  SubdivisionRecord rec;
  y.name = x.name;
  y.vertices = x.vertices;

  std::set<std::string> vtaken(x.vertices.begin(), x.vertices.end());
  std::set<std::string> etaken;
  for (const auto& e : x.edges) etaken.insert(e.id);

  std::vector<const EdgeRec*> es;
  for (const auto& e : x.edges) es.push_back(&e);
  std::sort(es.begin(), es.end(),
            [](const EdgeRec* a, const EdgeRec* b) { return a->id < b->id; });
  for (const auto* e : es) {
    SubdivisionRecord::EdgeSplit split;
    split.mid = fresh_id(e->id + ".m", vtaken);
    split.a = fresh_id(e->id + ".a", etaken);
    split.b = fresh_id(e->id + ".b", etaken);
    y.vertices.push_back(split.mid);
    y.midpoints.insert(split.mid);
    y.edges.push_back({split.a, e->tail, split.mid});
    y.edges.push_back({split.b, e->head, split.mid});
    rec.edges[e->id] = split;
  }

  for (const auto& f : x.fins) {
    FinCircle g;
    g.id = f.id;
    rec.fin_lengths[f.id] = static_cast<int>(f.darts.size());
    for (const auto& d : f.darts) {
      const auto& split = rec.edges.at(d.edge);
      if (d.forward) {
        g.darts.push_back({split.a, true});
        g.darts.push_back({split.b, false});
      } else {
        g.darts.push_back({split.b, true});
        g.darts.push_back({split.a, false});
      }
    }
    y.fins.push_back(std::move(g));
  }

  finalize(y);
  return {std::move(y), std::move(rec)};
}

Dart CellMaps::dart_image(const Dart& d) const {
  auto it = edge_map.find(d.edge);
  if (it == edge_map.end()) throw Error("no edge image for '" + d.edge + "'");
  return d.forward ? it->second : it->second.reverse();
}

CellMaps identity_maps(const GraphWithFins& x) {
  CellMaps m;
  m.cover_name = x.name;
  m.base_name = x.name;
  for (const auto& v : x.vertices) m.vertex_map[v] = v;
  for (const auto& e : x.edges) m.edge_map[e.id] = {e.id, true};
  for (const auto& f : x.fins) m.fin_map[f.id] = {f.id, +1, 0};
  return m;
}

std::optional<FinImage> align_circle(const std::vector<Dart>& image_darts,
                                     const FinId& base_fin,
                                     const std::vector<Dart>& base_darts) {
  const int l = static_cast<int>(base_darts.size());
  const int n = static_cast<int>(image_darts.size());
  if (l == 0 || n == 0 || n % l != 0) return std::nullopt;
  for (int dir : {+1, -1}) {
    for (int offset = 0; offset < l; ++offset) {
      bool ok = true;
      for (int q = 0; q < n && ok; ++q) {
        Dart expect = dir == +1 ? base_darts[mmod(offset + q, l)]
                                : base_darts[mmod(offset - q, l)].reverse();
        if (image_darts[q] != expect) ok = false;
      }
      if (ok) return FinImage{base_fin, dir, offset};
    }
  }
  return std::nullopt;
}

std::pair<GraphWithFins, std::vector<CellMaps>> unsubdivide_all(
    const GraphWithFins& cover,
    const std::vector<std::pair<const SubdivisionRecord*, const CellMaps*>>& bases) {
  if (bases.empty()) throw Error("unsubdivide: no base given");
  require_structural(cover, "unsubdivide");

  // Work on copies normalized so that every cover edge is oriented
  // original-fibre -> midpoint-fibre, matching the canonical orientation of
  // subdivided complexes.
  GraphWithFins y = cover;
  std::vector<CellMaps> maps;
  maps.reserve(bases.size());
  for (const auto& [rec, m] : bases) {
    (void)rec;
    maps.push_back(*m);
  }

  std::set<EdgeId> flipped;
  for (auto& e : y.edges) {
    auto it = maps[0].edge_map.find(e.id);
    if (it == maps[0].edge_map.end())
      throw Error("unsubdivide: cover edge '" + e.id + "' missing from maps");
    if (!it->second.forward) {
      std::swap(e.tail, e.head);
      flipped.insert(e.id);
    }
  }
  for (auto& m : maps) {
    for (auto& [eid, dart] : m.edge_map) {
      if (flipped.count(eid)) dart = dart.reverse();
      if (!dart.forward)
        throw Error("unsubdivide: maps disagree on orientation of edge '" + eid + "'");
    }
  }
  for (auto& f : y.fins)
    for (auto& d : f.darts)
      if (flipped.count(d.edge)) d.forward = !d.forward;

  ComplexView view(y);

  // Midpoint fibres; all bases must agree on where they are.
  std::set<VertexId> mid_fibre;
  for (int vi = 0; vi < view.n_vertices(); ++vi) {
    const VertexId& v = view.vertex_id(vi);
    bool is_mid = false;
    for (std::size_t i = 0; i < maps.size(); ++i) {
      auto it = maps[i].vertex_map.find(v);
      if (it == maps[i].vertex_map.end())
        throw Error("unsubdivide: cover vertex '" + v + "' missing from maps");
      bool mid_here = bases[i].first->is_midpoint(it->second);
      if (i == 0)
        is_mid = mid_here;
      else if (mid_here != is_mid)
        throw Error("unsubdivide: bases disagree on the midpoint fibre at '" + v + "'");
    }
    if (is_mid) mid_fibre.insert(v);
  }

  std::vector<std::map<EdgeId, std::pair<EdgeId, bool>>> halves;
  halves.reserve(bases.size());
  for (const auto& [rec, m] : bases) {
    (void)m;
    halves.push_back(rec->half_index());
  }

  GraphWithFins z;
  z.name = cover.name;
  std::vector<CellMaps> zmaps(maps.size());
  for (std::size_t i = 0; i < maps.size(); ++i) {
    zmaps[i].cover_name = cover.name;
    zmaps[i].base_name = maps[i].base_name;
  }

  // Merge the two cover edges meeting at each midpoint-fibre vertex.  The
  // merged edge keeps the id of the half on base 0's tail side and is
  // oriented to project forward onto base 0.
  struct Merge {
    EdgeId a_side;
    EdgeId b_side;
  };
  std::map<VertexId, Merge> merges;

  for (int vi = 0; vi < view.n_vertices(); ++vi) {
    const VertexId& v = view.vertex_id(vi);
    if (!mid_fibre.count(v)) {
      z.vertices.push_back(v);
      for (std::size_t i = 0; i < maps.size(); ++i)
        zmaps[i].vertex_map[v] = maps[i].vertex_map.at(v);
      continue;
    }
    const auto& darts = view.darts_at(vi);
    if (darts.size() != 2)
      throw Error(concat("unsubdivide: midpoint-fibre vertex '", v, "' has ", darts.size(),
                         " darts (expected 2): not the cover of a subdivision"));
    for (int d : darts)
      if (view.dart_forward(d))
        throw Error("unsubdivide: midpoint-fibre vertex '" + v +
                    "' is the tail of an edge: not the cover of a subdivision");
    EdgeId ex = view.edge_id(view.dart_edge(darts[0]));
    EdgeId ey = view.edge_id(view.dart_edge(darts[1]));

    Merge mg;
    {
      auto hx = halves[0].find(maps[0].edge_map.at(ex).edge);
      auto hy = halves[0].find(maps[0].edge_map.at(ey).edge);
      if (hx == halves[0].end() || hy == halves[0].end())
        throw Error("unsubdivide: an edge at '" + v + "' does not map onto a subdivided half");
      if (hx->second.first != hy->second.first || hx->second.second == hy->second.second)
        throw Error("unsubdivide: the two edges at '" + v +
                    "' do not cover the two halves of one base edge");
      mg.a_side = hx->second.second ? ex : ey;
      mg.b_side = hx->second.second ? ey : ex;
    }
    merges[v] = mg;

    EdgeRec merged;
    merged.id = mg.a_side;
    merged.tail = view.vertex_id(view.edge_tail(view.edge_index(mg.a_side)));
    merged.head = view.vertex_id(view.edge_tail(view.edge_index(mg.b_side)));
    z.edges.push_back(merged);

    for (std::size_t i = 0; i < maps.size(); ++i) {
      auto ha = halves[i].find(maps[i].edge_map.at(mg.a_side).edge);
      auto hb = halves[i].find(maps[i].edge_map.at(mg.b_side).edge);
      if (ha == halves[i].end() || hb == halves[i].end())
        throw Error("unsubdivide: an edge at '" + v + "' does not map onto a subdivided half");
      if (ha->second.first != hb->second.first || ha->second.second == hb->second.second)
        throw Error("unsubdivide: the two edges at '" + v +
                    "' do not cover the two halves of one base edge");
      // Forward iff the a_side half is the tail-side half of base i's edge.
      zmaps[i].edge_map[mg.a_side] = {ha->second.first, ha->second.second};
    }
  }

  // Merge fins pairwise.  After rotating each circle to start at an
  // original-fibre visit, darts come in (forward, backward) pairs meeting at
  // a midpoint-fibre vertex.
  for (const auto& f : y.fins) {
    const int n = static_cast<int>(f.darts.size());
    if (n % 2 != 0)
      throw Error("unsubdivide: fin '" + f.id + "' has odd length " + concat(n));
    std::vector<Dart> darts = f.darts;
    int r = 0;
    {
      // vertex visited at position 0
      const Dart& d0 = darts[0];
      int di = view.dart_index(d0);
      if (mid_fibre.count(view.vertex_id(view.dart_tail(di)))) {
        std::rotate(darts.begin(), darts.begin() + 1, darts.end());
        r = 1;
      }
    }
    FinCircle merged_fin;
    merged_fin.id = f.id;
    for (int t = 0; t < n / 2; ++t) {
      const Dart& da = darts[2 * t];
      const Dart& db = darts[2 * t + 1];
      int dai = view.dart_index(da);
      int dbi = view.dart_index(db);
      if (!view.dart_forward(dai) || view.dart_forward(dbi))
        throw Error("unsubdivide: fin '" + f.id +
                    "' does not alternate between original and midpoint fibres");
      VertexId v = view.vertex_id(view.dart_head(dai));
      auto it = merges.find(v);
      if (it == merges.end())
        throw Error("unsubdivide: fin '" + f.id + "' crosses unknown midpoint fibre '" + v + "'");
      const Merge& mg = it->second;
      if (da.edge != mg.a_side && da.edge != mg.b_side)
        throw Error("unsubdivide: fin '" + f.id + "' is inconsistent at '" + v + "'");
      merged_fin.darts.push_back({mg.a_side, da.edge == mg.a_side});
    }
    z.fins.push_back(merged_fin);

    // Rewrite the fin alignments.  With L the base fin length, subdivided
    // positions 2p and 2p+1 cover the base position p; the rotation r and the
    // old offset determine the new one.
    for (std::size_t i = 0; i < maps.size(); ++i) {
      auto it = maps[i].fin_map.find(f.id);
      if (it == maps[i].fin_map.end())
        throw Error("unsubdivide: cover fin '" + f.id + "' missing from maps");
      const FinImage& old = it->second;
      auto lit = bases[i].first->fin_lengths.find(old.fin);
      if (lit == bases[i].first->fin_lengths.end())
        throw Error("unsubdivide: record has no length for base fin '" + old.fin + "'");
      const int base_len = lit->second;
      FinImage now;
      now.fin = old.fin;
      now.dir = old.dir;
      if (old.dir == +1) {
        int o = mmod(old.offset + r, 2 * base_len);
        if (o % 2 != 0)
          throw Error("unsubdivide: fin '" + f.id + "' has a misaligned image (parity)");
        now.offset = o / 2;
      } else {
        int o = mmod(old.offset - r - 1, 2 * base_len);
        if (o % 2 != 0)
          throw Error("unsubdivide: fin '" + f.id + "' has a misaligned image (parity)");
        now.offset = o / 2;
      }
      zmaps[i].fin_map[f.id] = now;
    }
  }

  finalize(z);
  require_structural(z, "unsubdivide (output)");
  return {std::move(z), std::move(zmaps)};
}

std::pair<GraphWithFins, CellMaps> unsubdivide(const GraphWithFins& cover,
                                               const SubdivisionRecord& record,
                                               const CellMaps& maps) {
  auto [z, zmaps] = unsubdivide_all(cover, {{&record, &maps}});
  return {std::move(z), std::move(zmaps[0])};
}

std::vector<std::vector<VertexId>> components(const GraphWithFins& x) {
  std::map<VertexId, std::vector<VertexId>> adj;
  for (const auto& v : x.vertices) adj[v];
  for (const auto& e : x.edges) {
    adj[e.tail].push_back(e.head);
    adj[e.head].push_back(e.tail);
  }
  std::set<VertexId> seen;
  std::vector<std::vector<VertexId>> comps;
  for (const auto& [v, nbrs] : adj) {
    (void)nbrs;
    if (seen.count(v)) continue;
    std::vector<VertexId> comp;
    std::deque<VertexId> queue{v};
    seen.insert(v);
    while (!queue.empty()) {
      VertexId u = queue.front();
      queue.pop_front();
      comp.push_back(u);
      for (const auto& w : adj[u])
        if (seen.insert(w).second) queue.push_back(w);
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::sort(comps.begin(), comps.end(),
            [](const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a.front() < b.front();
            });
  return comps;
}

GraphWithFins component_of(const GraphWithFins& x, const VertexId& anchor) {
  auto comps = components(x);
  const std::vector<VertexId>* chosen = nullptr;
  if (anchor.empty()) {
    if (comps.empty()) throw Error("component_of: empty complex");
    chosen = &comps.front();
  } else {
    for (const auto& c : comps)
      if (std::binary_search(c.begin(), c.end(), anchor)) chosen = &c;
    if (!chosen) throw Error("component_of: unknown anchor vertex '" + anchor + "'");
  }
  std::set<VertexId> keep(chosen->begin(), chosen->end());

  GraphWithFins sub;
  sub.name = x.name;
  sub.vertices = *chosen;
  std::set<EdgeId> kept_edges;
  for (const auto& e : x.edges)
    if (keep.count(e.tail)) {
      sub.edges.push_back(e);
      kept_edges.insert(e.id);
    }
  for (const auto& f : x.fins) {
    bool inside = !f.darts.empty() && kept_edges.count(f.darts.front().edge);
    for (const auto& d : f.darts)
      if (kept_edges.count(d.edge) != (inside ? 1u : 0u))
        throw Error("component_of: fin '" + f.id + "' straddles components");
    if (inside) sub.fins.push_back(f);
  }
  for (const auto& m : x.midpoints)
    if (keep.count(m)) sub.midpoints.insert(m);
  finalize(sub);
  return sub;
}

void renumber_fins(GraphWithFins& x, const std::vector<CellMaps*>& maps) {
  std::map<FinId, FinId> rename;
  int i = 0;
  for (auto& f : x.fins) {
    FinId fresh = concat("f", i++);
    rename[f.id] = fresh;
    f.id = fresh;
  }
  for (CellMaps* m : maps) {
    std::map<FinId, FinImage> fresh;
    for (const auto& [k, v] : m->fin_map) {
      auto it = rename.find(k);
      if (it != rename.end()) fresh[it->second] = v;
    }
    m->fin_map = std::move(fresh);
  }
}

CellMaps restrict_maps(const CellMaps& maps, const GraphWithFins& sub) {
  CellMaps out;
  out.cover_name = maps.cover_name;
  out.base_name = maps.base_name;
  std::set<VertexId> vs(sub.vertices.begin(), sub.vertices.end());
  std::set<EdgeId> es;
  for (const auto& e : sub.edges) es.insert(e.id);
  std::set<FinId> fs;
  for (const auto& f : sub.fins) fs.insert(f.id);
  for (const auto& [k, v] : maps.vertex_map)
    if (vs.count(k)) out.vertex_map[k] = v;
  for (const auto& [k, v] : maps.edge_map)
    if (es.count(k)) out.edge_map[k] = v;
  for (const auto& [k, v] : maps.fin_map)
    if (fs.count(k)) out.fin_map[k] = v;
  return out;
}

std::vector<Dart> canonical_circle(const std::vector<Dart>& darts) {
  if (darts.empty()) return {};
  const int l = static_cast<int>(darts.size());
  std::vector<Dart> reversed(l);
  for (int i = 0; i < l; ++i) reversed[i] = darts[l - 1 - i].reverse();
  std::vector<Dart> best;
  const std::vector<Dart>* circles[2] = {&darts, &reversed};
  for (const std::vector<Dart>* circle : circles) {
    for (int r = 0; r < l; ++r) {
      std::vector<Dart> rot(l);
      for (int i = 0; i < l; ++i) rot[i] = (*circle)[(r + i) % l];
      if (best.empty() || rot < best) best = std::move(rot);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Isomorphism search

namespace {

struct IsoProblem {
  const ComplexView& a;
  const ComplexView& b;
  std::vector<long> akey, bkey;  // vertex invariants
  std::vector<int> order;        // a-vertices in search order
  std::vector<int> v_img;        // a vertex -> b vertex
  std::vector<char> b_used;
};

long vertex_key(const ComplexView& v, int vi) {
  long loops = 0;
  for (int d : v.darts_at(vi))
    if (v.dart_head(d) == vi && v.dart_forward(d)) ++loops;
  return static_cast<long>(v.darts_at(vi).size()) * 1000000 +
         static_cast<long>(v.corners_at(vi).size()) * 1000 + loops;
}

int edge_count_between(const ComplexView& v, int x, int y) {
  int n = 0;
  for (int e = 0; e < v.n_edges(); ++e) {
    int t = v.edge_tail(e), h = v.edge_head(e);
    if ((t == x && h == y) || (t == y && h == x)) ++n;
  }
  return n;
}

// Tries all edge bijections compatible with the vertex map, then checks fins.
bool match_edges_and_fins(const ComplexView& a, const ComplexView& b,
                          const std::vector<int>& v_img, CellMaps& out);

bool extend(IsoProblem& p, std::size_t i, CellMaps& out) {
  if (i == p.order.size())
    return match_edges_and_fins(p.a, p.b, p.v_img, out);
  int v = p.order[i];
  for (int w = 0; w < p.b.n_vertices(); ++w) {
    if (p.b_used[w] || p.akey[v] != p.bkey[w]) continue;
    bool ok = true;
    for (std::size_t j = 0; j < i && ok; ++j) {
      int u = p.order[j];
      if (edge_count_between(p.a, v, u) != edge_count_between(p.b, w, p.v_img[u])) ok = false;
    }
    if (!ok) continue;
    p.v_img[v] = w;
    p.b_used[w] = 1;
    if (extend(p, i + 1, out)) return true;
    p.v_img[v] = -1;
    p.b_used[w] = 0;
  }
  return false;
}

bool match_edges_and_fins(const ComplexView& a, const ComplexView& b,
                          const std::vector<int>& v_img, CellMaps& out) {
  // Group a-edges by image endpoint pair, b-edges by endpoint pair.
  std::map<std::pair<int, int>, std::vector<int>> agrp, bgrp;
  for (int e = 0; e < a.n_edges(); ++e) {
    int t = v_img[a.edge_tail(e)], h = v_img[a.edge_head(e)];
    agrp[std::minmax(t, h)].push_back(e);
  }
  for (int e = 0; e < b.n_edges(); ++e)
    bgrp[std::minmax(b.edge_tail(e), b.edge_head(e))].push_back(e);
  if (agrp.size() != bgrp.size()) return false;
  std::vector<std::vector<int>> asets, bsets;
  for (auto& [k, v] : agrp) {
    auto it = bgrp.find(k);
    if (it == bgrp.end() || it->second.size() != v.size()) return false;
    asets.push_back(v);
    bsets.push_back(it->second);
  }

  // Odometer over per-group permutations of the b side.
  std::vector<std::vector<int>> perm = bsets;
  std::function<bool(std::size_t)> run = [&](std::size_t g) -> bool {
    if (g == asets.size()) {
      // assemble the dart map; loops get both orientations tried
      std::vector<int> e_img(a.n_edges());
      std::vector<int> loops;
      for (std::size_t k = 0; k < asets.size(); ++k)
        for (std::size_t j = 0; j < asets[k].size(); ++j) {
          int ea = asets[k][j], eb = perm[k][j];
          e_img[ea] = eb;
          if (a.edge_tail(ea) == a.edge_head(ea)) loops.push_back(ea);
        }
      if (loops.size() > 20) throw Error("isomorphism search: too many parallel loops");
      for (std::uint64_t mask = 0; mask < (1ull << loops.size()); ++mask) {
        // orientation: does a's forward dart map to b's forward dart?
        std::vector<char> fwd(a.n_edges(), 1);
        bool ok = true;
        for (int e = 0; e < a.n_edges() && ok; ++e) {
          int t = v_img[a.edge_tail(e)], h = v_img[a.edge_head(e)];
          int eb = e_img[e];
          if (a.edge_tail(e) == a.edge_head(e)) continue;  // loop: free choice
          if (b.edge_tail(eb) == t && b.edge_head(eb) == h)
            fwd[e] = 1;
          else if (b.edge_tail(eb) == h && b.edge_head(eb) == t)
            fwd[e] = 0;
          else
            ok = false;
        }
        if (!ok) continue;
        for (std::size_t li = 0; li < loops.size(); ++li)
          fwd[loops[li]] = (mask >> li) & 1 ? 1 : 0;

        auto map_dart = [&](const Dart& d) {
          int e = a.edge_index(d.edge);
          return Dart{b.edge_id(e_img[e]), d.forward == static_cast<bool>(fwd[e])};
        };

        // fins: multiset of canonical circles must agree
        const auto& afins = a.graph().fins;
        const auto& bfins = b.graph().fins;
        if (afins.size() != bfins.size()) return false;
        std::multiset<std::vector<Dart>> want;
        for (const auto& f : bfins) want.insert(canonical_circle(f.darts));
        bool fins_ok = true;
        std::vector<std::vector<Dart>> images;
        for (const auto& f : afins) {
          std::vector<Dart> img;
          for (const auto& d : f.darts) img.push_back(map_dart(d));
          auto canon = canonical_circle(img);
          auto it = want.find(canon);
          if (it == want.end()) {
            fins_ok = false;
            break;
          }
          want.erase(it);
          images.push_back(std::move(img));
        }
        if (!fins_ok) continue;

        // build the certificate maps
        CellMaps m;
        m.cover_name = a.graph().name;
        m.base_name = b.graph().name;
        for (int v = 0; v < a.n_vertices(); ++v)
          m.vertex_map[a.vertex_id(v)] = b.vertex_id(v_img[v]);
        for (int e = 0; e < a.n_edges(); ++e)
          m.edge_map[a.edge_id(e)] = Dart{b.edge_id(e_img[e]), static_cast<bool>(fwd[e])};
        std::vector<char> used(bfins.size(), 0);
        for (std::size_t fi = 0; fi < afins.size(); ++fi) {
          bool placed = false;
          for (std::size_t gi = 0; gi < bfins.size() && !placed; ++gi) {
            if (used[gi]) continue;
            auto al = align_circle(images[fi], bfins[gi].id, bfins[gi].darts);
            if (al) {
              m.fin_map[afins[fi].id] = *al;
              used[gi] = 1;
              placed = true;
            }
          }
          if (!placed) {
            fins_ok = false;
            break;
          }
        }
        if (!fins_ok) continue;
        out = std::move(m);
        return true;
      }
      return false;
    }
    std::sort(perm[g].begin(), perm[g].end());
    do {
      if (run(g + 1)) return true;
    } while (std::next_permutation(perm[g].begin(), perm[g].end()));
    return false;
  };
  return run(0);
}

}  // namespace

std::optional<CellMaps> find_isomorphism(const GraphWithFins& x1, const GraphWithFins& x2) {
  if (x1.vertices.size() != x2.vertices.size() || x1.edges.size() != x2.edges.size() ||
      x1.fins.size() != x2.fins.size())
    return std::nullopt;
  {
    std::multiset<std::size_t> l1, l2;
    for (const auto& f : x1.fins) l1.insert(f.darts.size());
    for (const auto& f : x2.fins) l2.insert(f.darts.size());
    if (l1 != l2) return std::nullopt;
  }
  ComplexView a(x1), b(x2);
  IsoProblem p{a, b, {}, {}, {}, std::vector<int>(a.n_vertices(), -1),
               std::vector<char>(b.n_vertices(), 0)};
  p.akey.resize(a.n_vertices());
  p.bkey.resize(b.n_vertices());
  std::multiset<long> ka, kb;
  for (int v = 0; v < a.n_vertices(); ++v) ka.insert(p.akey[v] = vertex_key(a, v));
  for (int v = 0; v < b.n_vertices(); ++v) kb.insert(p.bkey[v] = vertex_key(b, v));
  if (ka != kb) return std::nullopt;

  // BFS order over components for locality of the pruning checks
  std::vector<char> seen(a.n_vertices(), 0);
  for (int s = 0; s < a.n_vertices(); ++s) {
    if (seen[s]) continue;
    std::deque<int> queue{s};
    seen[s] = 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      p.order.push_back(v);
      for (int d : a.darts_at(v)) {
        int w = a.dart_head(d);
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
      }
    }
  }

  CellMaps out;
  if (extend(p, 0, out)) return out;
  return std::nullopt;
}

bool isomorphic(const GraphWithFins& x1, const GraphWithFins& x2) {
  return find_isomorphism(x1, x2).has_value();
}

}  // namespace fincover
