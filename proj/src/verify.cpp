#include "fincover/verify.hpp"

#include <algorithm>
#include <set>

namespace fincover {

namespace {

int mmod(long a, int m) {
  long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

// Structural validation of the cover, reported as a violation value rather
// than an exception: a broken candidate is an answer, not a crash.
std::optional<CoverViolation> structural(const GraphWithFins& cover) {
  ValidationReport rep = validate(cover);
  for (const auto& v : rep.violations)
    if (v.message.rfind("disconnected", 0) != 0)
      return CoverViolation{v.cell, v.message};
  return std::nullopt;
}

}  // namespace

CoverResult check_cover(const GraphWithFins& cover, const CellMaps& maps,
                        const GraphWithFins& base) {
  {
    ValidationReport rep = validate(base);
    if (!rep.ok())
      throw Error("check_cover: invalid base '" + base.name + "':\n" + rep.to_string());
  }
  if (auto bad = structural(cover)) return *bad;

  ComplexView up(cover);
  ComplexView down(base);

  // ---- map totality and well-formedness
  for (const auto& v : cover.vertices) {
    auto it = maps.vertex_map.find(v);
    if (it == maps.vertex_map.end()) return CoverViolation{v, "vertex has no image"};
    if (!down.has_vertex(it->second))
      return CoverViolation{v, "vertex image '" + it->second + "' is not a base vertex"};
  }
  for (const auto& [v, img] : maps.vertex_map) {
    (void)img;
    if (!up.has_vertex(v)) return CoverViolation{v, "vertex map mentions an unknown vertex"};
  }
  for (const auto& e : cover.edges) {
    auto it = maps.edge_map.find(e.id);
    if (it == maps.edge_map.end()) return CoverViolation{e.id, "edge has no image"};
    if (!down.has_edge(it->second.edge))
      return CoverViolation{e.id, "edge image '" + it->second.edge + "' is not a base edge"};
  }
  for (const auto& [e, img] : maps.edge_map) {
    (void)img;
    if (!up.has_edge(e)) return CoverViolation{e, "edge map mentions an unknown edge"};
  }
  {
    std::set<FinId> base_fins, cover_fins;
    for (const auto& f : base.fins) base_fins.insert(f.id);
    for (const auto& f : cover.fins) cover_fins.insert(f.id);
    for (const auto& f : cover.fins) {
      auto it = maps.fin_map.find(f.id);
      if (it == maps.fin_map.end()) return CoverViolation{f.id, "fin has no image"};
      if (!base_fins.count(it->second.fin))
        return CoverViolation{f.id, "fin image '" + it->second.fin + "' is not a base fin"};
    }
    for (const auto& [f, img] : maps.fin_map) {
      (void)img;
      if (!cover_fins.count(f)) return CoverViolation{f, "fin map mentions an unknown fin"};
    }
  }

  // ---- incidence preservation
  for (int e = 0; e < up.n_edges(); ++e) {
    const EdgeId& id = up.edge_id(e);
    Dart img = maps.edge_map.at(id);
    int be = down.edge_index(img.edge);
    int want_tail = img.forward ? down.edge_tail(be) : down.edge_head(be);
    int want_head = img.forward ? down.edge_head(be) : down.edge_tail(be);
    if (down.vertex_index(maps.vertex_map.at(up.vertex_id(up.edge_tail(e)))) != want_tail ||
        down.vertex_index(maps.vertex_map.at(up.vertex_id(up.edge_head(e)))) != want_head)
      return CoverViolation{id, "edge image does not match the images of its endpoints"};
  }

  CoverCertificate cert;

  // ---- local dart bijections
  for (int v = 0; v < up.n_vertices(); ++v) {
    const VertexId& vid = up.vertex_id(v);
    int bv = down.vertex_index(maps.vertex_map.at(vid));
    const auto& local = up.darts_at(v);
    const auto& target = down.darts_at(bv);
    std::multiset<int> want(target.begin(), target.end());
    auto& record = cert.dart_bijections[vid];
    for (int d : local) {
      Dart img = maps.dart_image(up.dart_of(d));
      int bd = down.dart_index(img);
      auto it = want.find(bd);
      if (it == want.end())
        return CoverViolation{
            vid, concat("darts do not biject onto the image star: dart ",
                        to_string(up.dart_of(d)), " maps to ", to_string(img),
                        " which is already taken or absent")};
      want.erase(it);
      record.push_back({up.dart_of(d), img});
    }
    if (!want.empty())
      return CoverViolation{vid, concat("darts do not biject onto the image star: ",
                                        want.size(), " base darts uncovered")};
  }

  // ---- fin alignment and windings
  for (const auto& f : cover.fins) {
    const FinImage& fi = maps.fin_map.at(f.id);
    const FinCircle* bf = nullptr;
    for (const auto& g : base.fins)
      if (g.id == fi.fin) bf = &g;
    const int n = static_cast<int>(f.darts.size());
    const int l = static_cast<int>(bf->darts.size());
    if (n % l != 0 || n == 0)
      return CoverViolation{f.id, concat("fin length ", n, " is not a positive multiple of the "
                                         "base fin length ", l)};
    for (int q = 0; q < n; ++q) {
      Dart img = maps.dart_image(f.darts[q]);
      Dart expect = fi.dir == +1 ? bf->darts[mmod(fi.offset + q, l)]
                                 : bf->darts[mmod(fi.offset - q, l)].reverse();
      if (img != expect)
        return CoverViolation{f.id, concat("fin dart at position ", q, " maps to ",
                                           to_string(img), " instead of ", to_string(expect))};
    }
    cert.windings[f.id] = n / l;
  }

  // ---- local corner bijections (respecting dart pairs)
  for (int v = 0; v < up.n_vertices(); ++v) {
    const VertexId& vid = up.vertex_id(v);
    int bv = down.vertex_index(maps.vertex_map.at(vid));
    const auto& target = down.corners_at(bv);
    std::multiset<int> want(target.begin(), target.end());
    auto& record = cert.corner_bijections[vid];
    for (int c : up.corners_at(v)) {
      CellPos pos = up.corner_pos(c);
      const FinImage& fi = maps.fin_map.at(cover.fins[pos.fin].id);
      int bfin = -1;
      for (std::size_t i = 0; i < base.fins.size(); ++i)
        if (base.fins[i].id == fi.fin) bfin = static_cast<int>(i);
      int l = static_cast<int>(base.fins[bfin].darts.size());
      int bq = fi.dir == +1 ? mmod(fi.offset + pos.pos, l) : mmod(fi.offset - pos.pos + 1, l);
      int bc = down.corner_at_pos(bfin, bq);
      auto it = want.find(bc);
      if (it == want.end())
        return CoverViolation{vid, concat("corners do not biject onto the image star (corner ",
                                          to_string(pos), ")")};
      want.erase(it);
      // dart pairs must correspond under the map
      std::pair<Dart, Dart> img_pair =
          std::minmax(maps.dart_image(up.dart_of(up.corner_dart_in_rev(c))),
                      maps.dart_image(up.dart_of(up.corner_dart_out(c))));
      std::pair<Dart, Dart> base_pair =
          std::minmax(down.dart_of(down.corner_dart_in_rev(bc)),
                      down.dart_of(down.corner_dart_out(bc)));
      if (img_pair != base_pair)
        return CoverViolation{vid, concat("corner ", to_string(pos),
                                          " maps with mismatched dart pair")};
      record.push_back({pos, down.corner_pos(bc)});
    }
    if (!want.empty())
      return CoverViolation{vid, concat("corners do not biject onto the image star: ",
                                        want.size(), " base corners uncovered")};
  }

  // ---- fibre counts
  std::map<int, long> vertex_fibre;
  for (const auto& [v, img] : maps.vertex_map)
    if (up.has_vertex(v)) ++vertex_fibre[down.vertex_index(img)];
  long degree = vertex_fibre.empty() ? 0 : vertex_fibre.begin()->second;
  for (int bv = 0; bv < down.n_vertices(); ++bv) {
    long d = vertex_fibre.count(bv) ? vertex_fibre.at(bv) : 0;
    if (d != degree)
      return CoverViolation{down.vertex_id(bv),
                            concat("base vertex fibre has ", d, " elements, expected ", degree)};
  }
  std::map<int, long> edge_fibre;
  for (const auto& [e, img] : maps.edge_map)
    if (up.has_edge(e)) ++edge_fibre[down.edge_index(img.edge)];
  for (int be = 0; be < down.n_edges(); ++be) {
    long d = edge_fibre.count(be) ? edge_fibre.at(be) : 0;
    if (d != degree)
      return CoverViolation{down.edge_id(be),
                            concat("base edge fibre has ", d, " elements, expected ", degree)};
  }
  {
    std::map<FinId, long> total;
    for (const auto& f : cover.fins) total[maps.fin_map.at(f.id).fin] += cert.windings.at(f.id);
    for (const auto& f : base.fins) {
      long t = total.count(f.id) ? total.at(f.id) : 0;
      if (t != degree)
        return CoverViolation{f.id, concat("windings over base fin total ", t, ", expected ",
                                           degree, ": the fin fibre is not exhausted")};
    }
  }

  cert.degree = degree;
  return cert;
}

CommonResult check_common(const GraphWithFins& cover, const CellMaps& phi1,
                          const GraphWithFins& x1, const CellMaps& phi2,
                          const GraphWithFins& x2) {
  if (components(cover).size() != 1)
    return CoverViolation{"graph", "not connected: a common cover certificate needs a "
                                   "connected cover"};
  CoverResult r1 = check_cover(cover, phi1, x1);
  if (std::holds_alternative<CoverViolation>(r1)) return std::get<CoverViolation>(r1);
  CoverResult r2 = check_cover(cover, phi2, x2);
  if (std::holds_alternative<CoverViolation>(r2)) return std::get<CoverViolation>(r2);
  return std::make_pair(std::get<CoverCertificate>(std::move(r1)),
                        std::get<CoverCertificate>(std::move(r2)));
}

std::string RootedTree::canonical_code() const {
  // AHU: code(node) = "(" + sorted children codes + ")"
  std::vector<std::string> memo(nodes.size());
  // children always have larger indices (construction order), so compute
  // codes back to front
  for (int i = static_cast<int>(nodes.size()) - 1; i >= 0; --i) {
    std::vector<std::string> kids;
    for (int ch : nodes[i].children) kids.push_back(memo[ch]);
    std::sort(kids.begin(), kids.end());
    memo[i] = "(" + join(kids, "") + ")";
  }
  return memo[0];
}

RootedTree unfold_ball(const GraphWithFins& x, const VertexId& v, int radius) {
  if (!x.fins.empty())
    throw Error("unfold_ball: the ball oracle is defined for fin-free graphs only");
  if (radius < 0) throw Error("unfold_ball: negative radius");
  ComplexView view(x);
  int root = view.vertex_index(v);

  RootedTree t;
  t.nodes.push_back({});
  struct Item {
    int node;
    int dart;  // dart whose head is this node's vertex (-1 at the root)
    int depth;
  };
  std::vector<Item> frontier{{0, -1, 0}};
  while (!frontier.empty()) {
    std::vector<Item> next;
    for (const Item& it : frontier) {
      if (it.depth == radius) continue;
      int at = it.dart < 0 ? root : view.dart_head(it.dart);
      for (int d : view.darts_at(at)) {
        if (it.dart >= 0 && d == view.dart_reverse(it.dart)) continue;
        int id = static_cast<int>(t.nodes.size());
        t.nodes.push_back({it.node, {}});
        t.nodes[it.node].children.push_back(id);
        next.push_back({id, d, it.depth + 1});
      }
    }
    frontier = std::move(next);
  }
  return t;
}

long BallCodeInterner::intern(std::vector<long> key) {
  auto [it, fresh] = table.try_emplace(std::move(key), static_cast<long>(table.size()));
  (void)fresh;
  return it->second;
}

std::vector<long> ball_codes(const GraphWithFins& x, int radius, BallCodeInterner& interner) {
  if (!x.fins.empty())
    throw Error("ball_code: the ball oracle is defined for fin-free graphs only");
  if (radius < 0) throw Error("ball_code: negative radius");
  ComplexView view(x);
  std::vector<long> out(view.n_vertices());
  if (radius == 0) {
    long leaf = interner.intern({});
    for (auto& v : out) v = leaf;
    return out;
  }

  // D_k(dart) = code of the depth-k subtree below that dart
  std::vector<long> prev(view.n_darts(), interner.intern({}));
  for (int k = 1; k < radius; ++k) {
    std::vector<long> cur(view.n_darts());
    for (int d = 0; d < view.n_darts(); ++d) {
      std::vector<long> kids;
      for (int e : view.darts_at(view.dart_head(d)))
        if (e != view.dart_reverse(d)) kids.push_back(prev[e]);
      std::sort(kids.begin(), kids.end());
      cur[d] = interner.intern(std::move(kids));
    }
    prev = std::move(cur);
  }
  for (int v = 0; v < view.n_vertices(); ++v) {
    std::vector<long> kids;
    for (int d : view.darts_at(v)) kids.push_back(prev[d]);
    std::sort(kids.begin(), kids.end());
    out[v] = interner.intern(std::move(kids));
  }
  return out;
}

long ball_code(const GraphWithFins& x, const VertexId& v, int radius, BallCodeInterner& interner) {
  ComplexView view(x);
  return ball_codes(x, radius, interner)[view.vertex_index(v)];
}

}  // namespace fincover
