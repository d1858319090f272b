#include "fincover/gen.hpp"

#include <algorithm>
#include <set>

#include "fincover/verify.hpp"

namespace fincover {

std::pair<GraphWithFins, CellMaps> lift(const VoltageAssignment& va) {
  {
    ValidationReport rep = validate(va.base);
    if (!rep.ok()) throw Error("lift: invalid base:\n" + rep.to_string());
  }
  const int n = va.degree;
  if (n < 1) throw Error("lift: degree must be positive");
  for (const auto& e : va.base.edges) {
    auto it = va.voltages.find(e.id);
    if (it == va.voltages.end()) throw Error("lift: no voltage for edge '" + e.id + "'");
    std::vector<int> seen(n, 0);
    if (static_cast<int>(it->second.size()) != n)
      throw Error("lift: voltage on '" + e.id + "' has wrong size");
    for (int v : it->second) {
      if (v < 0 || v >= n || seen[v]) throw Error("lift: voltage on '" + e.id + "' is not a permutation");
      seen[v] = 1;
    }
  }

  auto sheet_id = [](const std::string& base, int i) { return concat(base, "@", i); };

  GraphWithFins up;
  up.name = concat(va.base.name, "x", n);
  CellMaps maps;
  maps.cover_name = up.name;
  maps.base_name = va.base.name;

  for (const auto& v : va.base.vertices)
    for (int i = 0; i < n; ++i) {
      up.vertices.push_back(sheet_id(v, i));
      maps.vertex_map[sheet_id(v, i)] = v;
    }
  for (const auto& m : va.base.midpoints)
    for (int i = 0; i < n; ++i) up.midpoints.insert(sheet_id(m, i));
  for (const auto& e : va.base.edges) {
    const auto& perm = va.voltages.at(e.id);
    for (int i = 0; i < n; ++i) {
      up.edges.push_back({sheet_id(e.id, i), sheet_id(e.tail, i), sheet_id(e.head, perm[i])});
      maps.edge_map[sheet_id(e.id, i)] = {e.id, true};
    }
  }

  // Sheet transitions along darts; fins lift along the cycles of the
  // holonomy around each circle.
  std::map<EdgeId, std::vector<int>> inverse;
  for (const auto& [e, perm] : va.voltages) {
    std::vector<int> inv(n);
    for (int i = 0; i < n; ++i) inv[perm[i]] = i;
    inverse[e] = inv;
  }
  auto traverse = [&](const Dart& d, int sheet) -> std::pair<Dart, int> {
    if (d.forward) {
      return {{sheet_id(d.edge, sheet), true}, va.voltages.at(d.edge)[sheet]};
    }
    int k = inverse.at(d.edge)[sheet];
    return {{sheet_id(d.edge, k), false}, k};
  };

  std::vector<FinImage> images;
  for (const auto& f : va.base.fins) {
    std::vector<char> used(n, 0);
    for (int start = 0; start < n; ++start) {
      if (used[start]) continue;
      FinCircle circle;
      int sheet = start;
      do {
        used[sheet] = 1;
        for (const auto& d : f.darts) {
          auto [dart, next] = traverse(d, sheet);
          circle.darts.push_back(dart);
          sheet = next;
        }
      } while (sheet != start);
      up.fins.push_back(std::move(circle));
      images.push_back({f.id, +1, 0});
    }
  }
  finalize(up);
  for (std::size_t i = 0; i < up.fins.size(); ++i) maps.fin_map[up.fins[i].id] = images[i];

  auto res = check_cover(up, maps, va.base);
  if (std::holds_alternative<CoverViolation>(res))
    throw Error("lift: output failed self-check (bug): " +
                std::get<CoverViolation>(res).to_string());
  return {std::move(up), std::move(maps)};
}

namespace {

// Shuffled ids, random edge orientations, rotated/reversed fin listings.
GraphWithFins relabel_shuffled(const GraphWithFins& x, const std::string& name, Rng& rng) {
  GraphWithFins y;
  y.name = name;

  std::vector<VertexId> vs = x.vertices;
  std::sort(vs.begin(), vs.end());
  auto vperm = rng.permutation(vs.size());
  std::map<VertexId, VertexId> vmap;
  for (std::size_t i = 0; i < vs.size(); ++i) vmap[vs[i]] = concat("v", vperm[i]);

  std::vector<EdgeId> es;
  for (const auto& e : x.edges) es.push_back(e.id);
  std::sort(es.begin(), es.end());
  auto eperm = rng.permutation(es.size());
  std::map<EdgeId, std::pair<EdgeId, bool>> emap;  // id -> (new id, flipped?)
  for (std::size_t i = 0; i < es.size(); ++i)
    emap[es[i]] = {concat("e", eperm[i]), rng.below(2) == 1};

  for (const auto& v : x.vertices) y.vertices.push_back(vmap.at(v));
  for (const auto& e : x.edges) {
    auto [id, flip] = emap.at(e.id);
    y.edges.push_back(flip ? EdgeRec{id, vmap.at(e.head), vmap.at(e.tail)}
                           : EdgeRec{id, vmap.at(e.tail), vmap.at(e.head)});
  }
  for (const auto& m : x.midpoints) y.midpoints.insert(vmap.at(m));

  std::vector<FinCircle> fins = x.fins;
  rng.shuffle(fins);
  for (auto& f : fins) {
    FinCircle g;
    std::vector<Dart> darts = f.darts;
    std::size_t rot = rng.below(darts.size());
    std::rotate(darts.begin(), darts.begin() + rot, darts.end());
    if (rng.below(2) == 1) {
      std::reverse(darts.begin(), darts.end());
      for (auto& d : darts) d = d.reverse();
    }
    for (auto& d : darts) {
      auto [id, flip] = emap.at(d.edge);
      g.darts.push_back({id, flip ? !d.forward : d.forward});
    }
    y.fins.push_back(std::move(g));
  }
  finalize(y);
  return y;
}

struct BaseDraw {
  GraphWithFins base;
  bool ok = false;
};

BaseDraw draw_base(const GenParams& p, Rng& rng) {
  BaseDraw out;
  const int nv = 2 + static_cast<int>(rng.below(std::max(1, p.max_vertices - 1)));
  std::vector<VertexId> vs;
  for (int i = 0; i < nv; ++i) vs.push_back(concat("v", i));
  std::vector<EdgeRec> edges;
  std::vector<int> degree(nv, 0);
  auto add_edge = [&](int a, int b) {
    edges.push_back({concat("e", edges.size()), vs[a], vs[b]});
    ++degree[a];
    ++degree[b];
  };

  // random spanning tree, preferring low-degree parents
  for (int i = 1; i < nv; ++i) {
    std::vector<int> candidates;
    for (int j = 0; j < i; ++j)
      if (degree[j] < p.max_base_degree) candidates.push_back(j);
    int parent = candidates.empty() ? static_cast<int>(rng.below(i))
                                    : candidates[rng.below(candidates.size())];
    add_edge(parent, i);
  }
  // extra edges (cycles make fins possible); occasional loops
  int extra_budget = p.max_edges - static_cast<int>(edges.size());
  if (extra_budget > 0) {
    int extra = 1 + static_cast<int>(rng.below(extra_budget));
    for (int k = 0; k < extra; ++k) {
      bool loop = rng.below(8) == 0;
      if (loop) {
        std::vector<int> cand;
        for (int j = 0; j < nv; ++j)
          if (degree[j] + 2 <= p.max_base_degree) cand.push_back(j);
        if (!cand.empty()) {
          int a = cand[rng.below(cand.size())];
          add_edge(a, a);
          continue;
        }
      }
      std::vector<int> cand;
      for (int j = 0; j < nv; ++j)
        if (degree[j] < p.max_base_degree) cand.push_back(j);
      if (cand.size() < 2) break;
      int a = cand[rng.below(cand.size())];
      int b = cand[rng.below(cand.size())];
      if (a == b) continue;
      add_edge(a, b);
    }
  }

  GraphWithFins base = make_graph("base", vs, edges);
  if (!validate(base).ok()) return out;

  // fins: closed non-backtracking walks, rejection-sampled
  ComplexView view(base);
  int want_fins = static_cast<int>(rng.below(p.max_fins + 1));
  std::vector<std::vector<Dart>> fins;
  for (int f = 0; f < want_fins; ++f) {
    for (int attempt = 0; attempt < 60; ++attempt) {
      int len = 1 + static_cast<int>(rng.below(p.max_fin_length));
      int d = static_cast<int>(rng.below(view.n_darts()));
      std::vector<int> walk{d};
      bool dead = false;
      for (int step = 1; step < len && !dead; ++step) {
        std::vector<int> next;
        for (int e : view.darts_at(view.dart_head(walk.back())))
          if (e != view.dart_reverse(walk.back())) next.push_back(e);
        if (next.empty()) {
          dead = true;
          break;
        }
        walk.push_back(next[rng.below(next.size())]);
      }
      if (dead) continue;
      if (view.dart_head(walk.back()) != view.dart_tail(walk.front())) continue;
      if (walk.size() > 1 && walk.front() == view.dart_reverse(walk.back())) continue;
      std::vector<Dart> circle;
      for (int w : walk) circle.push_back(view.dart_of(w));
      fins.push_back(std::move(circle));
      break;
    }
  }
  for (auto& f : fins) base.fins.push_back({"", std::move(f)});
  finalize(base);
  out.ok = validate(base).ok();
  out.base = std::move(base);
  return out;
}

VoltageAssignment random_voltages(const GraphWithFins& base, int degree, Rng& rng) {
  VoltageAssignment va;
  va.base = base;
  va.degree = degree;
  for (const auto& e : base.edges) {
    auto p = rng.permutation(degree);
    va.voltages[e.id] = std::vector<int>(p.begin(), p.end());
  }
  return va;
}

}  // namespace

std::pair<GraphWithFins, GraphWithFins> gen_instance(const GenParams& params,
                                                     std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt) {
    BaseDraw draw = draw_base(params, rng);
    if (!draw.ok) continue;
    auto lift1 = lift(random_voltages(draw.base, params.degree1, rng));
    auto lift2 = lift(random_voltages(draw.base, params.degree2, rng));
    GraphWithFins x1 = component_of(lift1.first, "");
    GraphWithFins x2 = component_of(lift2.first, "");
    if (!validate(x1).ok() || !validate(x2).ok()) continue;
    GraphWithFins a = relabel_shuffled(x1, concat("gen", seed, "a"), rng);
    GraphWithFins b = relabel_shuffled(x2, concat("gen", seed, "b"), rng);
    if (!validate(a).ok() || !validate(b).ok()) continue;
    return {std::move(a), std::move(b)};
  }
  throw Error("gen_instance: retry budget exhausted (100 attempts)");
}

}  // namespace fincover
