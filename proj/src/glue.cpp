#include "fincover/glue.hpp"

#include <algorithm>
#include <tuple>

#include "fincover/gen.hpp"
#include "fincover/verify.hpp"

namespace fincover {

namespace {

constexpr long kAssemblyCellCap = 2000000;

// Identity of one star copy in the assembly.
struct Block {
  int pair;
  long copy;
};

}  // namespace

AssembledCover assemble(const ComplexView& x1, const ComplexView& x2,
                        const std::vector<PolyPair>& pairs, const std::vector<FacePair>& faces,
                        const IncidenceTable& inc, const Weighting& w, std::uint64_t seed) {
  // ---- precondition: the weighting solves the gluing equations exactly
  if (w.omega.size() != pairs.size())
    throw Error("assemble: weighting size does not match the pair list");
  for (const auto& v : w.omega)
    if (v <= 0) throw Error("assemble: weighting is not strictly positive");
  for (std::size_t r = 0; r < faces.size(); ++r) {
    Int sum = 0;
    for (int j : inc.left[r]) sum += w.omega[j];
    for (int j : inc.right[r]) sum -= w.omega[j];
    if (sum != 0)
      throw Error("assemble: weighting does not satisfy the gluing equation of face pair " +
                  faces[r].id);
  }

  // ---- copies
  std::vector<long> copies(pairs.size());
  long total_blocks = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (w.omega[i] > kAssemblyCellCap)
      throw Error("assemble: a single weight exceeds the assembly cap");
    copies[i] = w.omega[i].convert_to<long>();
    total_blocks += copies[i];
    if (total_blocks > kAssemblyCellCap)
      throw Error(concat("assemble: cover would exceed ", kAssemblyCellCap, " star blocks"));
  }

  AssembledCover out;
  out.cover.name = concat("cover(", x1.graph().name, ",", x2.graph().name, ")");
  out.phi1.cover_name = out.cover.name;
  out.phi1.base_name = x1.graph().name;
  out.phi2.cover_name = out.cover.name;
  out.phi2.base_name = x2.graph().name;

  auto block_id = [&](const Block& b) { return concat(pairs[b.pair].id, ".", b.copy); };

  for (std::size_t ip = 0; ip < pairs.size(); ++ip) {
    for (long cp = 0; cp < copies[ip]; ++cp) {
      VertexId id = block_id({static_cast<int>(ip), cp});
      out.cover.vertices.push_back(id);
      out.phi1.vertex_map[id] = x1.vertex_id(pairs[ip].u1);
      out.phi2.vertex_map[id] = x2.vertex_id(pairs[ip].u2);
      if (x1.is_midpoint(pairs[ip].u1)) out.cover.midpoints.insert(id);
      out.provenance[id] = {pairs[ip].id, cp};
    }
  }

  // per-pair lookup: global x1 dart -> slot position, and kappa as a map
  std::vector<std::map<int, int>> slot_of(pairs.size());
  std::vector<std::map<int, int>> kappa(pairs.size());
  for (std::size_t ip = 0; ip < pairs.size(); ++ip) {
    const auto& d1 = x1.darts_at(pairs[ip].u1);
    for (std::size_t i = 0; i < d1.size(); ++i) slot_of[ip][d1[i]] = static_cast<int>(i);
    const auto& c1 = x1.corners_at(pairs[ip].u1);
    for (std::size_t i = 0; i < c1.size(); ++i) kappa[ip][c1[i]] = pairs[ip].iso.corner_map[i];
  }

  // half-square attachments: (block vertex id, x1 corner, x1 dart) -> cover square
  struct CoverSquare {
    EdgeId edge;       // cover edge carrying the square
    int s1;            // base square in x1
    int s2;            // base square in x2
    // attachments for the fin walk
    VertexId origin_block, terminus_block;
    int origin_corner, terminus_corner;  // x1 corner indices
    int origin_dart, terminus_dart;      // the x1 darts of those attachments
  };
  std::vector<CoverSquare> squares;
  std::map<std::tuple<VertexId, int, int>, int> attach;  // (block, corner, dart) -> square

  Rng rng(seed);
  long edge_counter = 0;

  for (std::size_t r = 0; r < faces.size(); ++r) {
    const FacePair& f = faces[r];
    std::vector<std::pair<Block, int>> lefts, rights;  // (block, slot dart)
    for (std::size_t k = 0; k < inc.left[r].size(); ++k)
      for (long cp = 0; cp < copies[inc.left[r][k]]; ++cp)
        lefts.push_back({{inc.left[r][k], cp}, inc.left_darts[r][k]});
    for (std::size_t k = 0; k < inc.right[r].size(); ++k)
      for (long cp = 0; cp < copies[inc.right[r][k]]; ++cp)
        rights.push_back({{inc.right[r][k], cp}, inc.right_darts[r][k]});
    if (lefts.size() != rights.size())
      throw Error("assemble: unbalanced face pair sides (bug)");
    if (seed != 0) rng.shuffle(rights);

    const auto& sq1 = x1.squares_over(f.e1);
    const auto& sq2 = x2.squares_over(f.e2);

    for (std::size_t k = 0; k < lefts.size(); ++k) {
      const auto& [lb, ld] = lefts[k];
      const auto& [rb, rd] = rights[k];
      EdgeId eid = concat("g", edge_counter++);
      VertexId lv = block_id(lb), rv = block_id(rb);
      out.cover.edges.push_back({eid, lv, rv});
      out.phi1.edge_map[eid] = {x1.edge_id(f.e1), true};
      out.phi2.edge_map[eid] = {x2.edge_id(f.e2), true};

      for (std::size_t j = 0; j < sq1.size(); ++j) {
        CoverSquare cs;
        cs.edge = eid;
        cs.s1 = sq1[j];
        cs.s2 = sq2[f.tau[j]];
        cs.origin_block = lv;
        cs.origin_corner = x1.square_origin(cs.s1);
        cs.origin_dart = ld;
        cs.terminus_block = rv;
        cs.terminus_corner = x1.square_terminus(cs.s1);
        cs.terminus_dart = rd;
        int idx = static_cast<int>(squares.size());
        squares.push_back(cs);
        if (!attach.emplace(std::make_tuple(lv, cs.origin_corner, ld), idx).second ||
            !attach.emplace(std::make_tuple(rv, cs.terminus_corner, rd), idx).second)
          throw Error("assemble: duplicate half-square attachment (bug)");
      }
    }
  }

  if (static_cast<long>(out.cover.vertices.size() + out.cover.edges.size() + squares.size()) >
      kAssemblyCellCap)
    throw Error("assemble: cover exceeds the assembly cell cap");

  // ---- fin circles: walk square chains until they close
  std::vector<char> visited(squares.size(), 0);
  std::vector<FinImage> images1, images2;
  for (std::size_t start = 0; start < squares.size(); ++start) {
    if (visited[start]) continue;
    std::vector<Dart> circle;
    std::vector<int> chain1, chain2;  // base squares along the walk
    std::size_t cur = start;
    while (true) {
      if (visited[cur]) throw Error("assemble: square chain re-entered before closing (bug)");
      visited[cur] = 1;
      const CoverSquare& cs = squares[cur];
      bool fwd = x1.dart_forward(x1.square_dart(cs.s1));
      circle.push_back({cs.edge, fwd});
      chain1.push_back(cs.s1);
      chain2.push_back(cs.s2);
      // advance to the square over the next base position: through the
      // terminus corner after a forward dart, through the origin corner after
      // a backward one
      VertexId via_block = fwd ? cs.terminus_block : cs.origin_block;
      int via_corner = fwd ? cs.terminus_corner : cs.origin_corner;
      int via_dart = fwd ? cs.terminus_dart : cs.origin_dart;
      int other = x1.corner_dart_in_rev(via_corner) == via_dart
                      ? x1.corner_dart_out(via_corner)
                      : x1.corner_dart_in_rev(via_corner);
      auto it = attach.find(std::make_tuple(via_block, via_corner, other));
      if (it == attach.end())
        throw Error("assemble: dangling half-square attachment during the fin walk (bug)");
      cur = static_cast<std::size_t>(it->second);
      if (cur == start) break;
    }
    // Fin alignments come from the walked square chain itself.  Base circles
    // can be proper powers, so a dart-level re-match could pick a rotation by
    // the period and break the corner correspondence; the chain is exact.
    auto derive_alignment = [](const ComplexView& x, const std::vector<int>& chain,
                               const std::vector<Dart>& circle_darts) {
      const int fin = x.fin_of_flat(chain.front());
      const FinCircle& base = x.graph().fins[fin];
      const int l = static_cast<int>(base.darts.size());
      const int n = static_cast<int>(chain.size());
      if (n < 2) throw Error("assemble: fin chain shorter than a subdivided circle (bug)");
      const int p0 = x.square_pos(chain[0]).pos;
      // length-2 circles look the same walked either way; the first dart's
      // direction disambiguates
      Dart first{x.edge_id(x.square_edge(chain[0])), circle_darts[0].forward};
      int dir;
      if (first == base.darts[p0])
        dir = +1;
      else if (first == base.darts[p0].reverse())
        dir = -1;
      else
        throw Error("assemble: fin chain start disagrees with its base square (bug)");
      FinImage image{base.id, dir, p0};
      for (int q = 0; q < n; ++q) {
        long raw = static_cast<long>(p0) + static_cast<long>(dir) * q;
        int pos = static_cast<int>(((raw % l) + l) % l);
        if (x.square_pos(chain[q]).pos != pos)
          throw Error("assemble: fin chain is not an affine walk of the base circle (bug)");
        Dart expect = dir == +1 ? base.darts[pos] : base.darts[pos].reverse();
        Dart got{x.edge_id(x.square_edge(chain[q])), circle_darts[q].forward};
        if (got != expect)
          throw Error("assemble: fin chain dart disagrees with its alignment (bug)");
      }
      return image;
    };
    images1.push_back(derive_alignment(x1, chain1, circle));
    images2.push_back(derive_alignment(x2, chain2, circle));
    out.cover.fins.push_back({"", std::move(circle)});
  }

  finalize(out.cover);
  for (std::size_t i = 0; i < out.cover.fins.size(); ++i) {
    out.phi1.fin_map[out.cover.fins[i].id] = images1[i];
    out.phi2.fin_map[out.cover.fins[i].id] = images2[i];
  }

  // structural sanity (the assembled cover is usually disconnected, which is fine)
  for (const auto& v : validate(out.cover).violations)
    if (v.message.rfind("disconnected", 0) != 0)
      throw Error("assemble: output is structurally invalid (bug): " + v.cell + ": " + v.message);

  return out;
}

AssembledCover extract_component(const AssembledCover& cover, const VertexId& anchor) {
  AssembledCover out;
  out.cover = component_of(cover.cover, anchor);
  out.phi1 = restrict_maps(cover.phi1, out.cover);
  out.phi2 = restrict_maps(cover.phi2, out.cover);
  for (const auto& v : out.cover.vertices) {
    auto it = cover.provenance.find(v);
    if (it != cover.provenance.end()) out.provenance[v] = it->second;
  }
  renumber_fins(out.cover, {&out.phi1, &out.phi2});
  return out;
}

CoverWithMap n_fold_cover(const GraphWithFins& x, int n, std::uint64_t seed) {
  if (n < 1) throw Error("n_fold_cover: n must be positive");
  ValidationReport rep = validate(x);
  if (!rep.ok()) throw Error("n_fold_cover: invalid input:\n" + rep.to_string());

  VoltageAssignment va;
  va.base = x;
  va.degree = n;
  Rng rng(seed);
  std::vector<EdgeId> ids;
  for (const auto& e : x.edges) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  for (const auto& id : ids) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    if (seed != 0) {
      auto p = rng.permutation(n);
      for (int i = 0; i < n; ++i) perm[i] = static_cast<int>(p[i]);
    }
    va.voltages[id] = perm;
  }
  auto [cover, maps] = lift(va);  // lift self-checks the covering map
  return {std::move(cover), std::move(maps)};
}

}  // namespace fincover
