#include "fincover/pairs.hpp"

#include <algorithm>
#include <functional>

namespace fincover {

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > UINT64_MAX / b) return UINT64_MAX;
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

std::uint64_t sat_factorial(std::size_t n) {
  std::uint64_t r = 1;
  for (std::size_t i = 2; i <= n; ++i) r = sat_mul(r, i);
  return r;
}

// (dart image, square colour on that side) entries describing a corner after
// applying sigma; equal descriptors = gluable corners.
using CornerKey = std::pair<int, std::vector<std::pair<int, int>>>;

CornerKey corner_key_mapped(const ComplexView& a, const Colouring& c, int corner,
                            const std::map<int, int>& sigma) {
  int in_rev = a.corner_dart_in_rev(corner);
  int out = a.corner_dart_out(corner);
  std::vector<std::pair<int, int>> sides = {
      {sigma.at(in_rev), c.square_colour[0][a.corner_square_along(corner, in_rev)]},
      {sigma.at(out), c.square_colour[0][a.corner_square_along(corner, out)]}};
  std::sort(sides.begin(), sides.end());
  return {c.corner_colour[0][corner], std::move(sides)};
}

CornerKey corner_key_target(const ComplexView& b, const Colouring& c, int corner) {
  int in_rev = b.corner_dart_in_rev(corner);
  int out = b.corner_dart_out(corner);
  std::vector<std::pair<int, int>> sides = {
      {in_rev, c.square_colour[1][b.corner_square_along(corner, in_rev)]},
      {out, c.square_colour[1][b.corner_square_along(corner, out)]}};
  std::sort(sides.begin(), sides.end());
  return {c.corner_colour[1][corner], std::move(sides)};
}

}  // namespace

std::vector<StarIso> enumerate_star_isos(const ComplexView& a, const ComplexView& b, int u1,
                                         int u2, const Colouring& c, std::size_t max_count) {
  std::vector<StarIso> out;
  const auto& d1 = a.darts_at(u1);
  const auto& d2 = b.darts_at(u2);
  const auto& c1 = a.corners_at(u1);
  const auto& c2 = b.corners_at(u2);
  if (d1.size() != d2.size() || c1.size() != c2.size()) return out;

  // dart classes by colour
  std::map<int, std::vector<int>> src, tgt;  // colour -> positions / global darts
  for (std::size_t i = 0; i < d1.size(); ++i)
    src[c.dart_colour[0][d1[i]]].push_back(static_cast<int>(i));
  for (int d : d2) tgt[c.dart_colour[1][d]].push_back(d);
  if (src.size() != tgt.size()) return out;
  std::vector<std::vector<int>> spos, stgt;
  for (const auto& [colour, pos] : src) {
    auto it = tgt.find(colour);
    if (it == tgt.end() || it->second.size() != pos.size()) return out;
    spos.push_back(pos);
    stgt.push_back(it->second);
  }

  std::vector<int> dart_map(d1.size(), -1);
  std::vector<int> corner_map(c1.size(), -1);

  // With sigma fixed, enumerate the compatible corner bijections.
  auto kappa_phase = [&]() {
    std::map<int, int> sigma;  // global dart in a -> global dart in b
    for (std::size_t i = 0; i < d1.size(); ++i) sigma[d1[i]] = dart_map[i];

    std::map<CornerKey, std::vector<int>> csrc, ctgt;  // key -> positions / globals
    for (std::size_t i = 0; i < c1.size(); ++i)
      csrc[corner_key_mapped(a, c, c1[i], sigma)].push_back(static_cast<int>(i));
    for (int corner : c2) ctgt[corner_key_target(b, c, corner)].push_back(corner);
    if (csrc.size() != ctgt.size()) return;
    std::vector<std::vector<int>> kpos, ktgt;
    for (const auto& [key, pos] : csrc) {
      auto it = ctgt.find(key);
      if (it == ctgt.end() || it->second.size() != pos.size()) return;
      kpos.push_back(pos);
      ktgt.push_back(it->second);
    }
    std::function<void(std::size_t)> rec = [&](std::size_t g) {
      if (g == kpos.size()) {
        if (out.size() >= max_count)
          throw CapError(concat("star isomorphism enumeration exceeded cap of ", max_count));
        out.push_back({dart_map, corner_map});
        return;
      }
      std::vector<int> t = ktgt[g];  // sorted already (values ascending)
      do {
        for (std::size_t i = 0; i < t.size(); ++i) corner_map[kpos[g][i]] = t[i];
        rec(g + 1);
      } while (std::next_permutation(t.begin(), t.end()));
    };
    rec(0);
  };

  std::function<void(std::size_t)> sigma_rec = [&](std::size_t g) {
    if (g == spos.size()) {
      kappa_phase();
      return;
    }
    std::vector<int> t = stgt[g];
    do {
      for (std::size_t i = 0; i < t.size(); ++i) dart_map[spos[g][i]] = t[i];
      sigma_rec(g + 1);
    } while (std::next_permutation(t.begin(), t.end()));
  };
  sigma_rec(0);
  return out;
}

PolyPairEnumeration enumerate_poly_pairs(const ComplexView& x1, const ComplexView& x2,
                                         const Colouring& c, std::size_t cap) {
  PolyPairEnumeration out;

  std::map<int, std::pair<std::vector<int>, std::vector<int>>> by_colour;
  for (int v = 0; v < x1.n_vertices(); ++v) by_colour[c.vertex_colour[0][v]].first.push_back(v);
  for (int v = 0; v < x2.n_vertices(); ++v) by_colour[c.vertex_colour[1][v]].second.push_back(v);

  // cheap upper bound per star pair, to abort before enumerating
  auto pair_bound = [&](int u1) {
    std::map<int, std::size_t> dcls, ccls;
    for (int d : x1.darts_at(u1)) ++dcls[c.dart_colour[0][d]];
    for (int corner : x1.corners_at(u1)) ++ccls[c.corner_colour[0][corner]];
    std::uint64_t ub = 1;
    for (const auto& [colour, n] : dcls) {
      (void)colour;
      ub = sat_mul(ub, sat_factorial(n));
    }
    for (const auto& [colour, n] : ccls) {
      (void)colour;
      ub = sat_mul(ub, sat_factorial(n));
    }
    return ub;
  };

  std::uint64_t bound_total = 0;
  for (const auto& [colour, lists] : by_colour) {
    for (int u1 : lists.first) {
      std::uint64_t per = pair_bound(u1);
      bound_total = sat_add(bound_total, sat_mul(per, lists.second.size()));
      if (bound_total > cap)
        throw CapError(concat("polyhedral pair enumeration would exceed the cap of ", cap,
                              " (bound ", bound_total, " reached at vertex colour ", colour,
                              "; raise the cap to proceed)"));
    }
  }

  std::map<int, std::size_t> isos_per_colour;  // vertex colour -> per-pair count
  for (const auto& [colour, lists] : by_colour) {
    for (int u1 : lists.first) {
      for (int u2 : lists.second) {
        auto isos = enumerate_star_isos(x1, x2, u1, u2, c, cap - out.pairs.size());
        auto it = isos_per_colour.find(colour);
        if (it == isos_per_colour.end()) {
          isos_per_colour[colour] = isos.size();
        } else if (it->second != isos.size() && out.iso_counts_constant) {
          out.iso_counts_constant = false;
          out.homogeneity_report = concat(
              "star-iso count not constant on vertex colour ", colour, ": (",
              x1.vertex_id(u1), ", ", x2.vertex_id(u2), ") has ", isos.size(),
              " isomorphisms where ", it->second, " were expected");
        }
        for (auto& iso : isos) {
          PolyPair p;
          p.u1 = u1;
          p.u2 = u2;
          p.iso = std::move(iso);
          out.pairs.push_back(std::move(p));
          if (out.pairs.size() > cap)
            throw CapError(concat("polyhedral pair enumeration exceeded the cap of ", cap));
        }
      }
    }
  }
  for (std::size_t i = 0; i < out.pairs.size(); ++i) out.pairs[i].id = concat("p", i);
  return out;
}

std::vector<FacePair> enumerate_face_pairs(const ComplexView& x1, const ComplexView& x2,
                                           const Colouring& c, std::size_t cap) {
  std::vector<FacePair> out;

  std::map<int, std::pair<std::vector<int>, std::vector<int>>> by_colour;
  for (int e = 0; e < x1.n_edges(); ++e) by_colour[c.dart_colour[0][2 * e]].first.push_back(e);
  for (int e = 0; e < x2.n_edges(); ++e) by_colour[c.dart_colour[1][2 * e]].second.push_back(e);

  for (const auto& [colour, lists] : by_colour) {
    (void)colour;
    for (int e1 : lists.first) {
      const auto& sq1 = x1.squares_over(e1);
      for (int e2 : lists.second) {
        const auto& sq2 = x2.squares_over(e2);
        if (sq1.size() != sq2.size())
          throw Error("enumerate_face_pairs: equal edge colours with unequal square counts (bug)");
        // group square positions by colour
        std::map<int, std::vector<int>> src, tgt;
        bool feasible = true;
        for (std::size_t i = 0; i < sq1.size(); ++i)
          src[c.square_colour[0][sq1[i]]].push_back(static_cast<int>(i));
        for (std::size_t i = 0; i < sq2.size(); ++i)
          tgt[c.square_colour[1][sq2[i]]].push_back(static_cast<int>(i));
        if (src.size() != tgt.size()) feasible = false;
        std::vector<std::vector<int>> spos, stgt;
        for (const auto& [sc, pos] : src) {
          if (!feasible) break;
          auto it = tgt.find(sc);
          if (it == tgt.end() || it->second.size() != pos.size()) {
            feasible = false;
            break;
          }
          spos.push_back(pos);
          stgt.push_back(it->second);
        }
        if (!feasible) continue;

        std::vector<int> tau(sq1.size(), -1);
        std::function<void(std::size_t)> rec = [&](std::size_t g) {
          if (g == spos.size()) {
            FacePair f;
            f.e1 = e1;
            f.e2 = e2;
            f.tau = tau;
            out.push_back(std::move(f));
            if (out.size() > cap)
              throw CapError(concat("face pair enumeration exceeded the cap of ", cap));
            return;
          }
          std::vector<int> t = stgt[g];
          do {
            for (std::size_t i = 0; i < t.size(); ++i) tau[spos[g][i]] = t[i];
            rec(g + 1);
          } while (std::next_permutation(t.begin(), t.end()));
        };
        rec(0);
      }
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = concat("F", i);
  return out;
}

IncidenceTable incidences(const ComplexView& x1, const ComplexView& x2, const Colouring& c,
                          const std::vector<PolyPair>& pairs,
                          const std::vector<FacePair>& faces) {
  (void)c;
  IncidenceTable inc;
  inc.left.resize(faces.size());
  inc.right.resize(faces.size());
  inc.left_darts.resize(faces.size());
  inc.right_darts.resize(faces.size());

  std::map<std::tuple<int, int, std::vector<int>>, int> face_rows;
  for (std::size_t i = 0; i < faces.size(); ++i)
    face_rows[{faces[i].e1, faces[i].e2, faces[i].tau}] = static_cast<int>(i);

  auto position_over = [](const std::vector<int>& squares, int s) {
    auto it = std::lower_bound(squares.begin(), squares.end(), s);
    if (it == squares.end() || *it != s) throw Error("incidences: square not over its edge (bug)");
    return static_cast<int>(it - squares.begin());
  };

  for (std::size_t ip = 0; ip < pairs.size(); ++ip) {
    const PolyPair& p = pairs[ip];
    const auto& d1 = x1.darts_at(p.u1);
    const auto& c1 = x1.corners_at(p.u1);
    std::map<int, int> kappa;  // global corner in x1 -> global corner in x2
    for (std::size_t i = 0; i < c1.size(); ++i) kappa[c1[i]] = p.iso.corner_map[i];

    for (std::size_t i = 0; i < d1.size(); ++i) {
      int d = d1[i];
      int sd = p.iso.dart_map[i];
      if (x1.dart_forward(d) != x2.dart_forward(sd))
        throw Error("incidences: slot restriction flips orientation "
                    "(expected subdivided complexes)");
      int e1 = x1.dart_edge(d);
      int e2 = x2.dart_edge(sd);
      const auto& sq1 = x1.squares_over(e1);
      const auto& sq2 = x2.squares_over(e2);
      std::vector<int> tau(sq1.size(), -1);
      bool left_side = x1.dart_forward(d);
      for (std::size_t j = 0; j < sq1.size(); ++j) {
        int s = sq1[j];
        int corner = left_side ? x1.square_origin(s) : x1.square_terminus(s);
        if (x1.corner_vertex(corner) != p.u1)
          throw Error("incidences: square corner not at the slot vertex (bug)");
        int corner2 = kappa.at(corner);
        int s2 = x2.corner_square_along(corner2, sd);
        tau[j] = position_over(sq2, s2);
      }
      auto row = face_rows.find({e1, e2, tau});
      if (row == face_rows.end())
        throw Error(concat("incidences: the restriction of pair ", p.id, " at dart ",
                           to_string(x1.dart_of(d)),
                           " is not an enumerated face pair (bug)"));
      auto& side = left_side ? inc.left[row->second] : inc.right[row->second];
      auto& darts = left_side ? inc.left_darts[row->second] : inc.right_darts[row->second];
      if (!side.empty() && side.back() == static_cast<int>(ip))
        throw Error("incidences: pair listed twice on one side of a face pair (bug)");
      side.push_back(static_cast<int>(ip));
      darts.push_back(d);
    }
  }
  return inc;
}

std::pair<long, long> extension_counts(const IncidenceTable& inc, int face_row) {
  long nl = static_cast<long>(inc.left.at(face_row).size());
  long nr = static_cast<long>(inc.right.at(face_row).size());
  if (nl == 0 || nr == 0)
    throw Error(concat("face pair ", face_row, " has an empty ", nl == 0 ? "left" : "right",
                       " side: the colouring admitted a pair with no gluing partner "
                       "(possible inadmissible pair)"));
  return {nl, nr};
}

PruneResult prune_to_gluable_core(const ComplexView& x1, const ComplexView& x2,
                                  const Colouring& c, std::vector<PolyPair> pairs,
                                  const std::vector<FacePair>& faces) {
  PruneResult out;
  out.pairs = std::move(pairs);
  const std::size_t initial = out.pairs.size();
  while (true) {
    out.inc = incidences(x1, x2, c, out.pairs, faces);
    std::set<int> doomed;
    for (std::size_t r = 0; r < faces.size(); ++r) {
      bool lempty = out.inc.left[r].empty(), rempty = out.inc.right[r].empty();
      if (lempty == rempty) continue;  // balanced or vacuous
      for (int p : out.inc.left[r]) doomed.insert(p);
      for (int p : out.inc.right[r]) doomed.insert(p);
    }
    if (doomed.empty()) break;
    std::vector<PolyPair> kept;
    kept.reserve(out.pairs.size() - doomed.size());
    for (std::size_t i = 0; i < out.pairs.size(); ++i)
      if (!doomed.count(static_cast<int>(i))) kept.push_back(std::move(out.pairs[i]));
    out.pairs = std::move(kept);
    ++out.rounds;
  }
  out.removed = initial - out.pairs.size();
  return out;
}

EdgeColourCounts edge_colour_counts(const ComplexView& x1, const Colouring& c,
                                    const std::vector<FacePair>& faces,
                                    const IncidenceTable& inc) {
  (void)x1;
  EdgeColourCounts out;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    long nl = static_cast<long>(inc.left[i].size());
    long nr = static_cast<long>(inc.right[i].size());
    if (nl + nr == 0) continue;  // vacuous face pair: no slot restricts to it
    if (nl == 0 || nr == 0) {
      out.positive = false;
      out.report = concat("face pair ", faces[i].id, " has an empty ",
                          nl == 0 ? "left" : "right",
                          " side (possible inadmissible pair)");
      continue;
    }
    int colour = c.dart_colour[0][2 * faces[i].e1];
    auto [it, fresh] = out.per_edge_colour.try_emplace(colour, std::make_pair(nl, nr));
    if (!fresh && it->second != std::make_pair(nl, nr)) {
      out.constant = false;
      if (out.report.empty())
        out.report = concat("face pair ", faces[i].id, " has counts (", nl, ", ", nr,
                            ") but edge colour ", colour, " previously had (",
                            it->second.first, ", ", it->second.second, ")");
    }
  }
  return out;
}

}  // namespace fincover
