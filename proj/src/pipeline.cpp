#include "fincover/pipeline.hpp"

#include <chrono>
#include <sstream>

namespace fincover {

namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<std::pair<std::string, double>>& out) : out_(out) {}
  template <typename Fn>
  auto time(const std::string& name, Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      out_.push_back({name, ms_since(t0)});
    } else {
      auto result = fn();
      out_.push_back({name, ms_since(t0)});
      return result;
    }
  }

 private:
  static double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
  std::vector<std::pair<std::string, double>>& out_;
};

}  // namespace

std::string PipelineReport::render() const {
  std::ostringstream out;
  out << "poly pairs:  " << poly_pairs << "\n";
  out << "face pairs:  " << face_pairs << "\n";
  if (pruned_pairs > 0)
    out << "pruned:      " << pruned_pairs << " pair candidates without gluing partners\n";
  out << "solver:      " << solver_used;
  if (!fallback_reason.empty()) out << " (fallback: " << fallback_reason << ")";
  out << "\n";
  if (!weight_min.empty()) out << "weights:     " << weight_min << " .. " << weight_max << "\n";
  out << "star blocks: " << blocks << " (" << pre_extraction_original_vertices
      << " over original vertices)\n";
  out << "components:  " << components << "\n";
  out << "cover:       " << cover_vertices << " vertices, " << cover_edges << " edges, "
      << cover_fins << " fins\n";
  out << "degrees:     " << degree1 << " over the first base, " << degree2
      << " over the second\n";
  out << "verified:    " << (verified ? "yes" : "no") << "\n";
  return out.str();
}

PipelineResult run_cover_pipeline(const GraphWithFins& x1, const GraphWithFins& x2,
                                  const PipelineOptions& opt) {
  PipelineResult res;
  StageClock clock(res.report.timings_ms);

  for (const GraphWithFins* x : {&x1, &x2}) {
    ValidationReport rep = validate(*x);
    if (!rep.ok())
      throw Error("invalid input '" + x->name + "':\n" + rep.to_string());
  }

  // ---- refine (includes the subdivision)
  EquivalenceResult eq = clock.time("refine", [&] { return check_equivalence(x1, x2); });
  if (std::holds_alternative<MismatchCertificate>(eq)) {
    res.mismatch = std::get<MismatchCertificate>(std::move(eq));
    res.report.exit_code = 2;
    return res;
  }
  const CommonBase& base = std::get<CommonBase>(eq);
  ComplexView v1(base.sub1), v2(base.sub2);

  // ---- pairs
  PolyPairEnumeration P =
      clock.time("pairs", [&] { return enumerate_poly_pairs(v1, v2, base.colouring, opt.pair_cap); });
  std::vector<FacePair> F = clock.time(
      "faces", [&] { return enumerate_face_pairs(v1, v2, base.colouring, opt.pair_cap); });
  res.report.poly_pairs = P.pairs.size();
  res.report.face_pairs = F.size();

  // ---- prune to the gluable core
  // Colour preservation can admit pairs that extend to no cover (the
  // admissibility gap); they sit on one-sided face pairs and are removed.
  PruneResult core = clock.time("prune", [&] {
    return prune_to_gluable_core(v1, v2, base.colouring, std::move(P.pairs), F);
  });
  res.report.pruned_pairs = core.removed;
  if (core.removed > 0)
    res.diagnostic = concat("discarded ", core.removed,
                            " colour-preserving pair candidates with no gluing partner "
                            "(inadmissible pairs)");
  if (core.pairs.empty()) {
    res.infeasible = InfeasibleCertificate{
        {}, "every polyhedral pair candidate was eliminated: no pair has gluing "
            "partners on all of its faces"};
    res.report.solver_used = opt.solver == SolverChoice::Measure ? "measure" : "kernel";
    res.report.exit_code = 3;
    return res;
  }

  // ---- solve
  bool want_measure = opt.solver == SolverChoice::Measure;
  std::string fallback;
  if (want_measure && !P.iso_counts_constant) fallback = P.homogeneity_report;

  std::optional<Weighting> weighting;
  if (want_measure && fallback.empty()) {
    EdgeColourCounts counts = edge_colour_counts(v1, base.colouring, F, core.inc);
    if (!counts.positive || !counts.constant) {
      fallback = counts.report;
    } else {
      MeasureResult mr = clock.time(
          "solve", [&] { return solve_measure(base.quotient, counts.per_edge_colour); });
      if (std::holds_alternative<MeasureAssignment>(mr)) {
        Weighting w = weights_from_measure(std::get<MeasureAssignment>(mr), v1,
                                           base.colouring, core.pairs);
        if (build_system(core.pairs, F, core.inc).satisfied_by(w.omega)) {
          weighting = std::move(w);
          res.report.solver_used = "measure";
        } else {
          fallback = "measure weighting failed the residual check";
        }
      } else {
        fallback = std::get<RatioInconsistency>(mr).message;
      }
    }
  }

  if (!weighting) {
    // Exact kernel search with Farkas-driven support shrinking: a pair with a
    // positive coefficient in the certificate combination is zero in every
    // nonnegative solution, so it can never be glued and is eliminated.
    res.report.solver_used = "kernel";
    res.report.fallback_reason = fallback;
    while (true) {
      GluingSystem sys = build_system(core.pairs, F, core.inc);
      KernelResult kr = clock.time("solve-kernel", [&] { return solve_positive_kernel(sys); });
      if (std::holds_alternative<Weighting>(kr)) {
        weighting = std::get<Weighting>(std::move(kr));
        break;
      }
      const auto& cert = std::get<InfeasibleCertificate>(kr);
      std::vector<Rational> combo(core.pairs.size(), Rational(0));
      for (std::size_t r = 0; r < sys.rows.size(); ++r) {
        for (int j : sys.rows[r].plus) combo[j] += cert.row_combination[r];
        for (int j : sys.rows[r].minus) combo[j] -= cert.row_combination[r];
      }
      std::vector<PolyPair> kept;
      for (std::size_t j = 0; j < core.pairs.size(); ++j)
        if (combo[j] == 0) kept.push_back(std::move(core.pairs[j]));
      if (kept.size() == core.pairs.size() || kept.empty()) {
        res.infeasible = cert;
        res.report.exit_code = 3;
        if (res.diagnostic.empty())
          res.diagnostic = "possible inadmissible pair: the gluing equations have no "
                           "strictly positive solution on any pair subset";
        return res;
      }
      ++res.report.support_shrink_rounds;
      PruneResult again =
          prune_to_gluable_core(v1, v2, base.colouring, std::move(kept), F);
      core.pairs = std::move(again.pairs);
      core.inc = std::move(again.inc);
      res.report.pruned_pairs = res.report.poly_pairs - core.pairs.size();
      if (core.pairs.empty()) {
        res.infeasible = InfeasibleCertificate{
            {}, "support shrinking eliminated every pair candidate"};
        res.report.exit_code = 3;
        return res;
      }
    }
  }

  {
    Int lo = weighting->omega[0], hi = weighting->omega[0];
    for (const auto& w : weighting->omega) {
      if (w < lo) lo = w;
      if (w > hi) hi = w;
    }
    res.report.weight_min = lo.str();
    res.report.weight_max = hi.str();
  }

  res.report.pruned_pairs = res.report.poly_pairs - core.pairs.size();

  // ---- glue
  AssembledCover assembled = clock.time(
      "glue", [&] { return assemble(v1, v2, core.pairs, F, core.inc, *weighting, opt.seed); });
  res.report.blocks = static_cast<long>(assembled.cover.vertices.size());
  res.report.pre_extraction_original_vertices =
      res.report.blocks - static_cast<long>(assembled.cover.midpoints.size());
  res.report.components = components(assembled.cover).size();

  AssembledCover chosen =
      opt.keep_all_components ? assembled : extract_component(assembled);

  // ---- unsubdivide
  auto [cover, maps] = clock.time("unsubdivide", [&] {
    return unsubdivide_all(chosen.cover,
                           {{&base.rec1, &chosen.phi1}, {&base.rec2, &chosen.phi2}});
  });
  res.report.cover_vertices = static_cast<long>(cover.vertices.size());
  res.report.cover_edges = static_cast<long>(cover.edges.size());
  res.report.cover_fins = static_cast<long>(cover.fins.size());

  // ---- verify
  bool ok = clock.time("verify", [&] {
    if (opt.keep_all_components) {
      CoverResult r1 = check_cover(cover, maps[0], x1);
      if (std::holds_alternative<CoverViolation>(r1)) {
        res.violation = std::get<CoverViolation>(std::move(r1));
        return false;
      }
      CoverResult r2 = check_cover(cover, maps[1], x2);
      if (std::holds_alternative<CoverViolation>(r2)) {
        res.violation = std::get<CoverViolation>(std::move(r2));
        return false;
      }
      res.report.degree1 = std::get<CoverCertificate>(r1).degree;
      res.report.degree2 = std::get<CoverCertificate>(r2).degree;
      return true;
    }
    CommonResult r = check_common(cover, maps[0], x1, maps[1], x2);
    if (std::holds_alternative<CoverViolation>(r)) {
      res.violation = std::get<CoverViolation>(std::move(r));
      return false;
    }
    const auto& [c1, c2] = std::get<std::pair<CoverCertificate, CoverCertificate>>(r);
    res.report.degree1 = c1.degree;
    res.report.degree2 = c2.degree;
    return true;
  });

  if (!ok) {
    res.report.exit_code = 4;
    res.diagnostic =
        "verification rejected the assembled cover: possible inadmissible pair "
        "(a colour-preserving pair that does not extend to the universal cover)";
    return res;
  }

  res.report.verified = true;
  res.report.exit_code = 0;
  res.cover = CommonCover{std::move(cover), std::move(maps[0]), std::move(maps[1])};
  return res;
}

}  // namespace fincover
