#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fincover/glue.hpp"
#include "fincover/verify.hpp"

namespace fincover {

enum class SolverChoice { Measure, Kernel };

struct PipelineOptions {
  std::uint64_t seed = 0;
  SolverChoice solver = SolverChoice::Measure;
  bool keep_all_components = false;
  std::size_t pair_cap = kDefaultPairCap;
};

// The verified common cover of the two (unsubdivided) inputs.
struct CommonCover {
  GraphWithFins cover;
  CellMaps phi1, phi2;
};

struct PipelineReport {
  std::size_t poly_pairs = 0;
  std::size_t face_pairs = 0;
  std::size_t pruned_pairs = 0;     // candidates discarded as inadmissible
  int support_shrink_rounds = 0;    // Farkas-driven eliminations
  std::string solver_used;      // "measure" or "kernel"
  std::string fallback_reason;  // why the measure route was abandoned, if it was
  std::string weight_min, weight_max;
  long blocks = 0;                            // pre-extraction star blocks
  long pre_extraction_original_vertices = 0;  // blocks over original vertices
  std::size_t components = 0;
  long cover_vertices = 0, cover_edges = 0, cover_fins = 0;
  long degree1 = 0, degree2 = 0;
  bool verified = false;
  int exit_code = 1;
  std::vector<std::pair<std::string, double>> timings_ms;

  std::string render() const;  // deterministic (no timings)
};

struct PipelineResult {
  PipelineReport report;
  std::optional<CommonCover> cover;                 // exit 0
  std::optional<MismatchCertificate> mismatch;      // exit 2
  std::optional<InfeasibleCertificate> infeasible;  // exit 3
  std::optional<CoverViolation> violation;          // exit 4
  std::string diagnostic;
};

// subdivide -> refine -> pairs -> solve -> glue -> unsubdivide -> verify.
// Exit codes: 0 verified cover, 2 mismatch certificate, 3 solver infeasible,
// 4 verification failed.  Invalid inputs and cap overruns throw Error.
PipelineResult run_cover_pipeline(const GraphWithFins& x1, const GraphWithFins& x2,
                                  const PipelineOptions& opt = {});

}  // namespace fincover
