#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "fincover/gen.hpp"
#include "fincover/io.hpp"
#include "fincover/pipeline.hpp"

using namespace fincover;

namespace {

std::size_t pair_cap_from_env() {
  const char* cap = std::getenv("FINCOVER_PAIR_CAP");
  if (!cap) return kDefaultPairCap;
  char* end = nullptr;
  unsigned long long v = std::strtoull(cap, &end, 10);
  if (end == cap || v == 0) throw Error("FINCOVER_PAIR_CAP must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::pair<GraphWithFins, GraphWithFins> load_two(const std::string& path1,
                                                 const std::string& path2) {
  if (path2.empty()) {
    Instance inst = parse_instance(read_file(path1));
    if (inst.complexes.size() != 2)
      throw Error("'" + path1 + "' holds one complex; pass a second file");
    return {inst.complexes[0], inst.complexes[1]};
  }
  Instance a = parse_instance(read_file(path1));
  Instance b = parse_instance(read_file(path2));
  return {a.complexes.front(), b.complexes.front()};
}

GraphWithFins load_one(const std::string& path, const std::string& prefer_name = "") {
  Instance inst = parse_instance(read_file(path));
  if (!prefer_name.empty())
    for (const auto& c : inst.complexes)
      if (c.name == prefer_name) return c;
  return inst.complexes.front();
}

void write_instance_file(const std::string& path, const GraphWithFins& x) {
  Instance inst;
  inst.complexes.push_back(x);
  write_file(path, serialize_instance(inst));
}

void print_timings(const std::vector<std::pair<std::string, double>>& timings) {
  for (const auto& [stage, ms] : timings)
    std::cerr << "[time] " << stage << ": " << ms << " ms\n";
}

void print_certificate(const CoverCertificate& cert, const std::string& base) {
  std::cout << "covering map onto '" << base << "' verified: degree " << cert.degree << "\n";
  for (const auto& [fin, w] : cert.windings)
    std::cout << "  fin " << fin << ": winding " << w << "\n";
}

int cmd_check(const std::string& f1, const std::string& f2) {
  auto [x1, x2] = load_two(f1, f2);
  EquivalenceResult res = check_equivalence(x1, x2);
  if (std::holds_alternative<MismatchCertificate>(res)) {
    std::cout << std::get<MismatchCertificate>(res).to_string() << "\n";
    return 2;
  }
  const CommonBase& base = std::get<CommonBase>(res);
  std::cout << "equivalent: the stable colouring is shared by both complexes\n";
  std::cout << "vertex colours: " << base.quotient.vertex_colours.size()
            << ", edge colours: " << base.quotient.edge_colours.size()
            << ", square colours: " << base.quotient.square_colours.size() << "\n";
  for (const auto& vc : base.quotient.vertex_colours)
    std::cout << "  vertex colour " << vc.colour << (vc.midpoint ? " (midpoint)" : "")
              << ": " << vc.mult[0] << " in '" << x1.name << "', " << vc.mult[1] << " in '"
              << x2.name << "'\n";
  return 0;
}

int cmd_cover(const std::string& f1, const std::string& f2, std::uint64_t seed,
              const std::string& solver, bool keep_all, const std::string& out) {
  auto [x1, x2] = load_two(f1, f2);
  PipelineOptions opt;
  opt.seed = seed;
  opt.solver = solver == "kernel" ? SolverChoice::Kernel : SolverChoice::Measure;
  opt.keep_all_components = keep_all;
  opt.pair_cap = pair_cap_from_env();

  PipelineResult res = run_cover_pipeline(x1, x2, opt);
  print_timings(res.report.timings_ms);
  switch (res.report.exit_code) {
    case 0:
      std::cout << res.report.render();
      if (!out.empty()) {
        write_instance_file(out, res.cover->cover);
        write_file(out + ".phi1.json", serialize_maps(res.cover->phi1));
        write_file(out + ".phi2.json", serialize_maps(res.cover->phi2));
        std::cout << "wrote " << out << ", " << out << ".phi1.json, " << out << ".phi2.json\n";
      }
      return 0;
    case 2:
      std::cout << res.mismatch->to_string() << "\n";
      return 2;
    case 3:
      std::cout << "gluing equations are infeasible: " << res.infeasible->message << "\n";
      if (!res.diagnostic.empty()) std::cout << res.diagnostic << "\n";
      return 3;
    case 4:
      std::cout << res.report.render();
      std::cout << "verification failed: " << res.violation->to_string() << "\n";
      if (!res.diagnostic.empty()) std::cout << res.diagnostic << "\n";
      return 4;
    default:
      return 1;
  }
}

int cmd_nfold(const std::string& file, int n, std::uint64_t seed, const std::string& out) {
  GraphWithFins x = load_one(file);
  CoverWithMap r = n_fold_cover(x, n, seed);
  auto res = check_cover(r.cover, r.map, x);
  if (std::holds_alternative<CoverViolation>(res))
    throw Error("n-fold cover failed verification (bug): " +
                std::get<CoverViolation>(res).to_string());
  print_certificate(std::get<CoverCertificate>(res), x.name);
  if (!out.empty()) {
    write_instance_file(out, r.cover);
    write_file(out + ".phi.json", serialize_maps(r.map));
    std::cout << "wrote " << out << ", " << out << ".phi.json\n";
  }
  return 0;
}

int cmd_verify(const std::string& cover_file, const std::string& maps_file,
               const std::string& base_file) {
  CellMaps maps = parse_maps(read_file(maps_file));
  GraphWithFins cover = load_one(cover_file, maps.cover_name);
  GraphWithFins base = load_one(base_file, maps.base_name);
  CoverResult res = check_cover(cover, maps, base);
  if (std::holds_alternative<CoverViolation>(res)) {
    std::cout << "violation: " << std::get<CoverViolation>(res).to_string() << "\n";
    return 4;
  }
  print_certificate(std::get<CoverCertificate>(res), base.name);
  return 0;
}

int cmd_gen(std::uint64_t seed, const GenParams& params, const std::string& out) {
  auto [a, b] = gen_instance(params, seed);
  Instance inst;
  inst.complexes = {a, b};
  inst.expected.present = true;
  inst.expected.equivalent = true;
  inst.expected.notes = "voltage lifts of a common base";
  std::string text = serialize_instance(inst);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return 0;
}

int cmd_export(const std::string& file, const std::string& out) {
  GraphWithFins x = load_one(file);
  ValidationReport rep = validate(x);
  if (!rep.ok()) throw Error("invalid complex:\n" + rep.to_string());
  std::string dot = export_dot(x);
  if (out.empty())
    std::cout << dot;
  else
    write_file(out, dot);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"common finite covers of graphs with fins"};
  app.require_subcommand(1);

  std::string f1, f2, out, solver = "measure", maps_file, base_file;
  std::uint64_t seed = 0;
  int n = 1;
  bool keep_all = false;
  bool want_dot = false;
  GenParams params;

  auto* check = app.add_subcommand("check", "decide whether universal covers match");
  check->add_option("first", f1)->required();
  check->add_option("second", f2);

  auto* cover = app.add_subcommand("cover", "construct and certify a common finite cover");
  cover->add_option("first", f1)->required();
  cover->add_option("second", f2);
  cover->add_option("--seed", seed, "gluing bijection seed (0 = sorted zip)");
  cover->add_option("--solver", solver, "measure|kernel")
      ->check(CLI::IsMember({"measure", "kernel"}));
  cover->add_flag("--keep-all-components", keep_all, "skip component extraction");
  cover->add_option("--out", out, "write the cover and both cell maps");

  auto* nfold = app.add_subcommand("nfold", "build a degree-n cover of one complex");
  nfold->add_option("complex", f1)->required();
  nfold->add_option("n", n)->required()->check(CLI::PositiveNumber);
  nfold->add_option("--seed", seed, "gluing bijection seed (0 = disjoint copies)");
  nfold->add_option("--out", out, "write the cover and its cell map");

  auto* verify = app.add_subcommand("verify", "certify COVER MAPS BASE");
  verify->add_option("cover", f1)->required();
  verify->add_option("maps", maps_file)->required();
  verify->add_option("base", base_file)->required();

  auto* gen = app.add_subcommand("gen", "generate a solvable two-complex instance");
  gen->add_option("--seed", seed)->required();
  gen->add_option("--out", out, "output file (default: stdout)");
  gen->add_option("--max-vertices", params.max_vertices)->check(CLI::PositiveNumber);
  gen->add_option("--max-edges", params.max_edges)->check(CLI::PositiveNumber);
  gen->add_option("--max-fins", params.max_fins);
  gen->add_option("--max-fin-length", params.max_fin_length)->check(CLI::PositiveNumber);
  gen->add_option("--degree1", params.degree1)->check(CLI::PositiveNumber);
  gen->add_option("--degree2", params.degree2)->check(CLI::PositiveNumber);

  auto* exp = app.add_subcommand("export", "export a complex");
  exp->add_option("complex", f1)->required();
  exp->add_flag("--dot", want_dot, "Graphviz DOT format");
  exp->add_option("--out", out, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(f1, f2);
    if (cover->parsed()) return cmd_cover(f1, f2, seed, solver, keep_all, out);
    if (nfold->parsed()) return cmd_nfold(f1, n, seed, out);
    if (verify->parsed()) return cmd_verify(f1, maps_file, base_file);
    if (gen->parsed()) return cmd_gen(seed, params, out);
    if (exp->parsed()) return cmd_export(f1, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
