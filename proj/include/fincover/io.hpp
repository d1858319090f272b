#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fincover/complex.hpp"

namespace fincover {

// An instance file: one or two complexes plus an optional expectation block.
// Format "gwf-instance", version 1; see docs/formats.md.
struct Instance {
  std::vector<GraphWithFins> complexes;
  struct Expected {
    bool present = false;
    std::optional<bool> equivalent;
    std::string notes;
  } expected;
};

// Throws Error with field context on malformed input; unknown fields are
// rejected.  Fin ids are assigned positionally ("f0", "f1", ...).
Instance parse_instance(const std::string& text);
std::string serialize_instance(const Instance& inst);

// Cell maps files, format "gwf-cellmaps", version 1.
CellMaps parse_maps(const std::string& text);
std::string serialize_maps(const CellMaps& maps);

// Deterministic Graphviz export: one node statement per vertex, one edge
// statement per edge, one fin annotation line per fin.
std::string export_dot(const GraphWithFins& x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace fincover
