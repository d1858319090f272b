#include "fincover/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fincover {

using nlohmann::json;

namespace {

constexpr int kInstanceVersion = 1;
constexpr int kMapsVersion = 1;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error("parse error at " + where + ": " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) fail(where, "unknown field '" + it.key() + "'");
}

std::string want_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

void check_id(const std::string& id, const std::string& where) {
  if (id.empty()) fail(where, "empty id");
  if (id.front() == '-') fail(where, "ids must not start with '-' (reserved for reversed darts)");
}

Dart parse_signed_edge(const std::string& s, const std::string& where) {
  if (s.empty()) fail(where, "empty dart");
  if (s.front() == '-') {
    if (s.size() == 1) fail(where, "empty edge id after '-'");
    return {s.substr(1), false};
  }
  return {s, true};
}

GraphWithFins parse_complex(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  reject_unknown(j, {"name", "vertices", "edges", "fins"}, where);
  GraphWithFins x;
  if (!j.contains("name")) fail(where, "missing 'name'");
  x.name = want_string(j.at("name"), where + ".name");
  if (!j.contains("vertices") || !j.at("vertices").is_array())
    fail(where, "missing or non-array 'vertices'");
  int i = 0;
  for (const auto& v : j.at("vertices")) {
    std::string id = want_string(v, concat(where, ".vertices[", i, "]"));
    check_id(id, concat(where, ".vertices[", i, "]"));
    x.vertices.push_back(id);
    ++i;
  }
  if (!j.contains("edges") || !j.at("edges").is_array())
    fail(where, "missing or non-array 'edges'");
  i = 0;
  for (const auto& e : j.at("edges")) {
    std::string ew = concat(where, ".edges[", i, "]");
    if (!e.is_array() || e.size() != 3) fail(ew, "expected [id, tail, head]");
    EdgeRec rec{want_string(e[0], ew), want_string(e[1], ew), want_string(e[2], ew)};
    check_id(rec.id, ew);
    x.edges.push_back(rec);
    ++i;
  }
  if (j.contains("fins")) {
    if (!j.at("fins").is_array()) fail(where + ".fins", "expected an array");
    i = 0;
    for (const auto& f : j.at("fins")) {
      std::string fw = concat(where, ".fins[", i, "]");
      if (!f.is_array()) fail(fw, "expected an array of signed edge ids");
      FinCircle circle;
      int p = 0;
      for (const auto& d : f) {
        circle.darts.push_back(
            parse_signed_edge(want_string(d, concat(fw, "[", p, "]")), concat(fw, "[", p, "]")));
        ++p;
      }
      x.fins.push_back(std::move(circle));
      ++i;
    }
  }
  finalize(x);

  // fins must reference existing edges; report with field context here rather
  // than leaving it to validate()
  std::set<EdgeId> eids;
  for (const auto& e : x.edges) eids.insert(e.id);
  i = 0;
  for (const auto& f : x.fins) {
    int p = 0;
    for (const auto& d : f.darts) {
      if (!eids.count(d.edge))
        fail(concat(where, ".fins[", i, "][", p, "]"), "unknown edge id '" + d.edge + "'");
      ++p;
    }
    ++i;
  }
  return x;
}

json complex_to_json(const GraphWithFins& x) {
  GraphWithFins y = x;
  finalize(y);
  json j;
  j["name"] = y.name;
  j["vertices"] = y.vertices;
  json edges = json::array();
  for (const auto& e : y.edges) edges.push_back({e.id, e.tail, e.head});
  j["edges"] = edges;
  if (!y.fins.empty()) {
    json fins = json::array();
    for (const auto& f : y.fins) {
      json circle = json::array();
      for (const auto& d : f.darts) circle.push_back(to_string(d));
      fins.push_back(circle);
    }
    j["fins"] = fins;
  }
  return j;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(concat("parse error: invalid JSON: ", e.what()));
  }
  if (!j.is_object()) fail("$", "expected a JSON object");
  reject_unknown(j, {"format", "version", "complexes", "expected"}, "$");
  if (!j.contains("format") || j.at("format") != "gwf-instance")
    fail("$.format", "expected \"gwf-instance\"");
  if (!j.contains("version") || !j.at("version").is_number_integer())
    fail("$.version", "missing integer version");
  if (j.at("version").get<int>() != kInstanceVersion)
    fail("$.version", concat("unsupported version ", j.at("version").dump(), " (supported: ",
                             kInstanceVersion, ")"));
  if (!j.contains("complexes") || !j.at("complexes").is_array())
    fail("$.complexes", "missing or non-array");
  Instance inst;
  int i = 0;
  for (const auto& c : j.at("complexes")) {
    inst.complexes.push_back(parse_complex(c, concat("$.complexes[", i, "]")));
    ++i;
  }
  if (inst.complexes.empty() || inst.complexes.size() > 2)
    fail("$.complexes", "expected one or two complexes");
  if (j.contains("expected")) {
    const auto& e = j.at("expected");
    if (!e.is_object()) fail("$.expected", "expected an object");
    reject_unknown(e, {"equivalent", "notes"}, "$.expected");
    inst.expected.present = true;
    if (e.contains("equivalent")) {
      if (!e.at("equivalent").is_boolean()) fail("$.expected.equivalent", "expected a boolean");
      inst.expected.equivalent = e.at("equivalent").get<bool>();
    }
    if (e.contains("notes")) inst.expected.notes = want_string(e.at("notes"), "$.expected.notes");
  }
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  json j;
  j["format"] = "gwf-instance";
  j["version"] = kInstanceVersion;
  json cs = json::array();
  for (const auto& c : inst.complexes) cs.push_back(complex_to_json(c));
  j["complexes"] = cs;
  if (inst.expected.present) {
    json e = json::object();
    if (inst.expected.equivalent.has_value()) e["equivalent"] = *inst.expected.equivalent;
    if (!inst.expected.notes.empty()) e["notes"] = inst.expected.notes;
    j["expected"] = e;
  }
  return j.dump(2) + "\n";
}

CellMaps parse_maps(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(concat("parse error: invalid JSON: ", e.what()));
  }
  if (!j.is_object()) fail("$", "expected a JSON object");
  reject_unknown(j, {"format", "version", "cover", "base", "vertices", "edges", "fins"}, "$");
  if (!j.contains("format") || j.at("format") != "gwf-cellmaps")
    fail("$.format", "expected \"gwf-cellmaps\"");
  if (!j.contains("version") || !j.at("version").is_number_integer() ||
      j.at("version").get<int>() != kMapsVersion)
    fail("$.version", "unsupported version");
  CellMaps m;
  if (j.contains("cover")) m.cover_name = want_string(j.at("cover"), "$.cover");
  if (j.contains("base")) m.base_name = want_string(j.at("base"), "$.base");
  if (j.contains("vertices")) {
    if (!j.at("vertices").is_object()) fail("$.vertices", "expected an object");
    for (auto it = j.at("vertices").begin(); it != j.at("vertices").end(); ++it)
      m.vertex_map[it.key()] = want_string(it.value(), "$.vertices." + it.key());
  }
  if (j.contains("edges")) {
    if (!j.at("edges").is_object()) fail("$.edges", "expected an object");
    for (auto it = j.at("edges").begin(); it != j.at("edges").end(); ++it)
      m.edge_map[it.key()] = parse_signed_edge(
          want_string(it.value(), "$.edges." + it.key()), "$.edges." + it.key());
  }
  if (j.contains("fins")) {
    if (!j.at("fins").is_object()) fail("$.fins", "expected an object");
    for (auto it = j.at("fins").begin(); it != j.at("fins").end(); ++it) {
      const std::string where = "$.fins." + it.key();
      const json& f = it.value();
      if (!f.is_object()) fail(where, "expected an object");
      reject_unknown(f, {"fin", "dir", "offset"}, where);
      FinImage img;
      if (!f.contains("fin")) fail(where, "missing 'fin'");
      img.fin = want_string(f.at("fin"), where + ".fin");
      if (!f.contains("dir") || !f.at("dir").is_number_integer() ||
          (f.at("dir").get<int>() != 1 && f.at("dir").get<int>() != -1))
        fail(where + ".dir", "expected 1 or -1");
      img.dir = f.at("dir").get<int>();
      if (!f.contains("offset") || !f.at("offset").is_number_integer())
        fail(where + ".offset", "missing integer offset");
      img.offset = f.at("offset").get<int>();
      m.fin_map[it.key()] = img;
    }
  }
  return m;
}

std::string serialize_maps(const CellMaps& maps) {
  json j;
  j["format"] = "gwf-cellmaps";
  j["version"] = kMapsVersion;
  j["cover"] = maps.cover_name;
  j["base"] = maps.base_name;
  json vs = json::object();
  for (const auto& [k, v] : maps.vertex_map) vs[k] = v;
  j["vertices"] = vs;
  json es = json::object();
  for (const auto& [k, v] : maps.edge_map) es[k] = to_string(v);
  j["edges"] = es;
  json fs = json::object();
  for (const auto& [k, v] : maps.fin_map)
    fs[k] = json{{"fin", v.fin}, {"dir", v.dir}, {"offset", v.offset}};
  j["fins"] = fs;
  return j.dump(2) + "\n";
}

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string export_dot(const GraphWithFins& x) {
  GraphWithFins y = x;
  finalize(y);
  std::ostringstream out;
  out << "digraph " << dot_quote(y.name) << " {\n";
  for (const auto& v : y.vertices) out << "  " << dot_quote(v) << ";\n";
  for (const auto& e : y.edges)
    out << "  " << dot_quote(e.tail) << " -> " << dot_quote(e.head)
        << " [label=" << dot_quote(e.id) << "];\n";
  for (const auto& f : y.fins) {
    out << "  // fin " << f.id << ":";
    for (const auto& d : f.darts) out << " " << to_string(d);
    out << "\n";
  }
  out << "}\n";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace fincover
