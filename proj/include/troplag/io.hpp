#pragma once

// JSON loading and emission for curves, domains, line configurations and
// reports. Rationals travel as "p/q" strings; integers as numbers while they
// stay below 2^53 in magnitude, as decimal strings beyond.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "troplag/curve.hpp"
#include "troplag/domain.hpp"
#include "troplag/error.hpp"
#include "troplag/lattice.hpp"
#include "troplag/multiplicity.hpp"
#include "troplag/topology.hpp"

namespace troplag::io {

using Json = nlohmann::ordered_json;

/// A line file may also carry the degree used by the enumerator; entry j
/// meets line j.
struct LinesFile {
  LineConfiguration lines;
  std::optional<std::vector<IntVector>> degree;
};

// ---------------------------------------------------------------------------
// Scalars

inline Json to_json(const Integer& x) {
  static const Integer safe("9007199254740992");  // 2^53
  if (abs(x) < safe) return Json(x.get_si());
  return Json(x.get_str());
}

inline Json to_json(const Rational& q) { return Json(rational_str(q)); }

inline Json to_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline Json to_json(const RationalVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline Json to_json(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    a.push_back(row);
  }
  return a;
}

namespace detail {

/// Walks a parsed document and reports problems with their JSON pointer.
class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void schema(const std::string& ptr, const std::string& what) const {
    throw Error(ErrorCode::SchemaError, source_ + ": " + (ptr.empty() ? "/" : ptr) + ": " + what);
  }

  const Json& field(const Json& obj, const std::string& ptr, const std::string& key) const {
    if (!obj.is_object()) schema(ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) schema(ptr + "/" + key, "missing");
    return *it;
  }

  const Json* optional_field(const Json& obj, const std::string& key) const {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
  }

  const Json& array(const Json& j, const std::string& ptr) const {
    if (!j.is_array()) schema(ptr, "expected an array");
    return j;
  }

  std::string string(const Json& j, const std::string& ptr) const {
    if (!j.is_string()) schema(ptr, "expected a string");
    return j.get<std::string>();
  }

  Integer integer(const Json& j, const std::string& ptr) const {
    if (j.is_number_integer()) return j.is_number_unsigned() ? Integer(std::to_string(j.get<unsigned long>())) : Integer(j.get<long>());
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      Rational q = rational(j, ptr);
      if (q.get_den() != 1 || s.find('/') != std::string::npos) schema(ptr, "expected an integer, got \"" + s + "\"");
      return q.get_num();
    }
    schema(ptr, "expected an integer");
  }

  Rational rational(const Json& j, const std::string& ptr) const {
    if (j.is_number_integer()) return Rational(integer(j, ptr));
    if (!j.is_string()) schema(ptr, "expected a \"p/q\" string");
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, source_ + ": " + ptr + ": " + e.detail());
    }
  }

  std::size_t count(const Json& j, const std::string& ptr) const {
    Integer n = integer(j, ptr);
    if (n < 1 || n > 64) schema(ptr, "expected a dimension between 1 and 64");
    return n.get_ui();
  }

  IntVector int_vector(const Json& j, const std::string& ptr, std::size_t dim) const {
    array(j, ptr);
    if (j.size() != dim) schema(ptr, "expected " + std::to_string(dim) + " coordinates");
    std::vector<Integer> xs;
    for (std::size_t i = 0; i < j.size(); ++i) xs.push_back(integer(j[i], ptr + "/" + std::to_string(i)));
    return IntVector(std::move(xs));
  }

  RationalVector rational_vector(const Json& j, const std::string& ptr, std::size_t dim) const {
    array(j, ptr);
    if (j.size() != dim) schema(ptr, "expected " + std::to_string(dim) + " coordinates");
    std::vector<Rational> xs;
    for (std::size_t i = 0; i < j.size(); ++i) xs.push_back(rational(j[i], ptr + "/" + std::to_string(i)));
    return RationalVector(std::move(xs));
  }

 private:
  std::string source_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Parsing

/// Parses JSON text; syntax errors carry the line number.
inline Json parse(const std::string& text, const std::string& source = "<input>") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line) + ": malformed JSON");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline TropicalCurve curve_from_json(const Json& j, const std::string& source = "<curve>") {
  detail::Reader r(source);
  std::size_t n = r.count(r.field(j, "", "dim"), "/dim");
  const auto& jv = r.array(r.field(j, "", "vertices"), "/vertices");
  std::vector<CurveVertex> vs;
  for (std::size_t i = 0; i < jv.size(); ++i) {
    std::string p = "/vertices/" + std::to_string(i);
    std::string id = r.string(r.field(jv[i], p, "id"), p + "/id");
    for (const auto& v : vs)
      if (v.id == id) r.schema(p + "/id", "duplicate vertex id '" + id + "'");
    vs.push_back({id, r.rational_vector(r.field(jv[i], p, "pos"), p + "/pos", n)});
  }
  auto lookup = [&](const Json& x, const std::string& p) {
    std::string id = r.string(x, p);
    for (std::size_t v = 0; v < vs.size(); ++v)
      if (vs[v].id == id) return v;
    r.schema(p, "unknown vertex '" + id + "'");
  };
  const auto& je = r.array(r.field(j, "", "edges"), "/edges");
  std::vector<CurveEdge> es;
  for (std::size_t i = 0; i < je.size(); ++i) {
    std::string p = "/edges/" + std::to_string(i);
    CurveEdge e;
    e.tail = lookup(r.field(je[i], p, "tail"), p + "/tail");
    if (const auto* h = r.optional_field(je[i], "head")) e.head = lookup(*h, p + "/head");
    e.dir = r.int_vector(r.field(je[i], p, "dir"), p + "/dir", n);
    if (const auto* w = r.optional_field(je[i], "weight")) {
      e.weight = r.integer(*w, p + "/weight");
      if (e.weight < 1) r.schema(p + "/weight", "weight must be positive");
    }
    if (const auto* l = r.optional_field(je[i], "leaf_label")) {
      Integer lab = r.integer(*l, p + "/leaf_label");
      if (!lab.fits_slong_p()) r.schema(p + "/leaf_label", "label out of range");
      e.leaf_label = lab.get_si();
    }
    es.push_back(std::move(e));
  }
  return TropicalCurve(n, std::move(vs), std::move(es));
}

inline PolyhedralDomain domain_from_json(const Json& j, const std::string& source = "<domain>") {
  detail::Reader r(source);
  std::size_t n = r.count(r.field(j, "", "dim"), "/dim");
  const auto& jf = r.array(r.field(j, "", "facets"), "/facets");
  std::vector<Facet> fs;
  for (std::size_t i = 0; i < jf.size(); ++i) {
    std::string p = "/facets/" + std::to_string(i);
    IntVector normal = r.int_vector(r.field(jf[i], p, "normal"), p + "/normal", n);
    if (normal.is_zero()) r.schema(p + "/normal", "zero normal");
    fs.push_back({normal, r.rational(r.field(jf[i], p, "offset"), p + "/offset")});
  }
  return PolyhedralDomain(n, std::move(fs));
}

inline LinesFile lines_from_json(const Json& j, const std::string& source = "<lines>") {
  detail::Reader r(source);
  const auto& jl = r.array(r.field(j, "", "lines"), "/lines");
  LinesFile out;
  std::optional<std::size_t> n;
  for (std::size_t i = 0; i < jl.size(); ++i) {
    std::string p = "/lines/" + std::to_string(i);
    const auto& jp = r.array(r.field(jl[i], p, "point"), p + "/point");
    if (!n) n = jp.size();
    Line line{r.rational_vector(jp, p + "/point", *n), r.int_vector(r.field(jl[i], p, "dir"), p + "/dir", *n)};
    if (line.dir.is_zero()) r.schema(p + "/dir", "zero direction");
    out.lines.lines.push_back(std::move(line));
  }
  if (const auto* jd = r.optional_field(j, "degree")) {
    r.array(*jd, "/degree");
    std::vector<IntVector> degree;
    for (std::size_t i = 0; i < jd->size(); ++i) {
      std::string p = "/degree/" + std::to_string(i);
      const auto& x = r.array((*jd)[i], p);
      degree.push_back(r.int_vector(x, p, n.value_or(x.size())));
    }
    out.degree = std::move(degree);
  }
  return out;
}

inline TropicalCurve load_curve(const std::string& path) { return curve_from_json(parse(read_file(path), path), path); }
inline PolyhedralDomain load_domain(const std::string& path) { return domain_from_json(parse(read_file(path), path), path); }
inline LinesFile load_lines(const std::string& path) { return lines_from_json(parse(read_file(path), path), path); }

// ---------------------------------------------------------------------------
// Emission

inline Json to_json(const TropicalCurve& c) {
  Json j;
  j["dim"] = c.dim();
  Json vs = Json::array();
  for (const auto& v : c.vertices()) vs.push_back(Json{{"id", v.id}, {"pos", to_json(v.pos)}});
  j["vertices"] = vs;
  Json es = Json::array();
  for (const auto& e : c.edges()) {
    Json x;
    x["tail"] = c.vertex(e.tail).id;
    x["head"] = e.head ? Json(c.vertex(*e.head).id) : Json(nullptr);
    x["dir"] = to_json(e.dir);
    x["weight"] = to_json(e.weight);
    x["leaf_label"] = e.leaf_label ? Json(*e.leaf_label) : Json(nullptr);
    es.push_back(x);
  }
  j["edges"] = es;
  return j;
}

inline Json to_json(const PolyhedralDomain& d) {
  Json j;
  j["dim"] = d.dim();
  Json fs = Json::array();
  for (const auto& f : d.facets()) fs.push_back(Json{{"normal", to_json(f.normal)}, {"offset", to_json(f.offset)}});
  j["facets"] = fs;
  return j;
}

inline Json to_json(const LinesFile& lf) {
  Json j;
  Json ls = Json::array();
  for (const auto& l : lf.lines.lines) ls.push_back(Json{{"point", to_json(l.base)}, {"dir", to_json(l.dir)}});
  j["lines"] = ls;
  if (lf.degree) {
    Json d = Json::array();
    for (const auto& v : *lf.degree) d.push_back(to_json(v));
    j["degree"] = d;
  }
  return j;
}

namespace detail {

inline void write(std::string& out, const Json& j, int depth) {
  auto pad = [&](int d) { out.append(2 * static_cast<std::size_t>(d), ' '); };
  bool flat = std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
  if (j.is_array() && flat) {
    out += "[";
    for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + j[i].dump();
    out += "]";
    return;
  }
  if (j.is_array()) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      pad(depth + 1);
      write(out, j[i], depth + 1);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    pad(depth);
    out += "]";
    return;
  }
  if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      pad(depth + 1);
      out += Json(it.key()).dump() + ": ";
      write(out, it.value(), depth + 1);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    pad(depth);
    out += "}";
    return;
  }
  out += j.dump();
}

}  // namespace detail

/// Canonical text: two-space indent, arrays of scalars on one line, trailing
/// newline.
inline std::string dump(const Json& j) {
  std::string out;
  detail::write(out, j, 0);
  return out + "\n";
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const ValidationReport& r) {
  Json issues = Json::array();
  for (const auto& i : r.issues) issues.push_back(Json{{"code", i.code}, {"message", i.message}});
  return Json{{"ok", r.ok()}, {"issues", issues}};
}

inline Json to_json(const BoundaryPointInfo& b) {
  Json j;
  j["point"] = to_json(b.point);
  j["leaf"] = b.leaf ? Json(*b.leaf) : Json(nullptr);
  j["activeFacets"] = b.active_facets;
  j["codim"] = b.codim;
  Json m = Json::object();
  for (const auto& [f, v] : b.momenta) m[std::to_string(f)] = to_json(v);
  j["momenta"] = m;
  j["kind"] = boundary_kind_name(b.kind);
  if (!b.diagnostic.empty()) j["diagnostic"] = b.diagnostic;
  return j;
}

inline Json to_json(const EvenPrimitiveReport& r) {
  Json j = to_json(r.report);
  Json bs = Json::array();
  for (const auto& b : r.boundary) bs.push_back(to_json(b));
  j["boundary"] = bs;
  return j;
}

inline Json to_json(const RotationalMomentum& r) {
  return Json{{"vector", to_json(r.vector)}, {"n", to_json(r.n)}, {"primitivePart", to_json(r.primitive)}};
}

inline Json to_json(const SurfaceReport& r) {
  Json j;
  j["orientable"] = r.orientable;
  if (r.orientable) {
    j["genus"] = to_json(r.genus);
  } else {
    j["crosscaps"] = to_json(r.crosscaps);
  }
  j["punctures"] = to_json(r.punctures);
  j["j"] = to_json(r.j);
  j["b1"] = to_json(r.b1);
  Json ks = Json::array();
  for (const auto& K : r.components) {
    ks.push_back(Json{{"vertices", K.vertices},
                      {"heavyEdges", K.heavy_edges},
                      {"b1", to_json(K.b1)},
                      {"ends", to_json(K.ends)},
                      {"delta", to_json(K.delta)}});
  }
  j["components"] = ks;
  j["totalNodes"] = to_json(r.total_nodes);
  j["otherCrossings"] = to_json(r.other_crossings);
  j["eulerCharacteristic"] = to_json(r.euler);
  Json bs = Json::array();
  for (const auto& b : r.boundary) bs.push_back(to_json(b));
  j["boundary"] = bs;
  return j;
}

inline Json to_json(const ThreeManifoldReport& r) {
  Json j;
  j["h1Order"] = r.h1_order ? to_json(*r.h1_order) : Json("INFINITE_H1");
  j["mv"] = to_json(r.mv);
  j["product"] = to_json(r.product);
  Json ls = Json::array();
  for (const auto& d : r.leaves) {
    ls.push_back(Json{{"leaf", d.leaf},
                      {"point", to_json(d.point)},
                      {"d", to_json(d.d)},
                      {"z", to_json(d.z)},
                      {"rho", to_json(d.rho.vector)},
                      {"n", to_json(d.rho.n)}});
  }
  j["leafData"] = ls;
  j["rootEdge"] = Json{{"rho", to_json(r.root_rho)}, {"n", to_json(r.root_n)}, {"torsionAccumulated", to_json(r.root_torsion)}};
  j["recursiveOrder"] = to_json(r.recursive_order);
  j["torsionIntegral"] = r.torsion_integral;
  j["rationalHomologySphere"] = r.rational_homology_sphere;
  j["deformationExists"] = r.deformation_exists;
  j["parityWarning"] = r.parity_warning ? Json(*r.parity_warning) : Json(nullptr);
  return j;
}

inline Json to_json(const PieceDecomposition& pd) {
  Json ps = Json::array();
  for (const auto& p : pd.pieces) {
    Json x;
    x["kind"] = piece_kind_name(p.kind);
    x["at"] = p.at;
    if (p.delta) x["delta"] = to_json(*p.delta);
    if (p.kernel_class) x["kernelClass"] = to_json(*p.kernel_class);
    x["adjacentTori"] = p.adjacent_tori;
    ps.push_back(x);
  }
  Json ts = Json::array();
  for (const auto& t : pd.tori) {
    ts.push_back(Json{{"id", t.id}, {"curveEdges", t.curve_edges}, {"dh", to_json(t.dh)}, {"weight", to_json(t.weight)}});
  }
  Json g = Json::array();
  for (std::size_t i = 0; i < pd.gluing.size(); ++i) {
    g.push_back(Json{{"torus", pd.tori[i].id}, {"pieces", {pd.gluing[i].first, pd.gluing[i].second}}});
  }
  return Json{{"pieces", ps}, {"tori", ts}, {"gluingGraph", g}};
}

inline Json to_json(const LensParameters& lp) { return Json{{"p", to_json(lp.p)}, {"qCanonical", to_json(lp.q)}}; }

inline Json to_json(const EvaluationMatrix& ev) {
  return Json{{"matrix", to_json(ev.m)}, {"columns", ev.columns}, {"rowLeaf", ev.row_leaf}, {"referenceVertex", ev.reference_vertex}};
}

inline Json to_json(const SuitabilityReport& r) {
  Json ls = Json::array();
  for (const auto& l : r.per_line) {
    ls.push_back(Json{{"leaf", l.leaf}, {"point", to_json(l.point)}, {"crossPrimitive", l.cross_primitive}, {"hullVertex", l.is_hull_vertex}});
  }
  return Json{{"pass", r.pass}, {"lines", ls}};
}

inline Json to_json(const EnumerationResult& r) {
  Json ts = Json::array();
  for (const auto& t : r.per_type) {
    Json x;
    x["status"] = t.status;
    x["multiplicity"] = to_json(t.multiplicity);
    if (t.solution) x["curve"] = to_json(*t.solution);
    ts.push_back(x);
  }
  return Json{{"total", to_json(r.total)}, {"types", ts}};
}

}  // namespace troplag::io
