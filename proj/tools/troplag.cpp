// troplag: command-line front end over the header library.
//
//   troplag <command> [--curve F] [--domain F] [--lines F] [--root ID]
//                     [--relaxed] [--delta p/q] [--format json|table]
//                     [--kappa-cap N]
//
// Exit status 0 on success, 2 when an input fails validation (the report is
// still printed), 1 on any other error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "troplag/troplag.hpp"

using namespace troplag;
using io::Json;

namespace {

struct Options {
  std::string command;
  std::string curve, domain, lines, root, delta, format = "json";
  bool relaxed = false;
  std::size_t kappa_cap = KAPPA_CAP;
};

/// Raised when an input is present but fails its checks; carries the report.
struct ValidationFailure {
  Json report;
};

struct Inputs {
  std::optional<TropicalCurve> curve;
  std::optional<PolyhedralDomain> domain;
  std::optional<io::LinesFile> lines;

  const TropicalCurve& need_curve() const {
    if (!curve) throw Error(ErrorCode::InvalidArgument, "--curve is required");
    return *curve;
  }
  const PolyhedralDomain& need_domain() const {
    if (!domain) throw Error(ErrorCode::InvalidArgument, "--domain is required");
    return *domain;
  }
  const LineConfiguration& need_lines() const {
    if (!lines) throw Error(ErrorCode::InvalidArgument, "--lines is required");
    return lines->lines;
  }
};

Inputs load(const Options& o) {
  Inputs in;
  if (!o.curve.empty()) in.curve = io::load_curve(o.curve);
  if (!o.domain.empty()) in.domain = io::load_domain(o.domain);
  if (!o.lines.empty()) in.lines = io::load_lines(o.lines);
  return in;
}

void check_curve(const TropicalCurve& c) {
  auto r = validate_curve(c);
  if (!r.ok()) throw ValidationFailure{Json{{"curve", io::to_json(r)}}};
}

void check_domain(const PolyhedralDomain& d) {
  auto r = validate_delzant(d);
  if (!r.ok()) throw ValidationFailure{Json{{"domain", io::to_json(r)}}};
}

void check_even(const TropicalCurve& c, const PolyhedralDomain& d, bool relaxed) {
  auto ep = check_even_primitive(c, d, relaxed);
  if (!ep.ok()) throw ValidationFailure{Json{{"evenPrimitive", io::to_json(ep)}}};
}

/// --root names a vertex id, or a leaf by its label (by position when the
/// curve carries no labels).
Root parse_root(const TropicalCurve& c, const std::string& text) {
  if (text.empty()) return {};
  if (auto v = c.vertex_index(text)) return Root::vertex(*v);
  long label = -1;
  try {
    std::size_t used = 0;
    label = std::stol(text, &used);
    if (used != text.size()) label = -1;
  } catch (const std::exception&) {
    label = -1;
  }
  auto leaves = c.leaves();
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    const auto& lab = c.edge(leaves[i]).leaf_label;
    if ((lab && *lab == label) || (!lab && static_cast<long>(i) == label)) return Root::leaf(leaves[i]);
  }
  throw Error(ErrorCode::InvalidArgument, "--root '" + text + "' is neither a vertex id nor a leaf label");
}

std::optional<std::size_t> root_leaf(const TropicalCurve& c, const std::string& text) {
  Root r = parse_root(c, text);
  if (r.kind == Root::Kind::Vertex) throw Error(ErrorCode::InvalidArgument, "h1 takes a leaf as root");
  if (r.kind == Root::Kind::Leaf) return r.index;
  return std::nullopt;
}

std::vector<LeafDatum> leaf_data_for(const Inputs& in) {
  const auto& c = in.need_curve();
  if (in.domain) {
    check_domain(*in.domain);
    return leaf_data(c, *in.domain);
  }
  return leaf_data(c, in.need_lines());
}

Json cmd_validate(const Options& o, const Inputs& in, bool& failed) {
  Json out = Json::object();
  auto note = [&](const char* key, Json j, bool ok) {
    out[key] = std::move(j);
    failed = failed || !ok;
  };
  if (!in.curve && !in.domain && !in.lines) throw Error(ErrorCode::InvalidArgument, "nothing to validate");
  std::optional<ValidationReport> curve_report;
  if (in.curve) {
    curve_report = validate_curve(*in.curve);
    note("curve", io::to_json(*curve_report), curve_report->ok());
  }
  bool domain_ok = true;
  if (in.domain) {
    auto r = validate_delzant(*in.domain);
    domain_ok = r.ok();
    note("domain", io::to_json(r), r.ok());
  }
  if (in.curve && curve_report->ok() && in.domain && domain_ok) {
    auto ep = check_even_primitive(*in.curve, *in.domain, o.relaxed);
    note("evenPrimitive", io::to_json(ep), ep.ok());
  }
  if (in.curve && curve_report->ok() && in.lines && in.curve->dim() == 3) {
    auto s = suitability_check(*in.curve, in.lines->lines);
    note("suitability", io::to_json(s), s.pass);
  }
  return out;
}

Json cmd_multiplicity(const Options& o, const Inputs& in) {
  const auto& c = in.need_curve();
  check_curve(c);
  const auto& lines = in.need_lines();
  auto z = z_from_lines(c, lines);
  auto tree = momentum_tree(c, z, parse_root(c, o.root));
  auto ev = ev_matrix(c, lines);
  auto det = multiplicity_det(ev);
  if (det.value != tree.value) {
    throw Error(ErrorCode::InternalInconsistency,
                "recursive value " + tree.value.get_str() + " differs from determinant " + det.value.get_str());
  }
  Json leaves = Json::array();
  auto leaf_ids = c.leaves();
  for (std::size_t i = 0; i < leaf_ids.size(); ++i) {
    auto rho = leaf_momentum(c.edge(leaf_ids[i]).vec(), z[i]);
    leaves.push_back(Json{{"leaf", leaf_ids[i]}, {"z", io::to_json(z[i])}, {"momentum", io::to_json(rho)}});
  }
  Json j;
  j["value"] = io::to_json(tree.value);
  j["method"] = "RECURSIVE";
  j["determinant"] = io::to_json(det.value);
  j["signConvention"] = "absolute value; both methods are defined up to sign";
  j["leafMomenta"] = leaves;
  j["evaluationMatrix"] = io::to_json(ev);
  return j;
}

Json cmd_h1(const Options& o, const Inputs& in) {
  const auto& c = in.need_curve();
  check_curve(c);
  auto data = leaf_data_for(in);
  auto r = h1_order(c, data, in.domain ? &*in.domain : nullptr, root_leaf(c, o.root));
  return io::to_json(r);
}

Json cmd_surface(const Options& o, const Inputs& in) {
  const auto& c = in.need_curve();
  const auto& d = in.need_domain();
  check_curve(c);
  check_domain(d);
  check_even(c, d, o.relaxed);
  return io::to_json(surface_report(c, d, o.relaxed));
}

Json cmd_pieces(const Options& o, const Inputs& in) {
  const auto& c = in.need_curve();
  check_curve(c);
  if (in.domain) {
    check_domain(*in.domain);
    check_even(c, *in.domain, o.relaxed);
    return io::to_json(piece_decomposition(c, *in.domain, o.relaxed));
  }
  return io::to_json(piece_decomposition(c, in.need_lines()));
}

Json cmd_lens(const Options&, const Inputs& in) {
  const auto& c = in.need_curve();
  check_curve(c);
  return io::to_json(lens_parameters(c, leaf_data_for(in)));
}

Json cmd_enumerate(const Options& o, const Inputs& in) {
  const auto& lines = in.need_lines();
  std::vector<IntVector> degree;
  if (in.lines->degree) {
    degree = *in.lines->degree;
  } else {
    const auto& c = in.need_curve();
    check_curve(c);
    for (auto leaf : line_incidence(c, lines)) degree.push_back(c.edge(leaf).vec());
  }
  std::vector<std::size_t> incidence(degree.size());
  std::iota(incidence.begin(), incidence.end(), 0);
  return io::to_json(enumerate_count(degree, lines, incidence, o.kappa_cap));
}

Json cmd_wavefront(const Options& o, const Inputs& in) {
  const auto& d = in.need_domain();
  check_domain(d);
  if (o.delta.empty()) throw Error(ErrorCode::InvalidArgument, "--delta is required");
  return io::to_json(wavefront(d, parse_rational(o.delta)));
}

Json cmd_suitability(const Options&, const Inputs& in, bool& failed) {
  const auto& c = in.need_curve();
  check_curve(c);
  auto r = suitability_check(c, in.need_lines());
  failed = !r.pass;
  return io::to_json(r);
}

// Plain-text rendering: one "path  value" row per scalar or scalar array.
void table_rows(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& rows) {
  bool flat = j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
  if (j.is_primitive() || flat) {
    std::string text = io::dump(j);
    text.pop_back();
    if (j.is_string()) text = j.get<std::string>();
    rows.emplace_back(path.empty() ? "." : path, text);
    return;
  }
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) table_rows(it.value(), path.empty() ? it.key() : path + "." + it.key(), rows);
    return;
  }
  for (std::size_t i = 0; i < j.size(); ++i) table_rows(j[i], path + "[" + std::to_string(i) + "]", rows);
}

std::string render(const Json& j, const std::string& format) {
  if (format == "json") return io::dump(j);
  std::vector<std::pair<std::string, std::string>> rows;
  table_rows(j, "", rows);
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  std::string out;
  for (const auto& [k, v] : rows) out += k + std::string(width - k.size() + 2, ' ') + v + "\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tropical curves, polyhedral domains and the topology of their Lagrangians"};
  app.require_subcommand(1);
  Options o;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"validate", "check curve, domain and line inputs"},
      {"multiplicity", "mixed h-product and evaluation determinant of a curve through lines"},
      {"h1", "order of the first homology of the 3-dimensional Lagrangian"},
      {"surface", "topological type of the Lagrangian surface of a planar curve"},
      {"pieces", "decomposition of the Lagrangian into fibered pieces"},
      {"lens", "lens space parameters of a single-edge curve"},
      {"enumerate", "count curves of a degree through lines"},
      {"wavefront", "wave front curve of a Delzant polygon"},
      {"suitability", "check a line configuration against a curve"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--curve", o.curve, "curve JSON file");
    sub->add_option("--domain", o.domain, "domain JSON file");
    sub->add_option("--lines", o.lines, "line configuration JSON file");
    sub->add_option("--root", o.root, "root vertex id or leaf label");
    sub->add_flag("--relaxed", o.relaxed, "accept higher vertex multiplicity and weights away from the boundary");
    sub->add_option("--delta", o.delta, "wave front offset p/q");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "table"}));
    sub->add_option("--kappa-cap", o.kappa_cap, "largest number of leaves the enumerator accepts");
    sub->callback([&o, name = name] { o.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Inputs in = load(o);
    bool failed = false;
    Json out;
    const auto& c = o.command;
    if (c == "validate") out = cmd_validate(o, in, failed);
    else if (c == "multiplicity") out = cmd_multiplicity(o, in);
    else if (c == "h1") out = cmd_h1(o, in);
    else if (c == "surface") out = cmd_surface(o, in);
    else if (c == "pieces") out = cmd_pieces(o, in);
    else if (c == "lens") out = cmd_lens(o, in);
    else if (c == "enumerate") out = cmd_enumerate(o, in);
    else if (c == "wavefront") out = cmd_wavefront(o, in);
    else if (c == "suitability") out = cmd_suitability(o, in, failed);
    std::cout << render(out, o.format);
    return failed ? 2 : 0;
  } catch (const ValidationFailure& v) {
    std::cout << render(v.report, o.format);
    return 2;
  } catch (const Error& e) {
    std::cerr << "troplag: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "troplag: INTERNAL: " << e.what() << "\n";
    return 1;
  }
}
