#pragma once

// Topology of the Lagrangians attached to a curve: surfaces in dimension 2,
// H1 orders and graph-manifold pieces in dimension 3, lens parameters.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "troplag/curve.hpp"
#include "troplag/domain.hpp"
#include "troplag/error.hpp"
#include "troplag/lattice.hpp"
#include "troplag/multiplicity.hpp"

namespace troplag {

namespace detail {

inline std::vector<IntVector> vertex_vectors(const TropicalCurve& c, std::size_t v) {
  if (v >= c.vertices().size()) throw Error(ErrorCode::InvalidArgument, "no vertex " + std::to_string(v));
  const auto& inc = c.incident(v);
  if (inc.size() != 3) {
    throw Error(ErrorCode::NotTrivalent, "vertex '" + c.vertex(v).id + "' has valence " + std::to_string(inc.size()));
  }
  std::vector<IntVector> out;
  for (const auto& i : inc) out.push_back(c.outward(i));
  return out;
}

}  // namespace detail

/// Index of the lattice spanned by two weighted edge vectors at v inside the
/// integer points of their plane.
inline Integer vertex_multiplicity(const TropicalCurve& c, std::size_t v) {
  auto vecs = detail::vertex_vectors(c, v);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      if (!parallel(vecs[i], vecs[j])) return lattice_index({vecs[i], vecs[j]});
  throw Error(ErrorCode::DegenerateVertex, "edges at '" + c.vertex(v).id + "' are collinear");
}

/// Interior lattice points of the dual triangle at a planar vertex (Pick).
inline Integer dual_vertex_delta(const TropicalCurve& c, std::size_t v) {
  if (c.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "dual triangles need a planar curve");
  auto vecs = detail::vertex_vectors(c, v);
  Integer twice_area = abs(det2(vecs[0], vecs[1]));
  if (twice_area == 0) throw Error(ErrorCode::DegenerateVertex, "dual triangle at '" + c.vertex(v).id + "' is flat");
  Integer boundary = 0;
  for (const auto& u : vecs) boundary += content(u);
  // i = A - B/2 + 1
  Integer twice_i = twice_area - boundary + 2;
  return twice_i / 2;
}

struct SelfIntersection {
  std::size_t edge_a = 0;
  std::size_t edge_b = 0;
  RationalVector point;
  Integer weight;  // |det(dh(e_a), dh(e_b))|
};

/// Transverse crossings of distinct edges of a planar curve, clipped to the
/// domain when one is given.
inline std::vector<SelfIntersection> self_intersections(const TropicalCurve& c, const PolyhedralDomain* d = nullptr) {
  if (c.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "self-intersections are computed for planar curves");
  auto scan = scan_crossings(c, d);
  if (!scan.overlaps.empty()) {
    auto [a, b] = scan.overlaps.front();
    throw Error(ErrorCode::NonFiniteSigma, "edges " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
  }
  std::vector<SelfIntersection> out;
  for (const auto& x : scan.crossings) {
    out.push_back({x.edge_a, x.edge_b, x.point, abs(det2(c.edge(x.edge_a).vec(), c.edge(x.edge_b).vec()))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Surfaces

struct SurfaceComponent {
  std::vector<std::string> vertices;
  std::vector<std::size_t> heavy_edges;  // curve edges of weight > 1
  Integer b1 = 0;
  Integer ends = 0;
  Integer delta = 0;
};

struct SurfaceReport {
  bool orientable = true;
  Integer genus = 0;      // orientable case
  Integer crosscaps = 0;  // nonorientable case
  Integer punctures = 0;
  Integer j = 0;  // boundary points of momentum 2
  Integer b1 = 0;
  std::vector<SurfaceComponent> components;
  Integer total_nodes = 0;
  Integer other_crossings = 0;  // crossings between different components or outside W
  Integer euler = 0;
  std::vector<BoundaryPointInfo> boundary;
};

namespace detail {

inline void require_even(const EvenPrimitiveReport& ep) {
  if (ep.ok()) return;
  std::string msg;
  for (const auto& i : ep.report.issues) msg += (msg.empty() ? "" : "; ") + i.code + ": " + i.message;
  throw Error(ErrorCode::NotEvenPrimitive, msg);
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace detail

inline SurfaceReport surface_report(const TropicalCurve& c, const PolyhedralDomain& d, bool relaxed = false) {
  if (c.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "surface reports need a planar curve");
  auto ep = check_even_primitive(c, d, relaxed);
  detail::require_even(ep);
  SurfaceReport r;
  r.boundary = ep.boundary;
  r.j = static_cast<long>(ep.count(BoundaryKind::Momentum2));
  auto bd = betti_and_degree(c, d);
  r.b1 = bd.b1;
  r.punctures = static_cast<long>(bd.kappa);
  r.orientable = r.j == 0;
  if (r.orientable) {
    r.genus = r.b1;
  } else {
    r.crosscaps = r.j + 2 * r.b1;
  }

  // Components of W: proper vertices plus heavy skeleton edges.
  auto sk = build_skeleton(c);
  const std::size_t n = sk.nodes.size();
  detail::UnionFind uf(n + sk.edges.size());
  std::vector<bool> member(n + sk.edges.size(), false);
  for (std::size_t i = 0; i < n; ++i) member[i] = true;
  for (std::size_t s = 0; s < sk.edges.size(); ++s) {
    if (sk.edges[s].weight == 1) continue;
    member[n + s] = true;
    for (int end = 0; end < 2; ++end)
      if (sk.edges[s].node[end]) uf.unite(n + s, *sk.edges[s].node[end]);
  }
  std::map<std::size_t, std::size_t> comp_of_root;
  std::vector<std::optional<std::size_t>> comp_of_curve_edge(c.edges().size());
  std::vector<std::size_t> node_count, edge_count;
  for (std::size_t x = 0; x < member.size(); ++x) {
    if (!member[x]) continue;
    auto root = uf.find(x);
    if (!comp_of_root.count(root)) {
      comp_of_root[root] = r.components.size();
      r.components.emplace_back();
      node_count.push_back(0);
      edge_count.push_back(0);
    }
    auto k = comp_of_root[root];
    auto& K = r.components[k];
    if (x < n) {
      ++node_count[k];
      K.vertices.push_back(c.vertex(sk.nodes[x]).id);
      K.delta += dual_vertex_delta(c, sk.nodes[x]);
      for (auto [s, end] : sk.incident[x])
        if (sk.edges[s].weight == 1) K.ends += 1;
    } else {
      const auto& e = sk.edges[x - n];
      if (e.bounded()) ++edge_count[k];
      for (const auto& leaf : e.leaf) {
        // heavy leaf escaping to infinity
        if (leaf && !ray_exit(d, c.vertex(c.edge(*leaf).tail).pos, c.edge(*leaf).dir)) K.ends += 1;
      }
      K.delta += e.weight - 1;
      for (auto ce : e.chain) {
        K.heavy_edges.push_back(ce);
        comp_of_curve_edge[ce] = k;
      }
    }
  }
  for (std::size_t k = 0; k < r.components.size(); ++k) {
    if (node_count[k] > 0) r.components[k].b1 = static_cast<long>(edge_count[k]) - static_cast<long>(node_count[k]) + 1;
    std::sort(r.components[k].heavy_edges.begin(), r.components[k].heavy_edges.end());
  }
  for (const auto& x : self_intersections(c, &d)) {
    auto ka = comp_of_curve_edge[x.edge_a], kb = comp_of_curve_edge[x.edge_b];
    if (ka && kb && *ka == *kb) {
      r.components[*ka].delta += x.weight;
    } else {
      r.other_crossings += x.weight;
    }
  }
  for (const auto& K : r.components) r.total_nodes += K.delta;

  // Euler characteristic from the pieces against the surface type.
  Integer from_pieces =
      -static_cast<long>(sk.nodes.size()) + static_cast<long>(ep.count(BoundaryKind::Bissectrice));
  Integer from_type = r.orientable ? Integer(2 - 2 * r.genus - r.punctures) : Integer(2 - r.crosscaps - r.punctures);
  if (from_pieces != from_type) {
    throw Error(ErrorCode::InternalInconsistency,
                "Euler characteristic " + from_pieces.get_str() + " from pieces, " + from_type.get_str() + " from type");
  }
  r.euler = from_type;
  return r;
}

// ---------------------------------------------------------------------------
// Boundary data of a 3-dimensional curve

/// Per leaf: where it ends, the constraint direction z and rho = d x z.
struct LeafDatum {
  std::size_t leaf = 0;
  RationalVector point;
  IntVector d;  // weighted outward leaf vector
  IntVector z;
  RotationalMomentum rho;
};

/// z is the primitive direction of the boundary edge through each
/// bissectrice point.
inline std::vector<LeafDatum> leaf_data(const TropicalCurve& c, const PolyhedralDomain& dom) {
  if (c.dim() != 3 || dom.dim() != 3) throw Error(ErrorCode::DimensionMismatch, "leaf data needs R^3");
  std::vector<LeafDatum> out;
  for (auto e : c.leaves()) {
    const auto& leaf = c.edge(e);
    const auto& start = c.vertex(leaf.tail).pos;
    auto t = ray_exit(dom, start, leaf.dir);
    if (!t) throw Error(ErrorCode::NotBissectrice, "leaf " + std::to_string(e) + " escapes the domain");
    auto info = classify_boundary_point(dom, start + to_rational(leaf.dir) * *t, leaf.vec(), leaf.weight);
    if (info.kind != BoundaryKind::Bissectrice) {
      throw Error(ErrorCode::NotBissectrice,
                  "boundary point " + info.point.str() + " is " + boundary_kind_name(info.kind));
    }
    IntVector z = primitive_part(cross(dom.facet(info.active_facets[0]).normal, dom.facet(info.active_facets[1]).normal));
    out.push_back({e, info.point, leaf.vec(), z, leaf_momentum(leaf.vec(), z)});
  }
  return out;
}

/// z from explicit lines; every kernel class must be primitive.
inline std::vector<LeafDatum> leaf_data(const TropicalCurve& c, const LineConfiguration& lines) {
  if (c.dim() != 3) throw Error(ErrorCode::DimensionMismatch, "leaf data needs R^3");
  auto inc = line_incidence(c, lines);
  std::map<std::size_t, std::size_t> line_of;
  for (std::size_t j = 0; j < inc.size(); ++j) line_of[inc[j]] = j;
  std::vector<LeafDatum> out;
  for (auto e : c.leaves()) {
    const auto& line = lines.lines[line_of.at(e)];
    const auto& leaf = c.edge(e);
    auto rho = leaf_momentum(leaf.vec(), line.dir);
    if (rho.n != 1) {
      throw Error(ErrorCode::NotBissectrice, "leaf " + std::to_string(e) + " has kernel class " + rho.vector.str() +
                                                 " of content " + rho.n.get_str());
    }
    out.push_back({e, leaf_line_point(c, e, line), leaf.vec(), line.dir, rho});
  }
  return out;
}

// ---------------------------------------------------------------------------
// First homology

struct EdgeTorsion {
  std::size_t skeleton_edge = 0;
  IntVector rho;
  Integer n;
  Rational torsion;  // n(e) / mv(e)
};

struct ThreeManifoldReport {
  std::optional<Integer> h1_order;  // nullopt: infinite
  Integer mv = 1;
  Integer product;  // mixed h-product magnitude
  std::vector<LeafDatum> leaves;
  IntVector root_rho;
  Integer root_n = 0;
  Rational root_torsion;
  Rational recursive_order;  // order from the edge-torsion recursion
  bool torsion_integral = true;
  std::vector<EdgeTorsion> edges;
  bool rational_homology_sphere = false;
  bool deformation_exists = false;
  std::optional<std::string> parity_warning;
};

inline ThreeManifoldReport h1_order(const TropicalCurve& c, const std::vector<LeafDatum>& data,
                                    const PolyhedralDomain* dom = nullptr, std::optional<std::size_t> root_leaf = {}) {
  if (c.dim() != 3) throw Error(ErrorCode::DimensionMismatch, "H1 orders need a curve in R^3");
  if (!is_tree(c)) throw Error(ErrorCode::TreeOnly, "H1 orders are computed for trees");
  auto leaves = c.leaves();
  if (data.size() != leaves.size()) throw Error(ErrorCode::InvalidArgument, "one datum per leaf expected");
  ThreeManifoldReport r;
  r.leaves = data;
  std::vector<IntVector> z;
  for (const auto& x : data) z.push_back(x.z);
  std::size_t p = root_leaf.value_or(leaves.front());
  auto pos = std::find(leaves.begin(), leaves.end(), p);
  if (pos == leaves.end()) throw Error(ErrorCode::InvalidArgument, "root is not a leaf");
  const LeafDatum& root = data[static_cast<std::size_t>(pos - leaves.begin())];

  auto sk = build_skeleton(c);
  std::vector<Integer> m(sk.nodes.size());
  for (std::size_t i = 0; i < sk.nodes.size(); ++i) {
    m[i] = vertex_multiplicity(c, sk.nodes[i]);
    r.mv *= m[i];
  }

  if (sk.nodes.empty()) {
    // two solid tori glued along one torus
    r.product = mixed_h_product(c, z);
    const LeafDatum& other = data[0].leaf == p ? data[1] : data[0];
    r.root_rho = other.rho.vector;
    r.root_n = other.rho.n;
    r.root_torsion = Rational(other.rho.n);
    r.edges.push_back({0, other.rho.vector, other.rho.n, r.root_torsion});
    Integer glue = other.rho.is_zero() ? Integer(0) : pairing_coefficient(RotationalMomentum(other.rho.primitive), root.rho, root.d);
    r.recursive_order = r.root_torsion * Rational(glue);
  } else {
    auto t = momentum_tree(c, z, Root::leaf(p));
    r.product = t.value;
    // torsion along the rooted tree: t(o) = t(i1) t(i2) content((r1' x r2') x dh(o)) / m(v)
    std::vector<std::optional<Rational>> tors(sk.edges.size());
    std::function<Rational(std::size_t, std::size_t)> walk = [&](std::size_t s, std::size_t x) -> Rational {
      const auto& e = sk.edges[s];
      Rational val;
      if (e.is_leaf()) {
        val = Rational(t.toward_root[s]->n);
      } else {
        int end_at_x = *e.node[0] == x ? 0 : 1;
        std::size_t y = *e.node[1 - end_at_x];
        std::vector<std::size_t> in;
        for (auto [s2, end2] : sk.incident[y])
          if (s2 != s) in.push_back(s2);
        Rational t1 = walk(in[0], y), t2 = walk(in[1], y);
        IntVector g = cross(cross(t.toward_root[in[0]]->primitive, t.toward_root[in[1]]->primitive), t.dh_toward_root[s]);
        val = t1 * t2 * Rational(content(g)) / Rational(m[y]);
      }
      val.canonicalize();
      if (val.get_den() != 1) r.torsion_integral = false;
      tors[s] = val;
      return val;
    };
    std::size_t sp = *t.root_edge;
    std::size_t y = *sk.edges[sp].node[sk.edges[sp].node[0] ? 0 : 1];
    std::vector<std::size_t> in;
    for (auto [s2, end2] : sk.incident[y])
      if (s2 != sp) in.push_back(s2);
    Rational t1 = walk(in[0], y), t2 = walk(in[1], y);
    const auto& incoming = *t.root_incoming;
    IntVector g = incoming.is_zero() ? IntVector::zero(3)
                                     : cross(cross(t.toward_root[in[0]]->primitive, t.toward_root[in[1]]->primitive),
                                             t.dh_toward_root[sp]);
    r.root_rho = incoming.vector;
    r.root_n = incoming.n;
    r.root_torsion = t1 * t2 * Rational(content(g)) / Rational(m[y]);
    r.root_torsion.canonicalize();
    if (r.root_torsion.get_den() != 1) r.torsion_integral = false;
    tors[sp] = r.root_torsion;
    Integer glue = incoming.is_zero() ? Integer(0) : pairing_coefficient(RotationalMomentum(incoming.primitive), root.rho, root.d);
    r.recursive_order = r.root_torsion * Rational(glue);
    for (std::size_t s = 0; s < sk.edges.size(); ++s) {
      if (!tors[s]) continue;
      const auto& rho = s == sp ? incoming : *t.toward_root[s];
      r.edges.push_back({s, rho.vector, rho.n, *tors[s]});
    }
  }
  r.recursive_order.canonicalize();

  if (r.product == 0) {
    if (r.recursive_order != 0) throw Error(ErrorCode::InternalInconsistency, "recursion gives a finite order");
    return r;
  }
  if (r.product % r.mv != 0) {
    throw Error(ErrorCode::InternalInconsistency,
                "mv " + r.mv.get_str() + " does not divide the product " + r.product.get_str());
  }
  r.h1_order = r.product / r.mv;
  if (r.recursive_order != Rational(*r.h1_order)) {
    throw Error(ErrorCode::InternalInconsistency,
                "recursion gives " + rational_str(r.recursive_order) + ", product gives " + r.h1_order->get_str());
  }
  r.rational_homology_sphere = true;
  r.deformation_exists = true;
  if (dom && dom->is_standard_simplex() && *r.h1_order % 2 != 0) {
    r.parity_warning = "odd H1 order " + r.h1_order->get_str() + " in the standard simplex";
  }
  return r;
}

inline ThreeManifoldReport h1_order(const TropicalCurve& c, const PolyhedralDomain& dom) {
  return h1_order(c, leaf_data(c, dom), &dom);
}
inline ThreeManifoldReport h1_order(const TropicalCurve& c, const LineConfiguration& lines) {
  return h1_order(c, leaf_data(c, lines));
}

// ---------------------------------------------------------------------------
// Pieces

enum class PieceKind { PantsBundle, SolidTorus, MoebiusPiece, DiskPiece, Annulus };

inline std::string piece_kind_name(PieceKind k) {
  switch (k) {
    case PieceKind::PantsBundle: return "PANTS_BUNDLE";
    case PieceKind::SolidTorus: return "SOLID_TORUS";
    case PieceKind::MoebiusPiece: return "MOEBIUS_PIECE";
    case PieceKind::DiskPiece: return "DISK_PIECE";
    case PieceKind::Annulus: return "ANNULUS";
  }
  return "?";
}

struct Piece {
  PieceKind kind = PieceKind::PantsBundle;
  std::string at;  // vertex id or boundary point
  std::optional<Integer> delta;           // planar vertices
  std::optional<IntVector> kernel_class;  // solid tori
  std::vector<std::string> adjacent_tori;
};

struct GluingTorus {
  std::string id;
  std::vector<std::size_t> curve_edges;
  IntVector dh;
  Integer weight;
};

struct PieceDecomposition {
  std::vector<Piece> pieces;
  std::vector<GluingTorus> tori;
  std::vector<std::pair<std::size_t, std::size_t>> gluing;  // pieces sharing a torus, torus order
};

namespace detail {

inline PieceDecomposition assemble_pieces(const TropicalCurve& c, const Skeleton& sk,
                                          const std::map<std::size_t, Piece>& end_piece) {
  PieceDecomposition out;
  std::vector<std::optional<std::size_t>> node_piece(sk.nodes.size());
  for (std::size_t i = 0; i < sk.nodes.size(); ++i) {
    Piece p;
    p.kind = PieceKind::PantsBundle;
    p.at = c.vertex(sk.nodes[i]).id;
    if (c.dim() == 2) p.delta = dual_vertex_delta(c, sk.nodes[i]);
    node_piece[i] = out.pieces.size();
    out.pieces.push_back(std::move(p));
  }
  for (std::size_t s = 0; s < sk.edges.size(); ++s) {
    const auto& e = sk.edges[s];
    GluingTorus t{"T" + std::to_string(s), e.chain, e.vec, e.weight};
    std::vector<std::size_t> ends;
    for (int k = 0; k < 2; ++k) {
      if (e.node[k]) {
        ends.push_back(*node_piece[*e.node[k]]);
      } else if (e.leaf[k]) {
        auto it = end_piece.find(*e.leaf[k]);
        if (it == end_piece.end()) throw Error(ErrorCode::InternalInconsistency, "leaf without a piece");
        ends.push_back(out.pieces.size());
        out.pieces.push_back(it->second);
      }
    }
    for (auto pi : ends) out.pieces[pi].adjacent_tori.push_back(t.id);
    if (ends.size() == 2) out.gluing.push_back({ends[0], ends[1]});
    out.tori.push_back(std::move(t));
  }
  return out;
}

}  // namespace detail

inline PieceDecomposition piece_decomposition(const TropicalCurve& c, const PolyhedralDomain& d, bool relaxed = false) {
  if (c.dim() != 2 && c.dim() != 3) throw Error(ErrorCode::DimensionMismatch, "pieces are built in dimensions 2 and 3");
  auto ep = check_even_primitive(c, d, relaxed);
  detail::require_even(ep);
  std::map<std::size_t, Piece> end_piece;
  for (const auto& b : ep.boundary) {
    Piece p;
    p.at = b.point.str();
    if (b.kind == BoundaryKind::Momentum2) {
      p.kind = PieceKind::MoebiusPiece;
    } else if (c.dim() == 2) {
      p.kind = PieceKind::DiskPiece;
    } else {
      p.kind = PieceKind::SolidTorus;
      IntVector z = primitive_part(cross(d.facet(b.active_facets[0]).normal, d.facet(b.active_facets[1]).normal));
      p.kernel_class = cross(c.edge(*b.leaf).vec(), z);
    }
    end_piece[*b.leaf] = std::move(p);
  }
  for (auto e : c.leaves()) {
    if (end_piece.count(e)) continue;
    Piece p;
    p.kind = PieceKind::Annulus;
    p.at = "leaf " + std::to_string(e);
    end_piece[e] = std::move(p);
  }
  return detail::assemble_pieces(c, build_skeleton(c), end_piece);
}

/// Boundary points given by lines: every leaf ends in a solid torus.
inline PieceDecomposition piece_decomposition(const TropicalCurve& c, const LineConfiguration& lines) {
  require_valid(c);
  std::map<std::size_t, Piece> end_piece;
  for (const auto& x : leaf_data(c, lines)) {
    Piece p;
    p.kind = PieceKind::SolidTorus;
    p.at = x.point.str();
    p.kernel_class = x.rho.vector;
    end_piece[x.leaf] = std::move(p);
  }
  return detail::assemble_pieces(c, build_skeleton(c), end_piece);
}

// ---------------------------------------------------------------------------
// Lens spaces

struct LensParameters {
  Integer p = 1;
  Integer q = 0;  // canonical representative in [0, p)
};

/// Smallest of q, -q, q^-1, -q^-1 modulo p.
inline Integer canonical_lens_q(const Integer& p, const Integer& q) {
  if (p <= 0) throw Error(ErrorCode::InvalidArgument, "lens order must be positive");
  if (p == 1) return 0;
  Integer r = ((q % p) + p) % p;
  auto eg = extended_gcd(r, p);
  if (eg.g != 1) throw Error(ErrorCode::InvalidArgument, "q " + q.get_str() + " is not a unit mod " + p.get_str());
  Integer inv = ((eg.s % p) + p) % p;
  Integer best = r;
  for (const Integer& x : {Integer(p - r), inv, Integer(p - inv)}) {
    Integer y = x % p;
    if (y < best) best = y;
  }
  return best;
}

inline LensParameters lens_parameters(const TropicalCurve& c, const std::vector<LeafDatum>& data) {
  auto sk = build_skeleton(c);
  if (c.dim() != 3 || !sk.nodes.empty() || sk.edges.size() != 1 || data.size() != 2) {
    throw Error(ErrorCode::InvalidArgument, "lens parameters need a single edge in R^3");
  }
  const IntVector& a = data[0].rho.vector;
  const IntVector& b = data[1].rho.vector;
  if (a.is_zero() || b.is_zero()) throw Error(ErrorCode::InvalidArgument, "zero kernel class");
  const IntVector& d = sk.edges[0].vec;
  LensParameters out;
  IntVector ab = cross(a, b);
  Integer k = 0;
  if (!ab.is_zero()) {
    for (std::size_t i = 0; i < 3; ++i)
      if (d[i] != 0) {
        k = ab[i] / d[i];
        break;
      }
    if (k * d != ab) throw Error(ErrorCode::InconsistentMomenta, "kernel classes do not lie in the edge torus");
  }
  out.p = abs(k);
  if (out.p == 0) throw Error(ErrorCode::InvalidArgument, "parallel kernel classes give S^1 x S^2, not a lens space");
  if (out.p == 1) return out;
  // basis (a, c) of the torus lattice with a x c == d; then b = x a + k c
  if (!is_primitive(a)) throw Error(ErrorCode::NotBissectrice, "kernel class " + a.str() + " is not primitive");
  IntVector cvec = cross_preimage(a, d);
  RationalMatrix m(3, 2);
  for (std::size_t i = 0; i < 3; ++i) {
    m(i, 0) = a[i];
    m(i, 1) = cvec[i];
  }
  auto sol = solve_exact(m, to_rational(b));
  if (sol.kind != SolveResult::Kind::Unique || sol.x[0].get_den() != 1 || sol.x[1] != Rational(k)) {
    throw Error(ErrorCode::InternalInconsistency, "kernel class " + b.str() + " is not in the expected lattice");
  }
  out.q = canonical_lens_q(out.p, sol.x[0].get_num());
  return out;
}

}  // namespace troplag
