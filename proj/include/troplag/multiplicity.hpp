#pragma once

// Rotational momenta, the recursive mixed h-product, the evaluation matrix
// and the enumerative count over tree topologies.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "troplag/curve.hpp"
#include "troplag/domain.hpp"
#include "troplag/error.hpp"
#include "troplag/lattice.hpp"

namespace troplag {

struct RotationalMomentum {
  IntVector vector;
  Integer n;           // gcd of the coordinates
  IntVector primitive; // sign-normalized primitive part, zero if vector is

  RotationalMomentum() = default;
  explicit RotationalMomentum(IntVector v) : vector(std::move(v)) {
    auto pd = gcd_primitive(vector);
    n = pd.g;
    primitive = pd.u;
  }
  bool is_zero() const { return vector.is_zero(); }
};

/// rho = d x z for a leaf with weighted outward direction d and line direction z.
inline RotationalMomentum leaf_momentum(const IntVector& d, const IntVector& z) {
  if (d.is_zero()) throw Error(ErrorCode::InvalidArgument, "leaf direction is zero");
  return RotationalMomentum(cross(d, z));
}

/// (r1 x r2) x d_out
inline RotationalMomentum propagate(const RotationalMomentum& r1, const RotationalMomentum& r2, const IntVector& d_out) {
  if (d_out.is_zero()) throw Error(ErrorCode::InvalidArgument, "outgoing direction is zero");
  return RotationalMomentum(cross(cross(r1.vector, r2.vector), d_out));
}

/// |k| where a x b == k * d_root. Both momenta are orthogonal to d_root, so
/// their product is parallel to it.
inline Integer pairing_coefficient(const RotationalMomentum& a, const RotationalMomentum& b, const IntVector& d_root) {
  if (d_root.is_zero()) throw Error(ErrorCode::InvalidArgument, "root direction is zero");
  IntVector c = cross(a.vector, b.vector);
  if (c.is_zero()) return 0;
  if (!parallel(c, d_root)) {
    throw Error(ErrorCode::InconsistentMomenta, c.str() + " is not parallel to " + d_root.str());
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (d_root[i] != 0) {
      Integer k = c[i] / d_root[i];
      if (k * d_root != c) {
        throw Error(ErrorCode::InconsistentMomenta, c.str() + " is not an integer multiple of " + d_root.str());
      }
      return abs(k);
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Momenta along a rooted tree

/// Root of the recursion: a proper vertex or a leaf (curve indices).
struct Root {
  enum class Kind { Default, Vertex, Leaf };
  Kind kind = Kind::Default;
  std::size_t index = 0;

  static Root vertex(std::size_t v) { return {Kind::Vertex, v}; }
  static Root leaf(std::size_t e) { return {Kind::Leaf, e}; }
};

struct MomentumTree {
  Skeleton sk;
  std::vector<IntVector> z;  // per skeleton edge, set for leaf edges
  // Momentum carried by each skeleton edge toward the root; for the root
  // leaf this is the leaf's own momentum rho_root.
  std::vector<std::optional<RotationalMomentum>> toward_root;
  // dh of each skeleton edge oriented toward the root.
  std::vector<IntVector> dh_toward_root;
  std::optional<std::size_t> root_node;  // skeleton node
  std::optional<std::size_t> root_edge;  // skeleton leaf edge
  std::optional<RotationalMomentum> root_incoming;  // rho(e_root) for a leaf root
  Integer value;                                     // mixed h-product magnitude
};

namespace detail {

inline void require_tree_trivalent(const TropicalCurve& c, const Skeleton& sk) {
  if (!is_tree(c)) throw Error(ErrorCode::NotATree, "curve has cycles");
  for (std::size_t i = 0; i < sk.nodes.size(); ++i) {
    if (sk.incident[i].size() != 3) {
      throw Error(ErrorCode::NotTrivalent,
                  "vertex '" + c.vertex(sk.nodes[i]).id + "' has valence " + std::to_string(sk.incident[i].size()));
    }
  }
}

inline std::size_t leaf_end(const SkeletonEdge& e) { return e.leaf[1] ? 1 : 0; }

}  // namespace detail

/// Propagates leaf momenta toward a root. `z_by_leaf[i]` belongs to the i-th
/// leaf of `c.leaves()`.
inline MomentumTree momentum_tree(const TropicalCurve& c, const std::vector<IntVector>& z_by_leaf, Root root = {}) {
  if (c.dim() != 3) throw Error(ErrorCode::DimensionMismatch, "momenta need a curve in R^3");
  MomentumTree t;
  t.sk = build_skeleton(c);
  auto& sk = t.sk;
  auto leaves = c.leaves();
  if (z_by_leaf.size() != leaves.size()) {
    throw Error(ErrorCode::InvalidArgument, std::to_string(leaves.size()) + " leaves but " +
                                                std::to_string(z_by_leaf.size()) + " directions");
  }
  if (leaves.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two leaves");
  for (const auto& z : z_by_leaf)
    if (z.dim() != 3 || z.is_zero()) throw Error(ErrorCode::InvalidArgument, "line direction must be a nonzero 3-vector");
  const std::size_t m = sk.edges.size();
  t.z.assign(m, IntVector::zero(3));
  t.toward_root.assign(m, std::nullopt);
  t.dh_toward_root.assign(m, IntVector::zero(3));
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    auto s = sk.edge_of_leaf(leaves[i]);
    if (!s) throw Error(ErrorCode::InvalidCurve, "leaf outside the skeleton");
    t.z[*s] = z_by_leaf[i];
  }

  if (sk.nodes.empty()) {
    // A single edge: mixed(z1, z2, dh(e)).
    if (sk.edges.size() != 1) throw Error(ErrorCode::InvalidCurve, "curve without vertices must be one line");
    t.value = abs(mixed(z_by_leaf[0], z_by_leaf[1], sk.edges[0].vec));
    return t;
  }
  detail::require_tree_trivalent(c, sk);

  if (root.kind == Root::Kind::Vertex) {
    t.root_node = sk.node_of_vertex(root.index);
    if (!t.root_node) throw Error(ErrorCode::InvalidArgument, "root is not a trivalent vertex");
  } else if (root.kind == Root::Kind::Leaf) {
    if (root.index >= c.edges().size() || !c.edge(root.index).is_leaf()) {
      throw Error(ErrorCode::InvalidArgument, "root is not a leaf");
    }
    t.root_edge = sk.edge_of_leaf(root.index);
  } else {
    t.root_node = 0;
  }

  // Outward (away from the node end) vector of a skeleton leaf edge.
  auto leaf_out = [&](std::size_t s) {
    const auto& e = sk.edges[s];
    return detail::leaf_end(e) == 1 ? e.vec : -e.vec;
  };
  // Momentum flowing along skeleton edge s into node x.
  std::function<RotationalMomentum(std::size_t, std::size_t)> flow = [&](std::size_t s, std::size_t x) {
    const auto& e = sk.edges[s];
    RotationalMomentum r;
    if (e.is_leaf()) {
      t.dh_toward_root[s] = -leaf_out(s);
      r = leaf_momentum(leaf_out(s), t.z[s]);
    } else {
      int end_at_x = *e.node[0] == x ? 0 : 1;
      std::size_t y = *e.node[1 - end_at_x];
      IntVector d_out = sk.outward(s, 1 - end_at_x);  // from y toward x
      std::vector<RotationalMomentum> in;
      for (auto [s2, end2] : sk.incident[y])
        if (s2 != s) in.push_back(flow(s2, y));
      t.dh_toward_root[s] = d_out;
      r = propagate(in[0], in[1], d_out);
    }
    t.toward_root[s] = r;
    return r;
  };

  if (t.root_node) {
    std::vector<RotationalMomentum> in;
    for (auto [s, end] : sk.incident[*t.root_node]) in.push_back(flow(s, *t.root_node));
    t.value = abs(mixed(in[0].vector, in[1].vector, in[2].vector));
  } else {
    std::size_t s = *t.root_edge;
    std::size_t y = *sk.edges[s].node[1 - detail::leaf_end(sk.edges[s])];
    std::vector<RotationalMomentum> in;
    for (auto [s2, end2] : sk.incident[y])
      if (s2 != s) in.push_back(flow(s2, y));
    IntVector d_root = leaf_out(s);
    t.root_incoming = propagate(in[0], in[1], d_root);
    t.toward_root[s] = leaf_momentum(d_root, t.z[s]);
    t.dh_toward_root[s] = d_root;
    t.value = pairing_coefficient(*t.root_incoming, *t.toward_root[s], d_root);
  }
  return t;
}

inline Integer mixed_h_product(const TropicalCurve& c, const std::vector<IntVector>& z_by_leaf, Root root = {}) {
  return momentum_tree(c, z_by_leaf, root).value;
}

/// Line directions in leaf order, matched through line_incidence.
inline std::vector<IntVector> z_from_lines(const TropicalCurve& c, const LineConfiguration& lines) {
  auto inc = line_incidence(c, lines);
  auto leaves = c.leaves();
  std::vector<IntVector> z(leaves.size());
  for (std::size_t j = 0; j < inc.size(); ++j) {
    auto pos = std::find(leaves.begin(), leaves.end(), inc[j]) - leaves.begin();
    z[static_cast<std::size_t>(pos)] = lines.lines[j].dir;
  }
  return z;
}

// ---------------------------------------------------------------------------
// Evaluation matrix

struct EvaluationMatrix {
  IntMatrix m;
  std::vector<std::string> columns;
  std::vector<std::size_t> row_leaf;  // curve leaf edge of each row (line order)
  std::string reference_vertex;
  // Skeleton edge of each length column.
  std::vector<std::size_t> length_edges;
};

/// Rows: one per line. Translation columns hold rho_j = d_j x z_j; the
/// column of a bounded edge e holds mixed(d_j, z_j, dh(e)) when e lies on the
/// path from the reference vertex to leaf j, dh(e) oriented away from the
/// reference vertex.
inline EvaluationMatrix ev_matrix(const TropicalCurve& c, const LineConfiguration& lines) {
  if (c.dim() != 3) throw Error(ErrorCode::DimensionMismatch, "evaluation matrix needs a curve in R^3");
  if (!is_tree(c)) throw Error(ErrorCode::TreeOnly, "evaluation matrix supports trees only");
  auto sk = build_skeleton(c);
  auto inc = line_incidence(c, lines);
  EvaluationMatrix ev;
  ev.row_leaf = inc;
  const std::size_t kappa = inc.size();

  if (sk.nodes.empty()) {
    // Translations modulo the edge direction.
    const auto& e = sk.edges.at(0);
    if (e.weight != 1) throw Error(ErrorCode::InvalidArgument, "single-edge evaluation needs weight 1");
    auto [a, b] = complete_to_basis(primitive_part(e.vec));
    ev.m = IntMatrix(2, 2);
    for (std::size_t j = 0; j < 2; ++j) {
      IntVector rho = cross(c.edge(inc[j]).vec(), lines.lines[j].dir);
      ev.m(j, 0) = dot(rho, a);
      ev.m(j, 1) = dot(rho, b);
    }
    ev.columns = {"T." + a.str(), "T." + b.str()};
    return ev;
  }
  detail::require_tree_trivalent(c, sk);
  const std::size_t ref = 0;
  ev.reference_vertex = c.vertex(sk.nodes[ref]).id;

  // Parent pointers from the reference node.
  std::vector<std::optional<std::pair<std::size_t, IntVector>>> via(sk.nodes.size());  // (edge, dh away from ref)
  std::vector<std::size_t> parent(sk.nodes.size(), ref);
  std::vector<bool> seen(sk.nodes.size(), false);
  std::vector<std::size_t> queue{ref};
  seen[ref] = true;
  std::map<std::size_t, std::size_t> column;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::size_t u = queue[qi];
    for (auto [s, end] : sk.incident[u]) {
      if (!sk.edges[s].bounded()) continue;
      std::size_t w = *sk.edges[s].node[1 - end];
      if (seen[w]) continue;
      seen[w] = true;
      via[w] = std::make_pair(s, sk.outward(s, end));
      parent[w] = u;
      column[s] = 3 + ev.length_edges.size();
      ev.length_edges.push_back(s);
      queue.push_back(w);
    }
  }
  if (kappa != 3 + ev.length_edges.size()) {
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(3 + ev.length_edges.size()) + " lines");
  }
  ev.columns = {"T.x", "T.y", "T.z"};
  for (auto s : ev.length_edges) {
    const auto& e = sk.edges[s];
    ev.columns.push_back("l(" + c.vertex(sk.nodes[*e.node[0]]).id + "-" + c.vertex(sk.nodes[*e.node[1]]).id + ")");
  }
  ev.m = IntMatrix(kappa, kappa);
  for (std::size_t j = 0; j < kappa; ++j) {
    const auto& leaf = c.edge(inc[j]);
    IntVector d = leaf.vec();
    // the leaf's own skeleton edge starts at its node
    auto s = *sk.edge_of_leaf(inc[j]);
    const auto& se = sk.edges[s];
    std::size_t node = *se.node[se.node[0] ? 0 : 1];
    IntVector rho = cross(d, lines.lines[j].dir);
    for (std::size_t k = 0; k < 3; ++k) ev.m(j, k) = rho[k];
    for (std::size_t x = node; via[x]; x = parent[x]) {
      ev.m(j, column[via[x]->first]) = dot(rho, via[x]->second);
    }
  }
  return ev;
}

struct MultiplicityValue {
  enum class Method { Recursive, Determinant };
  Integer value;
  Method method = Method::Determinant;
};

inline MultiplicityValue multiplicity_det(const EvaluationMatrix& ev) {
  if (ev.m.rows() != ev.m.cols()) throw Error(ErrorCode::ShapeMismatch, "evaluation matrix is not square");
  return {abs(determinant(ev.m)), MultiplicityValue::Method::Determinant};
}

// ---------------------------------------------------------------------------
// Splitting identity

/// Some x with v . x == 1 for primitive v.
inline IntVector dual_vector(const IntVector& v) {
  if (!is_primitive(v)) throw Error(ErrorCode::InvalidArgument, v.str() + " is not primitive");
  IntMatrix m(1, v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) m(0, i) = v[i];
  auto snf = smith_normal_form(m);
  IntVector x = snf.U(0, 0) * snf.V.col(0);
  if (dot(v, x) != 1) throw Error(ErrorCode::InternalInconsistency, "dual vector check failed");
  return x;
}

/// Some z with u x z == r, for primitive u and integer r orthogonal to u.
inline IntVector cross_preimage(const IntVector& u, const IntVector& r) {
  if (dot(u, r) != 0) throw Error(ErrorCode::InvalidArgument, r.str() + " is not orthogonal to " + u.str());
  auto [a, b] = complete_to_basis(u);
  // u x a and u x b span the lattice orthogonal to u
  IntVector ua = cross(u, a), ub = cross(u, b);
  RationalMatrix m(3, 2);
  for (std::size_t k = 0; k < 3; ++k) {
    m(k, 0) = ua[k];
    m(k, 1) = ub[k];
  }
  auto sol = solve_exact(m, to_rational(r));
  if (sol.kind != SolveResult::Kind::Unique || sol.x[0].get_den() != 1 || sol.x[1].get_den() != 1) {
    throw Error(ErrorCode::InternalInconsistency, "no integer preimage of " + r.str());
  }
  IntVector z = sol.x[0].get_num() * a + sol.x[1].get_num() * b;
  if (cross(u, z) != r) throw Error(ErrorCode::InternalInconsistency, "cross preimage check failed");
  return z;
}

struct SplittingCheck {
  Integer lhs;
  Rational rhs;
  Integer m1, m2, weight;
  bool holds = false;
};

/// m(c) against m(h1, l1 + l_a) m(h2, l2 + l_b) / w(e) after cutting the tree
/// at an interior point of bounded edge e.
inline SplittingCheck splitting_check(const TropicalCurve& c, std::size_t edge, const LineConfiguration& lines) {
  if (edge >= c.edges().size() || c.edge(edge).is_leaf()) throw Error(ErrorCode::InvalidArgument, "edge must be bounded");
  const auto& e = c.edge(edge);
  SplittingCheck out;
  out.weight = e.weight;
  out.lhs = multiplicity_det(ev_matrix(c, lines)).value;

  RationalVector p = c.vertex(e.tail).pos + c.vertex(*e.head).pos;
  p *= Rational(1, 2);
  auto split = split_at_edge(c, edge, p);

  // line of every original leaf, keyed by the leaf's tail vertex id and direction
  auto inc = line_incidence(c, lines);
  auto line_of = [&](const TropicalCurve& h, std::size_t leaf) -> std::optional<Line> {
    for (std::size_t j = 0; j < inc.size(); ++j) {
      const auto& orig = c.edge(inc[j]);
      const auto& mine = h.edge(leaf);
      if (c.vertex(orig.tail).id == h.vertex(mine.tail).id && orig.dir == mine.dir && orig.weight == mine.weight &&
          orig.leaf_label == mine.leaf_label)
        return lines.lines[j];
    }
    return std::nullopt;
  };

  // rho(r1): momentum leaving h1 along r1
  auto h1_leaves = split.first.leaves();
  std::vector<IntVector> z1;
  for (auto l : h1_leaves) z1.push_back(l == split.first_leaf ? IntVector{0, 0, 1} : line_of(split.first, l)->dir);
  auto t1 = momentum_tree(split.first, z1, Root::leaf(split.first_leaf));
  if (!t1.root_incoming || t1.root_incoming->is_zero()) {
    throw Error(ErrorCode::SplitDegenerate, "rho(r1) vanishes");
  }
  const RotationalMomentum& rho_r1 = *t1.root_incoming;
  IntVector u = split.first.edge(split.first_leaf).dir;
  // Lattice reading of the two new lines: z_a pairs to 1 with rho'(r1), and
  // u x z_b == rho'(r1). The Euclidean parallels satisfy the identity only
  // for unit-length data.
  Line la{p, dual_vector(rho_r1.primitive)};
  Line lb{p, cross_preimage(u, rho_r1.primitive)};

  auto lines_for = [&](const TropicalCurve& h, std::size_t new_leaf, const Line& extra) {
    // unlabeled leaves: order lines as the leaves appear
    std::vector<CurveEdge> es = h.edges();
    for (auto& x : es) x.leaf_label.reset();
    TropicalCurve plain(h.dim(), h.vertices(), es);
    LineConfiguration lc;
    for (auto l : h.leaves()) lc.lines.push_back(l == new_leaf ? extra : *line_of(h, l));
    return std::make_pair(plain, lc);
  };
  auto [c1, lc1] = lines_for(split.first, split.first_leaf, la);
  auto [c2, lc2] = lines_for(split.second, split.second_leaf, lb);
  out.m1 = multiplicity_det(ev_matrix(c1, lc1)).value;
  out.m2 = multiplicity_det(ev_matrix(c2, lc2)).value;
  out.rhs = Rational(out.m1 * out.m2) / Rational(out.weight);
  out.rhs.canonicalize();
  out.holds = out.rhs == Rational(out.lhs);
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration over tree topologies

inline constexpr std::size_t KAPPA_CAP = 8;

struct EnumeratedType {
  TreeTopology topology;
  std::optional<CombinatorialType> type;  // unset when degenerate
  std::optional<TropicalCurve> solution;  // set when accepted
  Integer multiplicity = 0;
  std::string status;  // ACCEPTED, DEGENERATE, NEGATIVE_LENGTH, OFF_RAY
};

namespace detail {

// A vertex whose edges are all parallel (collapsed plane).
inline bool has_flat_vertex(const TropicalCurve& c) {
  for (auto v : c.proper_vertices()) {
    const auto& inc = c.incident(v);
    bool flat = true;
    for (std::size_t i = 1; i < inc.size(); ++i) flat = flat && parallel(c.edge(inc[0].edge).dir, c.edge(inc[i].edge).dir);
    if (flat) return true;
  }
  return false;
}

}  // namespace detail

struct EnumerationResult {
  Integer total = 0;
  std::vector<EnumeratedType> per_type;
};

/// Counts trees of the given degree through the lines. `incidence[j]` is the
/// line for degree entry j.
inline EnumerationResult enumerate_count(const std::vector<IntVector>& degree, const LineConfiguration& lines,
                                         const std::vector<std::size_t>& incidence, std::size_t cap = KAPPA_CAP) {
  const std::size_t kappa = degree.size();
  if (kappa > cap) throw Error(ErrorCode::KappaCap, "kappa " + std::to_string(kappa) + " exceeds cap " + std::to_string(cap));
  if (kappa < 2) throw Error(ErrorCode::InvalidArgument, "need at least two leaves");
  if (lines.size() != kappa || incidence.size() != kappa) {
    throw Error(ErrorCode::InvalidArgument, "degree, lines and incidence sizes differ");
  }
  {
    std::vector<bool> used(kappa, false);
    for (auto j : incidence) {
      if (j >= kappa || used[j]) throw Error(ErrorCode::InvalidArgument, "incidence is not a bijection");
      used[j] = true;
    }
  }
  for (const auto& d : degree)
    if (d.dim() != 3) throw Error(ErrorCode::DimensionMismatch, "enumeration works in R^3");
  // Lines in degree order.
  LineConfiguration ordered;
  for (std::size_t j = 0; j < kappa; ++j) ordered.lines.push_back(lines.lines[incidence[j]]);

  EnumerationResult res;
  for (const auto& topo : all_trivalent_trees(kappa)) {
    EnumeratedType et;
    et.topology = topo;
    auto skel = internal_directions_from_leaves(topo, degree);
    if (!skel) {
      et.status = "DEGENERATE";
      res.per_type.push_back(std::move(et));
      continue;
    }
    et.type = combinatorial_type(*skel);
    if (kappa > 2 && detail::has_flat_vertex(*skel)) {
      et.status = "DEGENERATE";
      res.per_type.push_back(std::move(et));
      continue;
    }
    auto ev = ev_matrix(*skel, ordered);
    if (kappa == 2) {
      // A line: translations modulo its direction, no lengths and no rays.
      RationalVector rhs2{dot(cross(degree[0], ordered.lines[0].dir), ordered.lines[0].base),
                          dot(cross(degree[1], ordered.lines[1].dir), ordered.lines[1].base)};
      auto sol = solve_exact(to_rational(ev.m), rhs2);
      if (sol.kind != SolveResult::Kind::Unique) {
        throw Error(ErrorCode::NonGenericConfig, "singular system for type " + et.type->canonical);
      }
      auto [a, b] = complete_to_basis(primitive_part(degree[0]));
      std::vector<CurveVertex> vs = skel->vertices();
      vs[0].pos = to_rational(a) * sol.x[0] + to_rational(b) * sol.x[1];
      et.multiplicity = abs(determinant(ev.m));
      et.status = "ACCEPTED";
      et.solution = TropicalCurve(3, vs, skel->edges());
      res.total += et.multiplicity;
      res.per_type.push_back(std::move(et));
      continue;
    }
    auto sk = build_skeleton(*skel);
    // right-hand side rho_j . b_j
    auto rhs = RationalVector::zero(kappa);
    std::vector<IntVector> rho(kappa);
    for (std::size_t j = 0; j < kappa; ++j) {
      rho[j] = cross(skel->edge(ev.row_leaf[j]).vec(), ordered.lines[j].dir);
      rhs[j] = dot(rho[j], ordered.lines[j].base);
    }
    auto sol = solve_exact(to_rational(ev.m), rhs);
    if (sol.kind != SolveResult::Kind::Unique) {
      throw Error(ErrorCode::NonGenericConfig, "singular system for type " + et.type->canonical);
    }
    et.multiplicity = abs(determinant(ev.m));
    // Rebuild positions: translation plus lengths along the BFS tree.
    bool positive = true;
    std::map<std::size_t, Rational> len;
    for (std::size_t k = 0; k < ev.length_edges.size(); ++k) {
      len[ev.length_edges[k]] = sol.x[3 + k];
      if (sol.x[3 + k] == 0) {
        throw Error(ErrorCode::NonGenericConfig, "zero edge length for type " + et.type->canonical);
      }
      positive = positive && sol.x[3 + k] > 0;
    }
    std::vector<CurveVertex> vs = skel->vertices();
    std::vector<bool> placed(vs.size(), false);
    std::size_t ref = sk.nodes[0];
    vs[ref].pos = RationalVector{sol.x[0], sol.x[1], sol.x[2]};
    placed[ref] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t s = 0; s < sk.edges.size(); ++s) {
        const auto& e = sk.edges[s];
        if (!e.bounded()) continue;
        std::size_t a = sk.nodes[*e.node[0]], b = sk.nodes[*e.node[1]];
        if (placed[a] == placed[b]) continue;
        Rational l = len[s];
        if (placed[a]) {
          vs[b].pos = vs[a].pos + to_rational(e.vec) * l;
          placed[b] = true;
        } else {
          vs[a].pos = vs[b].pos - to_rational(e.vec) * l;
          placed[a] = true;
        }
        grew = true;
      }
    }
    if (!positive) {
      et.status = "NEGATIVE_LENGTH";
      res.per_type.push_back(std::move(et));
      continue;
    }
    TropicalCurve solved(3, vs, skel->edges());
    // each leaf must meet its line on the ray, not behind its vertex
    bool on_ray = true;
    for (std::size_t j = 0; j < kappa; ++j) {
      const auto& leaf = solved.edge(ev.row_leaf[j]);
      auto h = solved.vertex(leaf.tail).pos;
      auto diff = h - ordered.lines[j].base;
      auto rr = to_rational(rho[j]);
      Rational s = -dot(cross(diff, to_rational(ordered.lines[j].dir)), rr) / dot(rr, rr);
      if (s == 0) throw Error(ErrorCode::NonGenericConfig, "line meets a vertex for type " + et.type->canonical);
      on_ray = on_ray && s > 0;
    }
    if (!on_ray) {
      et.status = "OFF_RAY";
      res.per_type.push_back(std::move(et));
      continue;
    }
    et.status = "ACCEPTED";
    et.solution = std::move(solved);
    res.total += et.multiplicity;
    res.per_type.push_back(std::move(et));
  }
  return res;
}

}  // namespace troplag
