#pragma once

// Tropical curve data model and combinatorics.
//
// A curve is a connected graph whose vertices carry exact rational
// positions. Bounded edges join two vertices; leaves leave a vertex along an
// outward primitive direction and have no head. Vertices of valence 2 are
// marked interior points of a straight edge: they are allowed so that curves
// without trivalent vertices (a single line) can still be anchored in space,
// and every combinatorial routine collapses them through `Skeleton`.

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "troplag/error.hpp"
#include "troplag/lattice.hpp"

namespace troplag {

struct ValidationIssue {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const noexcept { return issues.empty(); }
  void add(std::string code, std::string message) {
    issues.push_back({std::move(code), std::move(message)});
  }
  void merge(const ValidationReport& other) {
    issues.insert(issues.end(), other.issues.begin(), other.issues.end());
  }
};

struct CurveVertex {
  std::string id;
  RationalVector pos;
};

struct CurveEdge {
  std::size_t tail = 0;
  std::optional<std::size_t> head;  // nullopt for a leaf
  IntVector dir;                    // primitive, tail -> head (outward for leaves)
  Integer weight = 1;
  std::optional<long> leaf_label;

  bool is_leaf() const noexcept { return !head.has_value(); }
  /// Weighted direction dh(e).
  IntVector vec() const { return weight * dir; }
};

class TropicalCurve {
 public:
  /// An edge end seen from a vertex. `sign` is +1 when the edge leaves the
  /// vertex along `dir`, -1 when it arrives.
  struct Incidence {
    std::size_t edge;
    int sign;
  };

  TropicalCurve() = default;
  TropicalCurve(std::size_t dim, std::vector<CurveVertex> vertices, std::vector<CurveEdge> edges)
      : dim_(dim), vertices_(std::move(vertices)), edges_(std::move(edges)) {
    if (dim_ < 2) throw Error(ErrorCode::InvalidCurve, "dimension must be at least 2");
    incidences_.resize(vertices_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto& edge = edges_[e];
      if (edge.tail >= vertices_.size() || (edge.head && *edge.head >= vertices_.size())) {
        throw Error(ErrorCode::InvalidCurve, "edge " + std::to_string(e) + " references a missing vertex");
      }
      incidences_[edge.tail].push_back({e, +1});
      if (edge.head) incidences_[*edge.head].push_back({e, -1});
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<CurveVertex>& vertices() const noexcept { return vertices_; }
  const std::vector<CurveEdge>& edges() const noexcept { return edges_; }
  const CurveVertex& vertex(std::size_t v) const { return vertices_.at(v); }
  const CurveEdge& edge(std::size_t e) const { return edges_.at(e); }

  std::optional<std::size_t> vertex_index(const std::string& id) const {
    for (std::size_t v = 0; v < vertices_.size(); ++v)
      if (vertices_[v].id == id) return v;
    return std::nullopt;
  }

  const std::vector<Incidence>& incident(std::size_t v) const { return incidences_.at(v); }
  std::size_t valence(std::size_t v) const { return incidences_.at(v).size(); }

  /// Weighted direction of edge `inc.edge` pointing away from the vertex.
  IntVector outward(const Incidence& inc) const {
    IntVector d = edges_[inc.edge].vec();
    return inc.sign > 0 ? d : -d;
  }

  /// Leaf edge indices in edge order.
  std::vector<std::size_t> leaves() const {
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (edges_[e].is_leaf()) out.push_back(e);
    return out;
  }
  std::vector<std::size_t> bounded_edges() const {
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < edges_.size(); ++e)
      if (!edges_[e].is_leaf()) out.push_back(e);
    return out;
  }
  /// Vertices that are not straight 2-valent marker points.
  std::vector<std::size_t> proper_vertices() const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < vertices_.size(); ++v)
      if (valence(v) != 2) out.push_back(v);
    return out;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<CurveVertex> vertices_;
  std::vector<CurveEdge> edges_;
  std::vector<std::vector<Incidence>> incidences_;
};

// ---------------------------------------------------------------------------
// Skeleton: the curve with marker points collapsed

struct SkeletonEdge {
  // Node index (into Skeleton::nodes) at each end, or nullopt for a leaf end.
  std::array<std::optional<std::size_t>, 2> node;
  // Curve leaf edge at each leaf end.
  std::array<std::optional<std::size_t>, 2> leaf;
  std::vector<std::size_t> chain;  // curve edges from end 0 to end 1
  IntVector vec;                   // dh, oriented from end 0 to end 1
  Integer weight;

  bool bounded() const { return node[0].has_value() && node[1].has_value(); }
  bool is_leaf() const { return node[0].has_value() != node[1].has_value(); }
};

struct Skeleton {
  std::vector<std::size_t> nodes;  // curve vertex indices of proper vertices
  std::vector<SkeletonEdge> edges;
  // Per node: (skeleton edge, end index at this node).
  std::vector<std::vector<std::pair<std::size_t, int>>> incident;

  std::optional<std::size_t> node_of_vertex(std::size_t v) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i] == v) return i;
    return std::nullopt;
  }
  /// dh of skeleton edge `e` pointing away from its end `end`.
  IntVector outward(std::size_t e, int end) const { return end == 0 ? edges[e].vec : -edges[e].vec; }
  /// Skeleton edge whose leaf end is curve leaf `leaf_edge`.
  std::optional<std::size_t> edge_of_leaf(std::size_t leaf_edge) const {
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (edges[e].leaf[0] == leaf_edge || edges[e].leaf[1] == leaf_edge) return e;
    return std::nullopt;
  }
};

inline Skeleton build_skeleton(const TropicalCurve& c) {
  Skeleton s;
  s.nodes = c.proper_vertices();
  s.incident.resize(s.nodes.size());
  std::vector<std::optional<std::size_t>> node_index(c.vertices().size());
  for (std::size_t i = 0; i < s.nodes.size(); ++i) node_index[s.nodes[i]] = i;

  std::vector<bool> used(c.edges().size(), false);

  // Follows the chain leaving vertex `v` through incidence `inc`.
  auto walk = [&](std::size_t v, TropicalCurve::Incidence inc, SkeletonEdge& out) {
    out.weight = c.edge(inc.edge).weight;
    out.vec = c.outward(inc);
    std::size_t cur_vertex = v;
    auto cur = inc;
    while (true) {
      used[cur.edge] = true;
      out.chain.push_back(cur.edge);
      const auto& e = c.edge(cur.edge);
      if (e.is_leaf()) {
        out.leaf[1] = cur.edge;
        return;
      }
      std::size_t next = cur.sign > 0 ? *e.head : e.tail;
      if (node_index[next]) {
        out.node[1] = node_index[next];
        return;
      }
      // Marker: continue through its other edge.
      const auto& inc_next = c.incident(next);
      auto other = inc_next[0].edge == cur.edge && inc_next[0].sign == -cur.sign ? inc_next[1] : inc_next[0];
      if (other.edge == cur.edge) other = inc_next[1];
      cur_vertex = next;
      cur = other;
      if (used[cur.edge]) return;  // closed marker loop, malformed
    }
    (void)cur_vertex;
  };

  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    for (const auto& inc : c.incident(s.nodes[i])) {
      if (used[inc.edge]) continue;
      SkeletonEdge se;
      se.node[0] = i;
      walk(s.nodes[i], inc, se);
      std::size_t id = s.edges.size();
      s.incident[i].push_back({id, 0});
      if (se.node[1]) s.incident[*se.node[1]].push_back({id, 1});
      s.edges.push_back(std::move(se));
    }
  }
  // Components without a proper vertex are lines: walk from one leaf
  // through the markers to the other.
  for (auto start : c.leaves()) {
    if (used[start]) continue;
    SkeletonEdge se;
    se.leaf[0] = start;
    std::size_t v = c.edge(start).tail;
    const auto& incs = c.incident(v);
    if (incs.size() != 2) continue;
    auto other = incs[0].edge == start ? incs[1] : incs[0];
    used[start] = true;
    walk(v, other, se);
    se.chain.insert(se.chain.begin(), start);
    s.edges.push_back(std::move(se));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Validation

inline bool positive_multiple(const RationalVector& delta, const IntVector& dir) {
  // delta == lambda * dir with lambda > 0
  std::optional<Rational> lambda;
  for (std::size_t i = 0; i < dir.dim(); ++i) {
    if (dir[i] == 0) {
      if (delta[i] != 0) return false;
      continue;
    }
    Rational l = delta[i] / Rational(dir[i]);
    if (lambda && *lambda != l) return false;
    lambda = l;
  }
  return lambda && *lambda > 0;
}

/// Checks the tropical curve axioms and reports every violation.
inline ValidationReport validate_curve(const TropicalCurve& c) {
  ValidationReport r;
  const std::size_t n = c.dim();
  if (c.vertices().empty() || c.edges().empty()) {
    r.add("EMPTY_CURVE", "curve needs at least one vertex and one edge");
    return r;
  }
  std::set<std::string> ids;
  for (const auto& v : c.vertices()) {
    if (!ids.insert(v.id).second) r.add("DUPLICATE_VERTEX_ID", "vertex id '" + v.id + "' repeated");
    if (v.pos.dim() != n) r.add("DIMENSION_MISMATCH", "vertex '" + v.id + "' position has wrong dimension");
  }
  bool shapes_ok = r.ok();
  for (std::size_t e = 0; e < c.edges().size(); ++e) {
    const auto& edge = c.edge(e);
    std::string name = "edge " + std::to_string(e);
    if (edge.dir.dim() != n) {
      r.add("DIMENSION_MISMATCH", name + " direction has wrong dimension");
      shapes_ok = false;
      continue;
    }
    if (edge.dir.is_zero()) {
      r.add("ZERO_DIRECTION", name + " has zero direction");
      shapes_ok = false;
    } else if (!is_primitive(edge.dir)) {
      r.add("NON_PRIMITIVE_DIRECTION", name + " direction " + edge.dir.str() + " is not primitive");
    }
    if (edge.weight <= 0) r.add("NON_POSITIVE_WEIGHT", name + " has weight " + edge.weight.get_str());
  }
  if (!shapes_ok) return r;

  for (std::size_t e = 0; e < c.edges().size(); ++e) {
    const auto& edge = c.edge(e);
    if (edge.is_leaf()) continue;
    RationalVector delta = c.vertex(*edge.head).pos - c.vertex(edge.tail).pos;
    if (!positive_multiple(delta, edge.dir)) {
      r.add("INCONSISTENT_POSITION", "edge " + std::to_string(e) + " from '" + c.vertex(edge.tail).id +
                                         "' to '" + c.vertex(*edge.head).id +
                                         "' is not a positive multiple of " + edge.dir.str());
    }
  }
  for (std::size_t v = 0; v < c.vertices().size(); ++v) {
    auto sum = IntVector::zero(n);
    for (const auto& inc : c.incident(v)) sum += c.outward(inc);
    if (c.valence(v) == 0) {
      r.add("ISOLATED_VERTEX", "vertex '" + c.vertex(v).id + "' has no edges");
    } else if (!sum.is_zero()) {
      r.add("UNBALANCED_VERTEX", "vertex '" + c.vertex(v).id + "' has weighted sum " + sum.str());
    }
  }
  // Connectivity through bounded edges.
  std::vector<std::size_t> parent(c.vertices().size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const auto& edge : c.edges())
    if (!edge.is_leaf()) parent[find(edge.tail)] = find(*edge.head);
  std::set<std::size_t> roots;
  for (std::size_t v = 0; v < c.vertices().size(); ++v) roots.insert(find(v));
  if (roots.size() > 1) r.add("DISCONNECTED", std::to_string(roots.size()) + " connected components");
  return r;
}

inline void require_valid(const TropicalCurve& c) {
  auto r = validate_curve(c);
  if (!r.ok()) throw Error(ErrorCode::InvalidCurve, r.issues.front().code + ": " + r.issues.front().message);
}

// ---------------------------------------------------------------------------
// Betti number and toric degree

struct BettiDegree {
  Integer b1;
  std::size_t kappa = 0;
  std::vector<IntVector> degree;  // weight * direction over leaves, in leaf order
};

inline BettiDegree betti_and_degree(const TropicalCurve& c) {
  BettiDegree out;
  long bounded = static_cast<long>(c.bounded_edges().size());
  long vertices = static_cast<long>(c.vertices().size());
  out.b1 = bounded - vertices + 1;
  for (auto e : c.leaves()) out.degree.push_back(c.edge(e).vec());
  out.kappa = out.degree.size();
  return out;
}

inline bool is_tree(const TropicalCurve& c) { return betti_and_degree(c).b1 == 0; }

// ---------------------------------------------------------------------------
// Regularity

struct RegularityReport {
  long def_dim = 0;
  long expected_dim = 0;
  std::size_t rank = 0;
  bool regular = false;
};

/// Rank of the cycle conditions sum_{e in Z} dh(e) l(e) == 0 over a cycle
/// basis, and the resulting deformation dimension.
inline RegularityReport regularity_check(const TropicalCurve& c) {
  auto sk = build_skeleton(c);
  for (std::size_t i = 0; i < sk.nodes.size(); ++i) {
    if (sk.incident[i].size() != 3) {
      throw Error(ErrorCode::NotTrivalent, "vertex '" + c.vertex(sk.nodes[i]).id + "' has valence " +
                                               std::to_string(sk.incident[i].size()));
    }
  }
  const long n = static_cast<long>(c.dim());
  std::vector<std::size_t> bounded;
  std::map<std::size_t, std::size_t> column;
  for (std::size_t e = 0; e < sk.edges.size(); ++e) {
    if (sk.edges[e].bounded()) {
      column[e] = bounded.size();
      bounded.push_back(e);
    }
  }
  long kappa = 0;
  for (const auto& e : sk.edges) kappa += (e.leaf[0] ? 1 : 0) + (e.leaf[1] ? 1 : 0);
  const long b = static_cast<long>(bounded.size());
  const long nodes = static_cast<long>(sk.nodes.size());

  RegularityReport rep;
  if (nodes == 0) {
    // A single line moves only transversally to itself.
    rep.def_dim = n - 1;
    rep.expected_dim = kappa + (n - 3);
    rep.regular = true;
    return rep;
  }
  const long b1 = b - nodes + 1;

  // Spanning tree by BFS; every non-tree edge closes one fundamental cycle.
  std::vector<std::optional<std::pair<std::size_t, int>>> via(sk.nodes.size());  // (edge, end at parent)
  std::vector<bool> seen(sk.nodes.size(), false);
  std::vector<bool> tree_edge(sk.edges.size(), false);
  std::vector<std::size_t> queue{0};
  seen[0] = true;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::size_t u = queue[qi];
    for (auto [e, end] : sk.incident[u]) {
      if (!sk.edges[e].bounded()) continue;
      std::size_t w = *sk.edges[e].node[1 - end];
      if (seen[w]) continue;
      seen[w] = true;
      tree_edge[e] = true;
      via[w] = std::make_pair(e, end);
      queue.push_back(w);
    }
  }
  // Signed edge coefficients of the tree path from the root to node x.
  auto root_path = [&](std::size_t x) {
    std::map<std::size_t, int> coeff;
    while (via[x]) {
      auto [e, end] = *via[x];
      coeff[e] += end == 0 ? +1 : -1;  // traversed from end `end` toward x
      x = *sk.edges[e].node[end];
    }
    return coeff;
  };
  std::vector<RationalVector> rows;
  for (std::size_t e : bounded) {
    if (tree_edge[e]) continue;
    // cycle: root -> node0 -> (e) -> node1 -> root
    std::map<std::size_t, int> coeff = root_path(*sk.edges[e].node[0]);
    coeff[e] += 1;
    for (auto [f, s] : root_path(*sk.edges[e].node[1])) coeff[f] -= s;
    for (long k = 0; k < n; ++k) {
      auto row = RationalVector::zero(bounded.size());
      for (auto [f, s] : coeff) row[column[f]] += Rational(s) * Rational(sk.edges[f].vec[k]);
      rows.push_back(std::move(row));
    }
  }
  rep.rank = rows.empty() ? 0 : rank(RationalMatrix::from_rows(rows));
  rep.def_dim = n + b - static_cast<long>(rep.rank);
  rep.expected_dim = kappa + (n - 3) * (1 - b1);
  rep.regular = static_cast<long>(rep.rank) == n * b1;
  return rep;
}

// ---------------------------------------------------------------------------
// Splitting and joining trees

struct SplitResult {
  TropicalCurve first;   // contains the tail side of the split edge
  TropicalCurve second;  // contains the head side
  std::size_t first_leaf = 0;   // new leaf r1 in `first`, direction dh(e)
  std::size_t second_leaf = 0;  // new leaf r2 in `second`, direction -dh(e)
};

/// Cuts a tree at an interior point of a bounded edge and extends both
/// halves to rays.
inline SplitResult split_at_edge(const TropicalCurve& c, std::size_t edge, const RationalVector& point) {
  if (edge >= c.edges().size() || c.edge(edge).is_leaf()) {
    throw Error(ErrorCode::InvalidArgument, "split edge must be bounded");
  }
  if (!is_tree(c)) throw Error(ErrorCode::NotATree, "split_at_edge needs a tree");
  const auto& e = c.edge(edge);
  const auto& tail_pos = c.vertex(e.tail).pos;
  const auto& head_pos = c.vertex(*e.head).pos;
  if (point.dim() != c.dim() || !positive_multiple(point - tail_pos, e.dir) ||
      !positive_multiple(head_pos - point, e.dir)) {
    throw Error(ErrorCode::InvalidArgument, "split point is not interior to edge " + std::to_string(edge));
  }
  // Component of each vertex after deleting `edge`.
  std::vector<int> side(c.vertices().size(), -1);
  auto flood = [&](std::size_t start, int label) {
    std::vector<std::size_t> stack{start};
    side[start] = label;
    while (!stack.empty()) {
      std::size_t v = stack.back();
      stack.pop_back();
      for (const auto& inc : c.incident(v)) {
        if (inc.edge == edge) continue;
        const auto& f = c.edge(inc.edge);
        if (f.is_leaf()) continue;
        std::size_t w = inc.sign > 0 ? *f.head : f.tail;
        if (side[w] < 0) {
          side[w] = label;
          stack.push_back(w);
        }
      }
    }
  };
  flood(e.tail, 0);
  flood(*e.head, 1);

  auto build = [&](int label, std::size_t anchor, const IntVector& dir, std::size_t& new_leaf) {
    std::vector<CurveVertex> vs;
    std::vector<std::optional<std::size_t>> remap(c.vertices().size());
    for (std::size_t v = 0; v < c.vertices().size(); ++v) {
      if (side[v] != label) continue;
      remap[v] = vs.size();
      vs.push_back(c.vertex(v));
    }
    std::vector<CurveEdge> es;
    for (std::size_t f = 0; f < c.edges().size(); ++f) {
      if (f == edge || side[c.edge(f).tail] != label) continue;
      CurveEdge copy = c.edge(f);
      copy.tail = *remap[copy.tail];
      if (copy.head) copy.head = *remap[*copy.head];
      es.push_back(std::move(copy));
    }
    new_leaf = es.size();
    es.push_back(CurveEdge{*remap[anchor], std::nullopt, dir, e.weight, std::nullopt});
    return TropicalCurve(c.dim(), std::move(vs), std::move(es));
  };
  SplitResult out;
  out.first = build(0, e.tail, e.dir, out.first_leaf);
  out.second = build(1, *e.head, -e.dir, out.second_leaf);
  return out;
}

/// Inverse of split_at_edge: joins leaf r1 of `a` and leaf r2 of `b` into one
/// bounded edge. Vertex ids of `b` that collide with ids of `a` get a prime.
inline TropicalCurve join_at_leaves(const TropicalCurve& a, std::size_t r1, const TropicalCurve& b, std::size_t r2) {
  const auto& l1 = a.edge(r1);
  const auto& l2 = b.edge(r2);
  if (!l1.is_leaf() || !l2.is_leaf() || l1.vec() != -l2.vec()) {
    throw Error(ErrorCode::InvalidArgument, "join needs two opposite leaves of equal weight");
  }
  std::vector<CurveVertex> vs = a.vertices();
  std::set<std::string> ids;
  for (const auto& v : vs) ids.insert(v.id);
  const std::size_t offset = vs.size();
  for (auto v : b.vertices()) {
    while (ids.count(v.id)) v.id += "'";
    ids.insert(v.id);
    vs.push_back(std::move(v));
  }
  std::vector<CurveEdge> es;
  for (std::size_t f = 0; f < a.edges().size(); ++f)
    if (f != r1) es.push_back(a.edge(f));
  for (std::size_t f = 0; f < b.edges().size(); ++f) {
    if (f == r2) continue;
    CurveEdge copy = b.edge(f);
    copy.tail += offset;
    if (copy.head) *copy.head += offset;
    es.push_back(std::move(copy));
  }
  es.push_back(CurveEdge{l1.tail, l2.tail + offset, l1.dir, l1.weight, std::nullopt});
  return TropicalCurve(a.dim(), std::move(vs), std::move(es));
}

// ---------------------------------------------------------------------------
// Labeled trivalent trees

/// Nodes 0..leaf_count-1 are leaves (node id == leaf label); the others are
/// internal trivalent nodes.
struct TreeTopology {
  std::size_t leaf_count = 0;
  std::size_t node_count = 0;
  std::vector<std::array<std::size_t, 2>> edges;

  std::string str() const {
    std::string s;
    for (const auto& e : edges) s += std::to_string(e[0]) + "-" + std::to_string(e[1]) + " ";
    if (!s.empty()) s.pop_back();
    return s;
  }
};

/// All (2k-5)!! leaf-labeled trivalent trees with k >= 3 leaves, generated
/// by inserting leaves in index order into every edge of the previous trees.
inline std::vector<TreeTopology> all_trivalent_trees(std::size_t leaves) {
  if (leaves < 2) throw Error(ErrorCode::InvalidArgument, "trees need at least two leaves");
  if (leaves == 2) return {TreeTopology{2, 2, {{0, 1}}}};
  std::vector<TreeTopology> cur{TreeTopology{leaves, leaves + 1, {{leaves, 0}, {leaves, 1}, {leaves, 2}}}};
  for (std::size_t k = 3; k < leaves; ++k) {
    std::vector<TreeTopology> next;
    for (const auto& t : cur) {
      for (std::size_t e = 0; e < t.edges.size(); ++e) {
        TreeTopology u = t;
        std::size_t m = u.node_count++;
        auto [a, b] = u.edges[e];
        u.edges[e] = {a, m};
        u.edges.push_back({m, b});
        u.edges.push_back({m, k});
        next.push_back(std::move(u));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

/// Assigns each edge of a labeled trivalent tree the sum of the leaf degree
/// vectors on its far side. Returns nullopt (degenerate) when some edge
/// vector vanishes. Internal edges get length 1, so the result is a valid
/// curve with its first internal node at the origin.
inline std::optional<TropicalCurve> internal_directions_from_leaves(const TreeTopology& t,
                                                                    const std::vector<IntVector>& degree) {
  if (degree.size() != t.leaf_count) {
    throw Error(ErrorCode::InvalidArgument, "topology has " + std::to_string(t.leaf_count) +
                                                " leaves but degree has " + std::to_string(degree.size()));
  }
  if (degree.empty()) throw Error(ErrorCode::InvalidArgument, "empty degree");
  const std::size_t n = degree.front().dim();
  std::vector<std::vector<std::size_t>> adj(t.node_count);
  for (const auto& e : t.edges) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  // Flow from a to b: sum of leaf vectors in the component of b.
  std::function<IntVector(std::size_t, std::size_t)> far_sum = [&](std::size_t a, std::size_t b) {
    if (b < t.leaf_count) return degree[b];
    auto s = IntVector::zero(n);
    for (auto w : adj[b])
      if (w != a) s += far_sum(b, w);
    return s;
  };
  for (const auto& d : degree)
    if (d.is_zero()) return std::nullopt;

  if (t.leaf_count == 2) {
    if (degree[0] != -degree[1]) return std::nullopt;
    auto pd = gcd_primitive(degree[0]);
    IntVector dir = primitive_part(degree[0]);
    std::vector<CurveVertex> vs{{"m", RationalVector::zero(n)}};
    std::vector<CurveEdge> es{{0, std::nullopt, dir, pd.g, 0}, {0, std::nullopt, -dir, pd.g, 1}};
    return TropicalCurve(n, std::move(vs), std::move(es));
  }

  std::vector<std::optional<std::size_t>> vertex_of(t.node_count);
  std::vector<CurveVertex> vs;
  std::vector<CurveEdge> es;
  std::size_t root = t.leaf_count;
  vertex_of[root] = 0;
  vs.push_back({"v" + std::to_string(root), RationalVector::zero(n)});
  std::vector<std::size_t> stack{root};
  std::vector<bool> seen(t.node_count, false);
  seen[root] = true;
  while (!stack.empty()) {
    std::size_t a = stack.back();
    stack.pop_back();
    for (auto b : adj[a]) {
      if (seen[b]) continue;
      seen[b] = true;
      IntVector flow = far_sum(a, b);
      if (flow.is_zero()) return std::nullopt;
      Integer w = content(flow);
      IntVector dir = primitive_part(flow);
      if (b < t.leaf_count) {
        es.push_back({*vertex_of[a], std::nullopt, dir, w, static_cast<long>(b)});
        continue;
      }
      vertex_of[b] = vs.size();
      vs.push_back({"v" + std::to_string(b), vs[*vertex_of[a]].pos + to_rational(flow)});
      es.push_back({*vertex_of[a], *vertex_of[b], dir, w, std::nullopt});
      stack.push_back(b);
    }
  }
  return TropicalCurve(n, std::move(vs), std::move(es));
}

// ---------------------------------------------------------------------------
// Combinatorial type

struct CombinatorialType {
  std::string canonical;
  friend bool operator==(const CombinatorialType&, const CombinatorialType&) = default;
  friend bool operator<(const CombinatorialType& a, const CombinatorialType& b) { return a.canonical < b.canonical; }
};

namespace detail {

// Canonical BFS encoding from a start node. Neighbors are visited in order of
// their outward edge vector; ties are resolved by trying every order.
inline void encode_bfs(const Skeleton& sk, std::vector<long> label, std::vector<std::size_t> queue,
                       std::size_t qi, std::string out, std::string& best, bool& have_best) {
  if (have_best && out.size() >= best.size() && out.compare(0, best.size(), best) > 0) return;
  while (qi < queue.size()) {
    std::size_t u = queue[qi++];
    struct Item {
      IntVector vec;
      std::size_t edge;
      std::optional<std::size_t> other;
    };
    std::vector<Item> items;
    for (auto [e, end] : sk.incident[u]) items.push_back({sk.outward(e, end), e, sk.edges[e].node[1 - end]});
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      if (a.vec != b.vec) return a.vec < b.vec;
      return a.other.has_value() < b.other.has_value();
    });
    // Groups of unlabeled neighbors reached by equal vectors are ambiguous.
    for (std::size_t i = 0; i + 1 < items.size(); ++i) {
      if (items[i].vec == items[i + 1].vec && items[i].other && items[i + 1].other &&
          label[*items[i].other] < 0 && label[*items[i + 1].other] < 0) {
        std::size_t j = i;
        while (j < items.size() && items[j].vec == items[i].vec) ++j;
        std::vector<Item> group(items.begin() + i, items.begin() + j);
        std::vector<std::size_t> perm(group.size());
        std::iota(perm.begin(), perm.end(), 0);
        do {
          auto label2 = label;
          auto queue2 = queue;
          std::string out2 = out;
          std::vector<Item> ordered = items;
          for (std::size_t k = 0; k < perm.size(); ++k) ordered[i + k] = group[perm[k]];
          for (const auto& it : ordered) {
            if (it.other && label2[*it.other] < 0) {
              label2[*it.other] = static_cast<long>(queue2.size());
              queue2.push_back(*it.other);
            }
            out2 += std::to_string(label2[u]) + ">" + (it.other ? std::to_string(label2[*it.other]) : "L") +
                    it.vec.str() + ";";
          }
          encode_bfs(sk, label2, queue2, qi, out2, best, have_best);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return;
      }
    }
    for (const auto& it : items) {
      if (it.other && label[*it.other] < 0) {
        label[*it.other] = static_cast<long>(queue.size());
        queue.push_back(*it.other);
      }
      out += std::to_string(label[u]) + ">" + (it.other ? std::to_string(label[*it.other]) : "L") +
             it.vec.str() + ";";
    }
  }
  if (!have_best || out < best) {
    best = out;
    have_best = true;
  }
}

}  // namespace detail

/// Canonical encoding of the curve up to re-indexing: graph structure with
/// marker points collapsed, labeled by oriented edge vectors dh(e).
inline CombinatorialType combinatorial_type(const TropicalCurve& c) {
  auto sk = build_skeleton(c);
  std::string prefix = "n" + std::to_string(c.dim()) + "|";
  if (sk.nodes.empty()) {
    if (sk.edges.empty()) return {prefix + "empty"};
    IntVector v = sk.edges[0].vec;
    IntVector w = -v;
    return {prefix + "line" + std::min(v, w).str()};
  }
  std::string best;
  bool have_best = false;
  for (std::size_t s = 0; s < sk.nodes.size(); ++s) {
    std::vector<long> label(sk.nodes.size(), -1);
    label[s] = 0;
    detail::encode_bfs(sk, label, {s}, 0, "", best, have_best);
  }
  return {prefix + best};
}

}  // namespace troplag
