#pragma once

// Polyhedral domains {x : p_j . x >= a_j}, boundary points of curves, and
// the geometric checks built on them.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "troplag/curve.hpp"
#include "troplag/error.hpp"
#include "troplag/lattice.hpp"

namespace troplag {

struct Facet {
  IntVector normal;  // primitive inner normal
  Rational offset;
};

class PolyhedralDomain {
 public:
  PolyhedralDomain() = default;
  PolyhedralDomain(std::size_t dim, std::vector<Facet> facets) : dim_(dim), facets_(std::move(facets)) {
    for (const auto& f : facets_) {
      if (f.normal.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "facet normal has wrong dimension");
      if (f.normal.is_zero()) throw Error(ErrorCode::InvalidArgument, "zero facet normal");
    }
  }

  /// {x_i >= 0, -sum x_i >= -size}
  static PolyhedralDomain simplex(std::size_t dim, const Rational& size = 1) {
    std::vector<Facet> fs;
    for (std::size_t i = 0; i < dim; ++i) {
      auto e = IntVector::zero(dim);
      e[i] = 1;
      fs.push_back({e, 0});
    }
    fs.push_back({IntVector(std::vector<Integer>(dim, Integer(-1))), -size});
    return PolyhedralDomain(dim, std::move(fs));
  }
  /// Orthant x_i >= 0.
  static PolyhedralDomain orthant(std::size_t dim) {
    std::vector<Facet> fs;
    for (std::size_t i = 0; i < dim; ++i) {
      auto e = IntVector::zero(dim);
      e[i] = 1;
      fs.push_back({e, 0});
    }
    return PolyhedralDomain(dim, std::move(fs));
  }
  /// Box 0 <= x_i <= sides[i].
  static PolyhedralDomain box(const std::vector<Rational>& sides) {
    std::size_t dim = sides.size();
    std::vector<Facet> fs;
    for (std::size_t i = 0; i < dim; ++i) {
      auto e = IntVector::zero(dim);
      e[i] = 1;
      fs.push_back({e, 0});
      fs.push_back({-e, -sides[i]});
    }
    return PolyhedralDomain(dim, std::move(fs));
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Facet>& facets() const noexcept { return facets_; }
  const Facet& facet(std::size_t i) const { return facets_.at(i); }

  Rational slack(std::size_t i, const RationalVector& x) const { return dot(facets_[i].normal, x) - facets_[i].offset; }

  bool contains(const RationalVector& x) const {
    for (std::size_t i = 0; i < facets_.size(); ++i)
      if (slack(i, x) < 0) return false;
    return true;
  }
  std::vector<std::size_t> active_facets(const RationalVector& x) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < facets_.size(); ++i)
      if (slack(i, x) == 0) out.push_back(i);
    return out;
  }
  std::vector<IntVector> normals(const std::vector<std::size_t>& idx) const {
    std::vector<IntVector> out;
    for (auto i : idx) out.push_back(facets_[i].normal);
    return out;
  }
  std::size_t normal_rank() const {
    std::vector<std::size_t> all(facets_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return facets_.empty() ? 0 : rank(normals(all));
  }

  /// A domain with the same normals as the standard simplex of this dimension.
  bool is_standard_simplex() const {
    auto ref = simplex(dim_);
    if (facets_.size() != ref.facets().size()) return false;
    std::multiset<IntVector> a, b;
    for (const auto& f : facets_) a.insert(f.normal);
    for (const auto& f : ref.facets()) b.insert(f.normal);
    return a == b;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Facet> facets_;
};

struct Line {
  RationalVector base;
  IntVector dir;
};

struct LineConfiguration {
  std::vector<Line> lines;
  std::size_t size() const noexcept { return lines.size(); }
};

// ---------------------------------------------------------------------------
// Face structure

namespace detail {

/// Calls f on every k-subset of {0..n-1} in lexicographic order.
inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

struct MinimalFace {
  RationalVector point;                // a point of the face
  std::vector<std::size_t> active;     // facets containing the face
};

/// Minimal nonempty faces (vertices when the normals span R^n). Each is
/// found as the solution set of r independent tight facets, r being the rank
/// of all normals.
inline std::vector<MinimalFace> minimal_faces(const PolyhedralDomain& d) {
  std::vector<MinimalFace> out;
  const std::size_t n = d.dim();
  const std::size_t r = d.normal_rank();
  if (r == 0) {
    out.push_back({RationalVector::zero(n), {}});
    return out;
  }
  std::set<std::vector<std::size_t>> seen;
  detail::for_each_subset(d.facets().size(), r, [&](const std::vector<std::size_t>& s) {
    auto ns = d.normals(s);
    if (rank(ns) != r) return;
    RationalMatrix m = to_rational(IntMatrix::from_rows(ns));
    auto b = RationalVector::zero(r);
    for (std::size_t i = 0; i < r; ++i) b[i] = d.facet(s[i]).offset;
    auto sol = solve_exact(m, b);
    if (sol.kind == SolveResult::Kind::None) return;
    if (!d.contains(sol.x)) return;
    auto active = d.active_facets(sol.x);
    if (!seen.insert(active).second) return;
    out.push_back({sol.x, active});
  });
  return out;
}

/// True iff the domain contains no ray.
inline bool is_bounded(const PolyhedralDomain& d) {
  const std::size_t n = d.dim();
  if (d.normal_rank() < n) return false;
  if (minimal_faces(d).empty()) return true;  // empty set
  bool bounded = true;
  detail::for_each_subset(d.facets().size(), n - 1, [&](const std::vector<std::size_t>& s) {
    if (!bounded) return;
    std::vector<IntVector> ns = d.normals(s);
    IntVector ray;
    if (n == 1) {
      ray = IntVector{1};
    } else {
      if (rank(ns) != n - 1) return;
      auto k = integer_kernel(IntMatrix::from_rows(ns));
      if (k.size() != 1) return;
      ray = k[0];
    }
    for (int sign : {1, -1}) {
      IntVector r = sign > 0 ? ray : -ray;
      bool ok = true;
      for (const auto& f : d.facets()) ok = ok && dot(f.normal, r) >= 0;
      if (ok) bounded = false;
    }
  });
  return bounded;
}

struct StratumIndex {
  std::vector<std::size_t> facets;
  Integer index;
};

/// Lattice index of the active normals at every minimal face.
inline std::vector<StratumIndex> stratum_indices(const PolyhedralDomain& d) {
  std::vector<StratumIndex> out;
  for (const auto& f : minimal_faces(d)) {
    if (f.active.empty()) continue;
    out.push_back({f.active, lattice_index(d.normals(f.active))});
  }
  return out;
}

/// Largest t <= 1 with a point on facet i at slack >= t from every other
/// facet. Positive iff facet i supports an (n-1)-dimensional face.
inline Rational facet_margin(const PolyhedralDomain& d, std::size_t i) {
  const std::size_t n = d.dim();
  const std::size_t m = d.facets().size();
  // Variables (x, t). Equalities: facet i tight, x orthogonal to the common
  // kernel of all normals (removes lineality). Inequalities: other facets,
  // and t <= 1.
  std::vector<RationalVector> eq_rows;
  std::vector<Rational> eq_rhs;
  auto row = RationalVector::zero(n + 1);
  for (std::size_t k = 0; k < n; ++k) row[k] = d.facet(i).normal[k];
  eq_rows.push_back(row);
  eq_rhs.push_back(d.facet(i).offset);
  std::vector<IntVector> all;
  for (const auto& f : d.facets()) all.push_back(f.normal);
  for (const auto& kv : integer_kernel(IntMatrix::from_rows(all))) {
    auto r = RationalVector::zero(n + 1);
    for (std::size_t k = 0; k < n; ++k) r[k] = kv[k];
    eq_rows.push_back(r);
    eq_rhs.push_back(0);
  }
  std::vector<RationalVector> in_rows;  // row . (x,t) >= rhs
  std::vector<Rational> in_rhs;
  for (std::size_t j = 0; j < m; ++j) {
    if (j == i) continue;
    auto r = RationalVector::zero(n + 1);
    for (std::size_t k = 0; k < n; ++k) r[k] = d.facet(j).normal[k];
    r[n] = -1;
    in_rows.push_back(r);
    in_rhs.push_back(d.facet(j).offset);
  }
  {
    auto r = RationalVector::zero(n + 1);
    r[n] = -1;
    in_rows.push_back(r);
    in_rhs.push_back(-1);
  }
  const std::size_t need = n + 1 > eq_rows.size() ? n + 1 - eq_rows.size() : 0;
  std::optional<Rational> best;
  detail::for_each_subset(in_rows.size(), need, [&](const std::vector<std::size_t>& s) {
    std::vector<RationalVector> rows = eq_rows;
    std::vector<Rational> rhs = eq_rhs;
    for (auto k : s) {
      rows.push_back(in_rows[k]);
      rhs.push_back(in_rhs[k]);
    }
    auto mat = RationalMatrix::from_rows(rows);
    if (rank(mat) != n + 1) return;
    auto sol = solve_exact(mat, RationalVector(rhs));
    if (sol.kind == SolveResult::Kind::None) return;
    for (std::size_t k = 0; k < in_rows.size(); ++k)
      if (dot(in_rows[k], sol.x) < in_rhs[k]) return;
    if (!best || sol.x[n] > *best) best = sol.x[n];
  });
  if (!best) return Rational(-1);
  return *best;
}

/// Delzant test: nonempty, primitive normals, irredundant facets, and at
/// every minimal face the active normals are exactly r many and generate a
/// saturated sublattice. Faces of higher dimension have active sets contained
/// in those of minimal faces, so this covers every stratum.
inline ValidationReport validate_delzant(const PolyhedralDomain& d) {
  ValidationReport r;
  auto faces = minimal_faces(d);
  if (faces.empty()) throw Error(ErrorCode::EmptyDomain, "domain has no points");
  for (std::size_t i = 0; i < d.facets().size(); ++i) {
    if (!is_primitive(d.facet(i).normal)) {
      r.add("NON_PRIMITIVE_NORMAL", "facet " + std::to_string(i) + " normal " + d.facet(i).normal.str());
    }
  }
  for (std::size_t i = 0; i < d.facets().size(); ++i) {
    if (facet_margin(d, i) <= 0) r.add("REDUNDANT_FACET", "facet " + std::to_string(i) + " supports no facet");
  }
  const std::size_t rk = d.normal_rank();
  for (const auto& f : faces) {
    if (f.active.empty()) continue;
    std::string where = "stratum at " + f.point.str() + " with facets {";
    for (std::size_t k = 0; k < f.active.size(); ++k) where += (k ? "," : "") + std::to_string(f.active[k]);
    where += "}";
    if (f.active.size() != rk) {
      r.add("NOT_SIMPLE", where + " has " + std::to_string(f.active.size()) + " active facets");
      continue;
    }
    Integer idx = lattice_index(d.normals(f.active));
    if (idx != 1) r.add("NOT_SATURATED", where + " has lattice index " + idx.get_str());
  }
  return r;
}

/// Cuts the domain at its singular vertices until it is Delzant. Each cut
/// uses a lattice point u = sum l_i n_i with 0 <= l_i < 1 of the normals at
/// the vertex, so the strata it creates have smaller index. Cuts are placed
/// halfway to the nearest other vertex or point of `keep`, which stay inside.
inline PolyhedralDomain truncate_singular(const PolyhedralDomain& d, const std::vector<RationalVector>& keep = {},
                                          std::size_t max_cuts = 64) {
  const std::size_t n = d.dim();
  PolyhedralDomain cur = d;
  for (std::size_t cut = 0;; ++cut) {
    auto faces = minimal_faces(cur);
    if (faces.empty()) throw Error(ErrorCode::EmptyDomain, "domain has no points");
    const MinimalFace* bad = nullptr;
    for (const auto& f : faces) {
      if (f.active.empty() || lattice_index(cur.normals(f.active)) == 1) continue;
      if (f.active.size() != n) throw Error(ErrorCode::InvalidArgument, "singular stratum at " + f.point.str() + " is not a simple vertex");
      bad = &f;
      break;
    }
    if (!bad) return cur;
    if (cut == max_cuts) throw Error(ErrorCode::InvalidArgument, "no Delzant truncation within " + std::to_string(max_cuts) + " cuts");

    auto ns = cur.normals(bad->active);
    RationalMatrix nt = to_rational(IntMatrix::from_rows(ns)).transpose();
    std::vector<Integer> lo(n, 0), hi(n, 0);
    for (const auto& v : ns)
      for (std::size_t k = 0; k < n; ++k) (v[k] < 0 ? lo[k] : hi[k]) += v[k];
    std::optional<IntVector> best;
    Rational best_weight;
    IntVector u = IntVector::zero(n);
    std::function<void(std::size_t)> scan = [&](std::size_t k) {
      if (k == n) {
        if (u.is_zero()) return;
        auto sol = solve_exact(nt, to_rational(u));
        Rational weight = 0;
        for (const auto& l : sol.x.coords()) {
          if (l < 0 || l >= 1) return;
          weight += l;
        }
        if (!best || weight < best_weight) {
          best = u;
          best_weight = weight;
        }
        return;
      }
      for (Integer x = lo[k]; x <= hi[k]; ++x) {
        u[k] = x;
        scan(k + 1);
      }
    };
    scan(0);
    IntVector normal = primitive_part(*best);
    Rational at = dot(normal, bad->point);
    std::optional<Rational> gap;
    auto consider = [&](const RationalVector& x) {
      Rational g = dot(normal, x) - at;
      if (g > 0 && (!gap || g < *gap)) gap = g;
      return g;
    };
    for (const auto& f : faces) consider(f.point);
    for (const auto& x : keep) {
      if (consider(x) <= 0) throw Error(ErrorCode::InvalidArgument, "cannot cut at " + bad->point.str() + " without losing " + x.str());
    }
    std::vector<Facet> fs = cur.facets();
    fs.push_back({normal, at + (gap ? *gap / 2 : Rational(1))});
    cur = PolyhedralDomain(n, fs);
  }
}

// ---------------------------------------------------------------------------
// Curve edges as point sets

/// Parameter where the ray x + t dir leaves the domain, or nullopt if it
/// stays inside for all t >= 0.
inline std::optional<Rational> ray_exit(const PolyhedralDomain& d, const RationalVector& x, const IntVector& dir) {
  std::optional<Rational> best;
  for (std::size_t i = 0; i < d.facets().size(); ++i) {
    Integer pd = dot(d.facet(i).normal, dir);
    if (pd >= 0) continue;
    Rational t = (d.facet(i).offset - dot(d.facet(i).normal, x)) / Rational(pd);
    if (!best || t < *best) best = t;
  }
  return best;
}

/// Segment or ray traced by a curve edge: start + s dir, s in [0, length].
struct EdgeTrace {
  std::size_t edge;
  RationalVector start;
  IntVector dir;                   // primitive
  std::optional<Rational> length;  // nullopt for an unbounded ray

  RationalVector at(const Rational& s) const { return start + to_rational(dir) * s; }
};

inline Rational param_along(const RationalVector& delta, const IntVector& dir) {
  for (std::size_t i = 0; i < dir.dim(); ++i)
    if (dir[i] != 0) return delta[i] / Rational(dir[i]);
  return 0;
}

/// Traces of all curve edges, leaves clipped at the domain boundary when a
/// domain is given.
inline std::vector<EdgeTrace> edge_traces(const TropicalCurve& c, const PolyhedralDomain* d) {
  std::vector<EdgeTrace> out;
  for (std::size_t e = 0; e < c.edges().size(); ++e) {
    const auto& edge = c.edge(e);
    EdgeTrace t{e, c.vertex(edge.tail).pos, edge.dir, std::nullopt};
    if (edge.head) {
      t.length = param_along(c.vertex(*edge.head).pos - t.start, edge.dir);
    } else if (d) {
      t.length = ray_exit(*d, t.start, edge.dir);
    }
    out.push_back(std::move(t));
  }
  return out;
}

struct Crossing {
  std::size_t edge_a;
  std::size_t edge_b;
  RationalVector point;
};

struct CrossingScan {
  std::vector<Crossing> crossings;
  std::vector<std::pair<std::size_t, std::size_t>> overlaps;  // collinear overlaps (infinite locus)
};

/// Intersections of distinct edge images, excluding meetings at a shared
/// vertex. Crossings through a marker point are reported once.
inline CrossingScan scan_crossings(const TropicalCurve& c, const PolyhedralDomain* d) {
  CrossingScan scan;
  auto traces = edge_traces(c, d);
  auto sk = build_skeleton(c);
  std::vector<std::size_t> skel_of(c.edges().size(), 0);
  for (std::size_t s = 0; s < sk.edges.size(); ++s)
    for (auto e : sk.edges[s].chain) skel_of[e] = s;
  auto in_range = [](const EdgeTrace& t, const Rational& s) { return s >= 0 && (!t.length || s <= *t.length); };
  auto shared_vertex_at = [&](std::size_t a, std::size_t b, const RationalVector& p) {
    const auto& ea = c.edge(a);
    const auto& eb = c.edge(b);
    std::vector<std::size_t> va{ea.tail}, vb{eb.tail};
    if (ea.head) va.push_back(*ea.head);
    if (eb.head) vb.push_back(*eb.head);
    for (auto x : va)
      for (auto y : vb)
        if (x == y && c.vertex(x).pos == p) return true;
    return false;
  };
  std::set<std::tuple<std::size_t, std::size_t, RationalVector>> seen;
  auto record = [&](std::size_t a, std::size_t b, const RationalVector& p) {
    if (shared_vertex_at(a, b, p)) return;
    auto sa = std::min(skel_of[a], skel_of[b]);
    auto sb = std::max(skel_of[a], skel_of[b]);
    if (sa == sb) return;
    if (!seen.insert({sa, sb, p}).second) return;
    scan.crossings.push_back({a, b, p});
  };
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (std::size_t j = i + 1; j < traces.size(); ++j) {
      const auto& A = traces[i];
      const auto& B = traces[j];
      const std::size_t n = c.dim();
      // s A.dir - t B.dir == B.start - A.start
      RationalMatrix m(n, 2);
      for (std::size_t k = 0; k < n; ++k) {
        m(k, 0) = A.dir[k];
        m(k, 1) = -B.dir[k];
      }
      auto sol = solve_exact(m, B.start - A.start);
      if (sol.kind == SolveResult::Kind::None) continue;
      if (sol.kind == SolveResult::Kind::Unique) {
        if (in_range(A, sol.x[0]) && in_range(B, sol.x[1])) record(A.edge, B.edge, A.at(sol.x[0]));
        continue;
      }
      // Collinear: B's parameter interval mapped into A's parameter.
      Rational b0 = param_along(B.start - A.start, A.dir);
      Rational sign = B.dir == A.dir ? 1 : -1;
      std::optional<Rational> lo = Rational(0), hi = A.length;
      std::optional<Rational> blo, bhi;
      if (sign > 0) {
        blo = b0;
        if (B.length) bhi = b0 + *B.length;
      } else {
        bhi = b0;
        if (B.length) blo = b0 - *B.length;
      }
      // intersect [lo,hi] with [blo,bhi]; nullopt bounds are infinite
      std::optional<Rational> L = lo, H = hi;
      if (blo && (!L || *blo > *L)) L = blo;
      if (bhi && (!H || *bhi < *H)) H = bhi;
      if (L && H && *L > *H) continue;
      if (L && H && *L == *H) {
        record(A.edge, B.edge, A.at(*L));
        continue;
      }
      if (skel_of[A.edge] != skel_of[B.edge]) scan.overlaps.push_back({A.edge, B.edge});
    }
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Boundary points

enum class BoundaryKind { Interior, Momentum2, Bissectrice, Other };

inline std::string boundary_kind_name(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::Interior: return "INTERIOR";
    case BoundaryKind::Momentum2: return "MOMENTUM2";
    case BoundaryKind::Bissectrice: return "BISSECTRICE";
    case BoundaryKind::Other: return "OTHER";
  }
  return "OTHER";
}

struct BoundaryPointInfo {
  RationalVector point;
  std::optional<std::size_t> leaf;  // curve leaf ending here
  std::vector<std::size_t> active_facets;
  std::size_t codim = 0;
  std::vector<std::pair<std::size_t, Integer>> momenta;  // facet -> |p . dh(e)|
  BoundaryKind kind = BoundaryKind::Other;
  std::string diagnostic;
};

/// Classifies a point where an edge with weighted direction `dh` meets the
/// boundary.
inline BoundaryPointInfo classify_boundary_point(const PolyhedralDomain& d, const RationalVector& point,
                                                 const IntVector& dh, const Integer& weight) {
  BoundaryPointInfo info;
  info.point = point;
  if (!d.contains(point)) {
    info.kind = BoundaryKind::Other;
    info.diagnostic = "point lies outside the domain";
    return info;
  }
  info.active_facets = d.active_facets(point);
  if (info.active_facets.empty()) {
    info.kind = BoundaryKind::Interior;
    return info;
  }
  info.codim = rank(d.normals(info.active_facets));
  for (auto f : info.active_facets) info.momenta.push_back({f, abs(dot(d.facet(f).normal, dh))});
  if (info.codim == 1 && info.active_facets.size() == 1) {
    if (info.momenta[0].second == 2 && weight == 1) {
      info.kind = BoundaryKind::Momentum2;
    } else {
      info.diagnostic = "codimension 1 with momentum " + info.momenta[0].second.get_str();
    }
    return info;
  }
  if (info.codim == 2 && info.active_facets.size() == 2) {
    bool ones = info.momenta[0].second == 1 && info.momenta[1].second == 1;
    if (!ones) {
      info.diagnostic = "codimension 2 with momenta " + info.momenta[0].second.get_str() + "," +
                        info.momenta[1].second.get_str();
      return info;
    }
    if (d.dim() == 3) {
      IntVector z = primitive_part(cross(d.facet(info.active_facets[0]).normal, d.facet(info.active_facets[1]).normal));
      if (!is_primitive(cross(dh, z))) {
        info.diagnostic = "no corner basis for edge direction " + z.str();
        return info;
      }
    }
    info.kind = BoundaryKind::Bissectrice;
    return info;
  }
  info.diagnostic = "stratum of codimension " + std::to_string(info.codim);
  return info;
}

/// Boundary points of a curve: ends of leaves clipped by the domain. Leaves
/// that never meet the boundary are punctures and produce no entry.
inline std::vector<BoundaryPointInfo> boundary_points(const TropicalCurve& c, const PolyhedralDomain& d) {
  std::vector<BoundaryPointInfo> out;
  for (auto e : c.leaves()) {
    const auto& leaf = c.edge(e);
    const auto& start = c.vertex(leaf.tail).pos;
    auto t = ray_exit(d, start, leaf.dir);
    if (!t) continue;
    auto info = classify_boundary_point(d, start + to_rational(leaf.dir) * *t, leaf.vec(), leaf.weight);
    info.leaf = e;
    if (*t <= 0) info.diagnostic = "leaf starts on or outside the boundary";
    out.push_back(std::move(info));
  }
  return out;
}

/// Betti number and degree with punctures counted inside the domain: kappa
/// is the number of leaves that escape to infinity without meeting the
/// boundary.
inline BettiDegree betti_and_degree(const TropicalCurve& c, const PolyhedralDomain& d) {
  auto bd = betti_and_degree(c);
  bd.kappa = 0;
  for (auto e : c.leaves())
    if (!ray_exit(d, c.vertex(c.edge(e).tail).pos, c.edge(e).dir)) ++bd.kappa;
  return bd;
}

struct EvenPrimitiveReport {
  ValidationReport report;
  std::vector<BoundaryPointInfo> boundary;

  bool ok() const { return report.ok(); }
  std::size_t count(BoundaryKind k) const {
    return static_cast<std::size_t>(
        std::count_if(boundary.begin(), boundary.end(), [&](const auto& b) { return b.kind == k; }));
  }
};

/// Even/primitive test of a curve in a domain. Relaxed mode accepts vertices
/// of higher multiplicity and weights above 1 on edges away from the boundary.
inline EvenPrimitiveReport check_even_primitive(const TropicalCurve& c, const PolyhedralDomain& d, bool relaxed = false) {
  EvenPrimitiveReport out;
  auto& r = out.report;
  r.merge(validate_curve(c));
  if (!r.ok()) return out;
  if (d.dim() != c.dim()) {
    r.add("DIMENSION_MISMATCH", "curve and domain dimensions differ");
    return out;
  }
  for (std::size_t v = 0; v < c.vertices().size(); ++v) {
    if (!d.contains(c.vertex(v).pos)) r.add("OUTSIDE_DOMAIN", "vertex '" + c.vertex(v).id + "' lies outside");
  }
  if (!r.ok()) return out;
  out.boundary = boundary_points(c, d);
  std::set<std::size_t> touching;  // edges meeting the boundary
  for (const auto& b : out.boundary) {
    touching.insert(*b.leaf);
    std::string where = "boundary point " + b.point.str();
    if (!b.diagnostic.empty() && b.kind != BoundaryKind::Other) r.add("BOUNDARY_AT_VERTEX", where + ": " + b.diagnostic);
    if (b.kind != BoundaryKind::Momentum2 && b.kind != BoundaryKind::Bissectrice) {
      r.add("BAD_BOUNDARY_POINT", where + " is " + boundary_kind_name(b.kind) +
                                      (b.diagnostic.empty() ? "" : " (" + b.diagnostic + ")"));
    }
    for (const auto& v : c.vertices())
      if (v.pos == b.point) r.add("BOUNDARY_AT_VERTEX", where + " is the vertex '" + v.id + "'");
  }
  for (std::size_t e = 0; e < c.edges().size(); ++e) {
    const auto& edge = c.edge(e);
    if (edge.weight == 1) continue;
    bool away = !touching.count(e);
    if (edge.head) {
      // a segment avoids the boundary iff both endpoints are interior
      away = d.active_facets(c.vertex(edge.tail).pos).empty() && d.active_facets(c.vertex(*edge.head).pos).empty();
    }
    if (!(relaxed && away)) r.add("WEIGHT_ABOVE_ONE", "edge " + std::to_string(e) + " has weight " + edge.weight.get_str());
  }
  for (auto v : c.proper_vertices()) {
    const auto& inc = c.incident(v);
    std::string name = "vertex '" + c.vertex(v).id + "'";
    if (inc.size() != 3) {
      r.add("NOT_TRIVALENT", name + " has valence " + std::to_string(inc.size()));
      continue;
    }
    std::vector<IntVector> vecs;
    for (const auto& i : inc) vecs.push_back(c.outward(i));
    if (rank(vecs) != 2) {
      r.add("DEGENERATE_VERTEX", name + " edges do not span a plane");
      continue;
    }
    if (!relaxed) {
      Integer m = lattice_index({vecs[0], vecs[1]});
      if (m != 1) r.add("NON_PRIMITIVE_VERTEX", name + " has multiplicity " + m.get_str());
    }
  }
  auto scan = scan_crossings(c, &d);
  for (auto [a, b] : scan.overlaps) {
    r.add("NON_FINITE_SIGMA", "edges " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
  }
  for (const auto& x : scan.crossings) {
    for (const auto& b : out.boundary)
      if (b.point == x.point) r.add("BOUNDARY_AT_CROSSING", "boundary point " + b.point.str() + " is a crossing");
    for (const auto& v : c.vertices())
      if (v.pos == x.point) r.add("VERTEX_AT_CROSSING", "vertex '" + v.id + "' lies on another edge");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Wave fronts

/// Boundary of the shrunken polygon (offsets + delta) plus segments from its
/// vertices to the corresponding corners.
inline TropicalCurve wavefront(const PolyhedralDomain& d, const Rational& delta) {
  if (d.dim() != 2) throw Error(ErrorCode::DimensionMismatch, "wave fronts need a polygon");
  if (delta <= 0) throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  if (!validate_delzant(d).ok()) throw Error(ErrorCode::InvalidArgument, "domain is not Delzant");
  if (!is_bounded(d)) throw Error(ErrorCode::InvalidArgument, "wave fronts need a bounded polygon");
  std::vector<Facet> shrunk = d.facets();
  for (auto& f : shrunk) f.offset += delta;
  PolyhedralDomain inner(2, shrunk);

  auto outer_faces = minimal_faces(d);
  std::vector<MinimalFace> inner_faces;
  try {
    inner_faces = minimal_faces(inner);
  } catch (const Error&) {
  }
  std::map<std::vector<std::size_t>, RationalVector> inner_at;
  for (const auto& f : inner_faces) inner_at[f.active] = f.point;
  bool same = inner_faces.size() == outer_faces.size();
  for (const auto& f : outer_faces) same = same && inner_at.count(f.active);
  if (same) {
    // every facet edge keeps positive length
    for (std::size_t i = 0; i < d.facets().size() && same; ++i) {
      std::vector<RationalVector> on;
      for (const auto& [act, p] : inner_at)
        if (std::find(act.begin(), act.end(), i) != act.end()) on.push_back(p);
      same = on.size() == 2 && on[0] != on[1];
    }
  }
  if (!same) throw Error(ErrorCode::DeltaTooLarge, "offset " + rational_str(delta) + " changes the polygon");

  // Cyclic order of corners: walk facet to facet.
  std::vector<const MinimalFace*> order;
  {
    std::vector<bool> used(outer_faces.size(), false);
    std::size_t cur = 0;
    std::size_t via = outer_faces[0].active[0];
    for (std::size_t step = 0; step < outer_faces.size(); ++step) {
      used[cur] = true;
      order.push_back(&outer_faces[cur]);
      const auto& act = outer_faces[cur].active;
      std::size_t next_facet = act[0] == via ? act[1] : act[0];
      for (std::size_t k = 0; k < outer_faces.size(); ++k) {
        const auto& a = outer_faces[k].active;
        if (!used[k] && std::find(a.begin(), a.end(), next_facet) != a.end()) {
          cur = k;
          break;
        }
      }
      via = next_facet;
    }
  }
  auto integral_dir = [](const RationalVector& v) {
    Integer l = 1;
    for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
    std::vector<Integer> xs;
    for (const auto& x : v) xs.push_back(Integer(x * Rational(l)));
    return primitive_part(IntVector(xs));
  };
  std::vector<CurveVertex> vs;
  std::vector<CurveEdge> es;
  const std::size_t k = order.size();
  for (std::size_t i = 0; i < k; ++i) vs.push_back({"w" + std::to_string(i), inner_at[order[i]->active]});
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = (i + 1) % k;
    es.push_back({i, j, integral_dir(vs[j].pos - vs[i].pos), 1, std::nullopt});
  }
  for (std::size_t i = 0; i < k; ++i) {
    es.push_back({i, std::nullopt, integral_dir(order[i]->point - vs[i].pos), 1, static_cast<long>(i)});
  }
  return TropicalCurve(2, std::move(vs), std::move(es));
}

// ---------------------------------------------------------------------------
// Lines and leaves

/// Leaf edge matched to each line: leaves carrying label j go to line j;
/// unlabeled curves match leaves to lines in order.
inline std::vector<std::size_t> line_incidence(const TropicalCurve& c, const LineConfiguration& lines) {
  auto leaves = c.leaves();
  if (leaves.size() != lines.size()) {
    throw Error(ErrorCode::NotBoundaryConfig,
                std::to_string(leaves.size()) + " leaves but " + std::to_string(lines.size()) + " lines");
  }
  std::vector<std::optional<std::size_t>> of_line(lines.size());
  bool labeled = std::all_of(leaves.begin(), leaves.end(), [&](auto e) { return c.edge(e).leaf_label.has_value(); });
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    std::size_t j = i;
    if (labeled) {
      long lab = *c.edge(leaves[i]).leaf_label;
      if (lab < 0 || static_cast<std::size_t>(lab) >= lines.size()) {
        throw Error(ErrorCode::NotBoundaryConfig, "leaf label " + std::to_string(lab) + " has no line");
      }
      j = static_cast<std::size_t>(lab);
    }
    if (of_line[j]) throw Error(ErrorCode::NotBoundaryConfig, "line " + std::to_string(j) + " has two leaves");
    of_line[j] = leaves[i];
  }
  std::vector<std::size_t> out;
  for (auto& x : of_line) out.push_back(*x);
  return out;
}

/// Point where line j meets its leaf ray.
inline RationalVector leaf_line_point(const TropicalCurve& c, std::size_t leaf, const Line& line) {
  const auto& e = c.edge(leaf);
  const auto& start = c.vertex(e.tail).pos;
  const std::size_t n = c.dim();
  if (line.dir.dim() != n || line.base.dim() != n) throw Error(ErrorCode::DimensionMismatch, "line dimension");
  RationalMatrix m(n, 2);
  for (std::size_t k = 0; k < n; ++k) {
    m(k, 0) = e.dir[k];
    m(k, 1) = -line.dir[k];
  }
  auto sol = solve_exact(m, line.base - start);
  if (sol.kind != SolveResult::Kind::Unique || sol.x[0] < 0) {
    throw Error(ErrorCode::NotBoundaryConfig, "line through " + line.base.str() + " misses leaf " + std::to_string(leaf));
  }
  return start + to_rational(e.dir) * sol.x[0];
}

/// True iff p is not a convex combination of the points in `others`.
inline bool is_hull_vertex(const RationalVector& p, const std::vector<RationalVector>& others) {
  const std::size_t n = p.dim();
  for (const auto& q : others)
    if (q == p) return false;
  bool inside = false;
  // Caratheodory: enough to test subsets of size <= n+1.
  for (std::size_t k = 1; k <= std::min(n + 1, others.size()) && !inside; ++k) {
    detail::for_each_subset(others.size(), k, [&](const std::vector<std::size_t>& s) {
      if (inside) return;
      // sum l_i q_i == p, sum l_i == 1
      RationalMatrix m(n + 1, k);
      auto rhs = RationalVector::zero(n + 1);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t r = 0; r < n; ++r) m(r, i) = others[s[i]][r];
        m(n, i) = 1;
      }
      for (std::size_t r = 0; r < n; ++r) rhs[r] = p[r];
      rhs[n] = 1;
      auto sol = solve_exact(m, rhs);
      if (sol.kind != SolveResult::Kind::Unique) return;  // dependent subsets are covered by smaller ones
      bool nonneg = true;
      for (const auto& x : sol.x) nonneg = nonneg && x >= 0;
      if (nonneg) inside = true;
    });
  }
  return !inside;
}

struct SuitabilityLine {
  bool cross_primitive = false;
  bool is_hull_vertex = false;
  RationalVector point;
  std::size_t leaf = 0;
};

struct SuitabilityReport {
  std::vector<SuitabilityLine> per_line;
  bool pass = false;
};

inline SuitabilityReport suitability_check(const TropicalCurve& c, const LineConfiguration& lines) {
  if (c.dim() != 3) throw Error(ErrorCode::DimensionMismatch, "suitability needs a curve in R^3");
  auto inc = line_incidence(c, lines);
  SuitabilityReport rep;
  std::vector<RationalVector> pts;
  for (std::size_t j = 0; j < lines.size(); ++j) {
    SuitabilityLine l;
    l.leaf = inc[j];
    l.point = leaf_line_point(c, inc[j], lines.lines[j]);
    l.cross_primitive = gcd_primitive(cross(c.edge(inc[j]).vec(), lines.lines[j].dir)).g == 1;
    pts.push_back(l.point);
    rep.per_line.push_back(l);
  }
  rep.pass = true;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    std::vector<RationalVector> others;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i != j) others.push_back(pts[i]);
    rep.per_line[j].is_hull_vertex = is_hull_vertex(pts[j], others);
    rep.pass = rep.pass && rep.per_line[j].is_hull_vertex && rep.per_line[j].cross_primitive;
  }
  return rep;
}

/// Integer a, b with a + b == -d and |det(a, b, z)| == 1.
inline std::pair<IntVector, IntVector> corner_basis(const IntVector& d, const IntVector& z) {
  IntVector w = cross(d, z);
  if (w.is_zero() || !is_primitive(w)) throw Error(ErrorCode::NoBasis, "cross product " + w.str() + " is not primitive");
  // a . w == 1 from the extended gcd of the coordinates of w, in index order
  auto g01 = extended_gcd(w[0], w[1]);
  auto g = extended_gcd(g01.g, w[2]);
  IntVector a{g.s * g01.s, g.s * g01.t, g.t};
  if (dot(a, w) != 1) a = -a;
  IntVector b = -d - a;
  if (a + b != -d || abs(mixed(a, b, z)) != 1) {
    throw Error(ErrorCode::InternalInconsistency, "corner basis check failed for " + d.str() + ", " + z.str());
  }
  return {a, b};
}

}  // namespace troplag
