#pragma once

// Small builders shared by the test binaries.

#include <random>
#include <string>
#include <vector>

#include "troplag/troplag.hpp"

namespace troplag::testing {

inline RationalVector pt(std::initializer_list<Rational> xs) { return RationalVector(std::vector<Rational>(xs)); }

/// Builds a curve from (id, position) pairs and edges given by vertex ids.
class CurveBuilder {
 public:
  explicit CurveBuilder(std::size_t dim) : dim_(dim) {}

  CurveBuilder& vertex(const std::string& id, RationalVector pos) {
    vertices_.push_back({id, std::move(pos)});
    return *this;
  }
  CurveBuilder& edge(const std::string& tail, const std::string& head, IntVector dir, long weight = 1) {
    edges_.push_back({index(tail), index(head), std::move(dir), weight, std::nullopt});
    return *this;
  }
  CurveBuilder& leaf(const std::string& tail, IntVector dir, std::optional<long> label = std::nullopt,
                     long weight = 1) {
    edges_.push_back({index(tail), std::nullopt, std::move(dir), weight, label});
    return *this;
  }
  TropicalCurve build() const { return TropicalCurve(dim_, vertices_, edges_); }

 private:
  std::size_t index(const std::string& id) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (vertices_[i].id == id) return i;
    throw std::runtime_error("unknown vertex " + id);
  }
  std::size_t dim_;
  std::vector<CurveVertex> vertices_;
  std::vector<CurveEdge> edges_;
};

inline IntVector random_vec(std::mt19937& rng, std::size_t dim, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  std::vector<Integer> xs;
  for (std::size_t i = 0; i < dim; ++i) xs.emplace_back(dist(rng));
  return IntVector(xs);
}

inline IntVector random_primitive(std::mt19937& rng, std::size_t dim, int bound) {
  while (true) {
    auto v = random_vec(rng, dim, -bound, bound);
    if (!v.is_zero()) return primitive_part(v);
  }
}

/// Random balanced degree of size kappa: kappa-1 random vectors plus the
/// negated sum, retried until every entry is nonzero.
inline std::vector<IntVector> random_degree(std::mt19937& rng, std::size_t kappa, std::size_t dim, int bound) {
  while (true) {
    std::vector<IntVector> deg;
    auto sum = IntVector::zero(dim);
    for (std::size_t i = 0; i + 1 < kappa; ++i) {
      deg.push_back(random_vec(rng, dim, -bound, bound));
      sum += deg.back();
    }
    deg.push_back(-sum);
    bool ok = true;
    for (const auto& d : deg) ok = ok && !d.is_zero();
    if (ok) return deg;
  }
}

/// Random balanced trivalent tree: random topology, random degree, with
/// degenerate assignments rejected.
inline TropicalCurve random_tree(std::mt19937& rng, std::size_t kappa, std::size_t dim, int bound) {
  while (true) {
    auto trees = all_trivalent_trees(kappa);
    std::uniform_int_distribution<std::size_t> pick(0, trees.size() - 1);
    auto deg = random_degree(rng, kappa, dim, bound);
    auto c = internal_directions_from_leaves(trees[pick(rng)], deg);
    if (c) return *c;
  }
}

/// One line per leaf label, through the point one unit out along the leaf.
inline LineConfiguration lines_on_leaves(const TropicalCurve& c, const std::vector<IntVector>& z_by_label) {
  LineConfiguration lc;
  lc.lines.resize(z_by_label.size());
  for (auto l : c.leaves()) {
    const auto& e = c.edge(l);
    auto j = static_cast<std::size_t>(*e.leaf_label);
    lc.lines[j] = {c.vertex(e.tail).pos + to_rational(e.dir), z_by_label[j]};
  }
  return lc;
}

inline std::vector<IntVector> random_zs(std::mt19937& rng, std::size_t k) {
  std::vector<IntVector> z;
  for (std::size_t i = 0; i < k; ++i) z.push_back(random_primitive(rng, 3, 4));
  return z;
}

inline TropicalCurve planar_tripod(const IntVector& u1, const IntVector& u2) {
  IntVector u3 = -(u1 + u2);
  CurveBuilder b(2);
  b.vertex("v", pt({0, 0}));
  for (const auto& u : {u1, u2, u3}) {
    auto pd = gcd_primitive(u);
    IntVector dir = primitive_part(u);
    b.leaf("v", dir, std::nullopt, pd.g.get_si());
  }
  return b.build();
}

// strictly inside the triangle a, b, c
inline Integer brute_interior(const IntVector& a, const IntVector& b, const IntVector& c) {
  auto orient = [](const IntVector& p, const IntVector& q, const IntVector& r) { return det2(q - p, r - p); };
  Integer lo_x = std::min({a[0], b[0], c[0]}), hi_x = std::max({a[0], b[0], c[0]});
  Integer lo_y = std::min({a[1], b[1], c[1]}), hi_y = std::max({a[1], b[1], c[1]});
  Integer count = 0;
  for (Integer x = lo_x; x <= hi_x; ++x)
    for (Integer y = lo_y; y <= hi_y; ++y) {
      IntVector p{x, y};
      Integer s1 = orient(a, b, p), s2 = orient(b, c, p), s3 = orient(c, a, p);
      if ((s1 > 0 && s2 > 0 && s3 > 0) || (s1 < 0 && s2 < 0 && s3 < 0)) ++count;
    }
  return count;
}

inline IntVector rot(const IntVector& u) { return IntVector{-u[1], u[0]}; }

inline LeafDatum datum(const TropicalCurve& c, std::size_t leaf, const IntVector& z) {
  const auto& e = c.edge(leaf);
  return {leaf, c.vertex(e.tail).pos + to_rational(e.dir), e.vec(), z, leaf_momentum(e.vec(), z)};
}

/// Random trees with weight-1 leaves and momenta primitive at every leaf.
template <class F>
void for_random_h1_data(unsigned seed, int count, F&& f) {
  std::mt19937 rng(seed);
  for (int i = 0; i < count; ++i) {
    std::size_t kappa = 3 + i % 4;
    auto c = random_tree(rng, kappa, 3, 4);
    if (detail::has_flat_vertex(c)) continue;
    std::vector<LeafDatum> data;
    for (auto l : c.leaves()) {
      if (c.edge(l).weight != 1) break;
      for (int tries = 0; tries < 100; ++tries) {
        auto z = random_primitive(rng, 3, 4);
        if (is_primitive(cross(c.edge(l).vec(), z))) {
          data.push_back(datum(c, l, z));
          break;
        }
      }
    }
    if (data.size() != kappa) continue;
    Integer mv = 1;
    auto sk = build_skeleton(c);
    for (auto v : sk.nodes) mv *= vertex_multiplicity(c, v);
    f(c, data, mv);
  }
}

inline std::vector<IntVector> zs(const std::vector<LeafDatum>& data) {
  std::vector<IntVector> z;
  for (const auto& x : data) z.push_back(x.z);
  return z;
}

// Worked examples built in code. The JSON corpus under fixtures/ carries the
// same data for the CLI and the acceptance driver.

inline PolyhedralDomain triangle() { return PolyhedralDomain::simplex(2); }
inline PolyhedralDomain quadrant() { return PolyhedralDomain::orthant(2); }

inline TropicalCurve rp2_curve() {
  Rational q(1, 4);
  return CurveBuilder(2).vertex("m", pt({q, q})).leaf("m", {1, 1}).leaf("m", {-1, -1}).build();
}

inline TropicalCurve c3_curve() {
  return CurveBuilder(2)
      .vertex("v", pt({2, 2}))
      .leaf("v", {-1, -1})
      .leaf("v", {-2, 3})
      .leaf("v", {3, -2})
      .build();
}

inline TropicalCurve c1_curve() {
  return CurveBuilder(2)
      .vertex("a", pt({2, 2}))
      .vertex("b", pt({3, 3}))
      .leaf("a", {-2, 1})
      .leaf("a", {1, -2})
      .edge("a", "b", {1, 1})
      .leaf("b", {-2, 3})
      .leaf("b", {3, -2})
      .build();
}

inline TropicalCurve l12_curve() {
  Rational q(1, 4);
  return CurveBuilder(3)
      .vertex("p", pt({q, q, q}))
      .leaf("p", {0, -1, -1}, 0)
      .leaf("p", {1, 1, -1}, 1)
      .leaf("p", {-1, 0, 2}, 2)
      .build();
}
inline std::vector<IntVector> l12_z() { return {{1, 0, 0}, {1, -1, 0}, {0, 1, -1}}; }

inline TropicalCurve poincare_curve() {
  return CurveBuilder(3)
      .vertex("o", pt({0, 0, 0}))
      .leaf("o", {-1, 0, 0}, 0)
      .leaf("o", {0, -1, 0}, 1)
      .leaf("o", {1, 1, 0}, 2)
      .build();
}
inline LineConfiguration poincare_lines() {
  return {{{pt({-1, 0, 0}), {0, 1, 2}}, {pt({0, -1, 0}), {1, 0, 3}}, {pt({1, 1, 0}), {0, 1, 5}}}};
}

/// Edge from (0,0,0) to (0,0,1) held by a marker point.
inline TropicalCurve lens_curve() {
  return CurveBuilder(3)
      .vertex("m", pt({0, 0, Rational(1, 2)}))
      .leaf("m", {0, 0, -1}, 0)
      .leaf("m", {0, 0, 1}, 1)
      .build();
}
inline LineConfiguration lens_lines(long p, long q) {
  return {{{pt({0, 0, 0}), {1, 0, 0}}, {pt({0, 0, 1}), primitive_part(IntVector{-q, p, 0})}}};
}

/// Facets through the two ends of the lens edge, making both ends
/// bissectrice points with boundary directions (1,0,0) and (-q,p,0). Singular
/// away from the edge.
inline PolyhedralDomain lens_wedge(long p, long q) {
  return PolyhedralDomain(3, {{{0, 0, 1}, 0}, {{0, 1, 1}, 0}, {{0, 0, -1}, -1}, {{p, q, -1}, -1}});
}
/// The wedge cut down to a Delzant domain.
inline PolyhedralDomain lens_domain(long p, long q) {
  return truncate_singular(lens_wedge(p, q), {pt({0, 0, 0}), pt({0, 0, 1})});
}

inline TropicalCurve disappearing_curve() {
  return CurveBuilder(3)
      .vertex("m", pt({0, 0, 0}))
      .leaf("m", {-1, 1, 0}, 0)
      .leaf("m", {1, -1, 0}, 1)
      .build();
}
inline LineConfiguration disappearing_lines() {
  return {{{pt({-1, 1, 0}), {1, 0, 0}}, {pt({1, -1, 0}), {1, 0, 0}}}};
}

}  // namespace troplag::testing
