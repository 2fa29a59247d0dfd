#include <algorithm>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace troplag;
using namespace troplag::testing;

namespace {

bool has_issue(const ValidationReport& r, const std::string& code) {
  return std::any_of(r.issues.begin(), r.issues.end(), [&](const auto& i) { return i.code == code; });
}

PolyhedralDomain hexagon() {
  // square with two opposite corners cut: the degree 6 del Pezzo polygon
  return PolyhedralDomain(2, {{{1, 0}, 0},
                              {{0, 1}, 0},
                              {{-1, 0}, -2},
                              {{0, -1}, -2},
                              {{1, 1}, 1},
                              {{-1, -1}, -3}});
}

PolyhedralDomain prism() {
  // triangle x interval
  return PolyhedralDomain(3, {{{1, 0, 0}, 0}, {{0, 1, 0}, 0}, {{-1, -1, 0}, -1}, {{0, 0, 1}, 0}, {{0, 0, -1}, -1}});
}

// Cuts the corner at vertex v (active facets p1, p2) by the facet p1 + p2.
PolyhedralDomain blow_up(const PolyhedralDomain& d, const MinimalFace& v, const Rational& eps) {
  auto fs = d.facets();
  IntVector p = d.facet(v.active[0]).normal + d.facet(v.active[1]).normal;
  fs.push_back({p, dot(p, v.point) + eps});
  return PolyhedralDomain(d.dim(), fs);
}

// Smallest lattice length of an edge of a bounded polygon.
Rational min_edge_length(const PolyhedralDomain& d) {
  auto faces = minimal_faces(d);
  std::optional<Rational> best;
  for (std::size_t i = 0; i < faces.size(); ++i)
    for (std::size_t j = i + 1; j < faces.size(); ++j) {
      std::vector<std::size_t> common;
      std::set_intersection(faces[i].active.begin(), faces[i].active.end(), faces[j].active.begin(),
                            faces[j].active.end(), std::back_inserter(common));
      if (common.empty()) continue;
      auto delta = faces[j].point - faces[i].point;
      // lattice length: delta = L * primitive direction
      IntVector n = d.facet(common[0]).normal;
      IntVector u{-n[1], n[0]};
      Rational len = param_along(delta, u);
      if (len < 0) len = -len;
      if (!best || len < *best) best = len;
    }
  return *best;
}

}  // namespace

TEST(Delzant, StandardExamples) {
  EXPECT_TRUE(validate_delzant(triangle()).ok());
  EXPECT_TRUE(validate_delzant(quadrant()).ok());
  EXPECT_TRUE(validate_delzant(PolyhedralDomain::simplex(3)).ok());
  EXPECT_TRUE(validate_delzant(PolyhedralDomain::box({1, 1})).ok());
  EXPECT_TRUE(validate_delzant(PolyhedralDomain::box({1, 2, Rational(1, 3)})).ok());
  EXPECT_TRUE(validate_delzant(prism()).ok());
  EXPECT_TRUE(validate_delzant(hexagon()).ok());
  // lineality: a slab in the plane, and triangle x R in space
  EXPECT_TRUE(validate_delzant(PolyhedralDomain(2, {{{1, 0}, 0}, {{-1, 0}, -1}})).ok());
  EXPECT_TRUE(validate_delzant(PolyhedralDomain(3, {{{1, 0, 0}, 0}, {{0, 1, 0}, 0}, {{-1, -1, 0}, -1}})).ok());
}

TEST(Delzant, CornerOfIndexTwo) {
  PolyhedralDomain d(2, {{{1, 0}, 0}, {{1, 2}, 0}});
  auto r = validate_delzant(d);
  EXPECT_FALSE(r.ok());
  ASSERT_TRUE(has_issue(r, "NOT_SATURATED"));
  auto idx = stratum_indices(d);
  ASSERT_EQ(idx.size(), 1u);
  EXPECT_EQ(idx[0].index, 2);
  EXPECT_NE(r.issues[0].message.find("index 2"), std::string::npos);
}

TEST(Delzant, NonSimpleVertex) {
  // square pyramid apex has four facets
  PolyhedralDomain d(3, {{{1, 0, 1}, 0}, {{-1, 0, 1}, 0}, {{0, 1, 1}, 0}, {{0, -1, 1}, 0}, {{0, 0, -1}, -1}});
  EXPECT_TRUE(has_issue(validate_delzant(d), "NOT_SIMPLE"));
}

TEST(Delzant, RedundantFacet) {
  auto fs = triangle().facets();
  fs.push_back({{1, 1}, -5});
  EXPECT_TRUE(has_issue(validate_delzant(PolyhedralDomain(2, fs)), "REDUNDANT_FACET"));
  auto dup = triangle().facets();
  dup.push_back(dup[0]);
  EXPECT_TRUE(has_issue(validate_delzant(PolyhedralDomain(2, dup)), "REDUNDANT_FACET"));
}

TEST(Delzant, EmptyDomain) {
  PolyhedralDomain d(2, {{{1, 0}, 1}, {{-1, 0}, 0}});
  try {
    validate_delzant(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyDomain);
  }
}

TEST(Delzant, Boundedness) {
  EXPECT_TRUE(is_bounded(triangle()));
  EXPECT_TRUE(is_bounded(hexagon()));
  EXPECT_FALSE(is_bounded(quadrant()));
  EXPECT_FALSE(is_bounded(PolyhedralDomain(3, {{{1, 0, 0}, 0}, {{0, 1, 0}, 0}, {{-1, -1, 0}, -1}})));
}

TEST(Truncation, CornerOfIndexTwo) {
  PolyhedralDomain corner(2, {{{1, 0}, 0}, {{1, 2}, 0}});
  auto d = truncate_singular(corner);
  EXPECT_TRUE(validate_delzant(d).ok());
  EXPECT_EQ(d.facets().size(), 3u);
  EXPECT_EQ(d.facet(2).normal, (IntVector{1, 1}));
  // already Delzant domains come back unchanged
  auto s = truncate_singular(PolyhedralDomain::simplex(3));
  EXPECT_EQ(s.facets().size(), 4u);
}

TEST(Truncation, LensWedgesKeepTheEdge) {
  for (auto [p, q] : std::vector<std::pair<long, long>>{{2, 1}, {5, 2}, {7, 3}, {11, 4}}) {
    auto wedge = lens_wedge(p, q);
    EXPECT_FALSE(validate_delzant(wedge).ok());
    auto d = lens_domain(p, q);
    EXPECT_TRUE(validate_delzant(d).ok()) << p << "," << q;
    for (std::size_t i = 0; i < wedge.facets().size(); ++i) EXPECT_EQ(d.facet(i).normal, wedge.facet(i).normal);
    auto bottom = classify_boundary_point(d, pt({0, 0, 0}), {0, 0, 1}, 1);
    auto top = classify_boundary_point(d, pt({0, 0, 1}), {0, 0, -1}, 1);
    EXPECT_EQ(bottom.kind, BoundaryKind::Bissectrice);
    EXPECT_EQ(top.kind, BoundaryKind::Bissectrice);
  }
}

TEST(Truncation, RandomPlanarCones) {
  std::mt19937 rng(41);
  int done = 0;
  while (done < 50) {
    auto a = random_primitive(rng, 2, 6), b = random_primitive(rng, 2, 6);
    if (det2(a, b) == 0) continue;
    PolyhedralDomain cone(2, {{a, 0}, {b, 0}});
    auto d = truncate_singular(cone);
    EXPECT_TRUE(validate_delzant(d).ok()) << a.str() << b.str();
    ++done;
  }
}

TEST(Truncation, RefusesToCutKeptPoints) {
  PolyhedralDomain corner(2, {{{1, 0}, 0}, {{1, 2}, 0}});
  EXPECT_THROW(truncate_singular(corner, {pt({0, 0})}), Error);
}

TEST(Boundary, TriangleMomentumTwo) {
  auto b = classify_boundary_point(triangle(), pt({Rational(1, 2), Rational(1, 2)}), {1, 1}, 1);
  EXPECT_EQ(b.codim, 1u);
  ASSERT_EQ(b.momenta.size(), 1u);
  EXPECT_EQ(b.momenta[0].second, 2);
  EXPECT_EQ(b.kind, BoundaryKind::Momentum2);
}

TEST(Boundary, TriangleCornerBissectrice) {
  auto b = classify_boundary_point(triangle(), pt({0, 0}), {1, 1}, 1);
  EXPECT_EQ(b.codim, 2u);
  EXPECT_EQ(b.momenta[0].second, 1);
  EXPECT_EQ(b.momenta[1].second, 1);
  EXPECT_EQ(b.kind, BoundaryKind::Bissectrice);
}

TEST(Boundary, QuadrantC3Point) {
  auto b = classify_boundary_point(quadrant(), pt({0, 5}), {2, -3}, 1);
  EXPECT_EQ(b.codim, 1u);
  EXPECT_EQ(b.momenta[0].second, 2);
  EXPECT_EQ(b.kind, BoundaryKind::Momentum2);
}

TEST(Boundary, InteriorAndOther) {
  EXPECT_EQ(classify_boundary_point(triangle(), pt({Rational(1, 4), Rational(1, 4)}), {1, 1}, 1).kind,
            BoundaryKind::Interior);
  // momentum 1 on a single facet
  EXPECT_EQ(classify_boundary_point(quadrant(), pt({0, 3}), {1, 0}, 1).kind, BoundaryKind::Other);
  // weight 2 with momentum 2
  EXPECT_EQ(classify_boundary_point(quadrant(), pt({0, 3}), {2, 0}, 2).kind, BoundaryKind::Other);
  // corner momenta 1 and 2
  EXPECT_EQ(classify_boundary_point(quadrant(), pt({0, 0}), {1, 2}, 1).kind, BoundaryKind::Other);
  // vertex of the 3-simplex has codimension 3
  auto b = classify_boundary_point(PolyhedralDomain::simplex(3), pt({0, 0, 0}), {1, 1, 1}, 1);
  EXPECT_EQ(b.kind, BoundaryKind::Other);
  EXPECT_EQ(b.codim, 3u);
  EXPECT_FALSE(b.diagnostic.empty());
}

TEST(Boundary, MomentumInvariantUnderUnimodularMaps) {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> f(-2, 2), pick(0, 1);
  for (int it = 0; it < 60; ++it) {
    // A built from elementary moves; normals transform by the inverse transpose
    IntMatrix a = IntMatrix::identity(2), ainv = IntMatrix::identity(2);
    for (int s = 0; s < 4; ++s) {
      int i = pick(rng), k = f(rng);
      IntMatrix e = IntMatrix::identity(2), einv = IntMatrix::identity(2);
      e(i, 1 - i) = k;
      einv(i, 1 - i) = -k;
      a = e * a;
      ainv = ainv * einv;
    }
    auto at = ainv.transpose();
    auto map_point = [&](const RationalVector& x) { return to_rational(a) * x; };
    std::vector<Facet> fs;
    auto tri = triangle();
    for (const auto& fc : tri.facets()) fs.push_back({at * fc.normal, fc.offset});
    PolyhedralDomain d(2, fs);
    for (auto [x, dir] : std::vector<std::pair<RationalVector, IntVector>>{
             {pt({Rational(1, 2), Rational(1, 2)}), {1, 1}}, {pt({0, 0}), {1, 1}}, {pt({0, Rational(1, 3)}), {1, 0}}}) {
      auto before = classify_boundary_point(triangle(), x, dir, 1);
      auto after = classify_boundary_point(d, map_point(x), a * dir, 1);
      EXPECT_EQ(before.kind, after.kind);
      ASSERT_EQ(before.momenta.size(), after.momenta.size());
      for (std::size_t k = 0; k < before.momenta.size(); ++k) EXPECT_EQ(before.momenta[k], after.momenta[k]);
    }
  }
}

TEST(EvenPrimitive, RP2) {
  auto r = check_even_primitive(rp2_curve(), triangle());
  EXPECT_TRUE(r.ok()) << r.report.issues.front().message;
  EXPECT_EQ(r.count(BoundaryKind::Momentum2), 1u);
  EXPECT_EQ(r.count(BoundaryKind::Bissectrice), 1u);
  for (const auto& b : r.boundary) {
    if (b.kind == BoundaryKind::Momentum2) {
      EXPECT_EQ(b.point, pt({Rational(1, 2), Rational(1, 2)}));
      EXPECT_EQ(b.momenta[0].second, 2);
    } else {
      EXPECT_EQ(b.point, pt({0, 0}));
    }
  }
}

TEST(EvenPrimitive, L12InSimplex) {
  auto r = check_even_primitive(l12_curve(), PolyhedralDomain::simplex(3));
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.count(BoundaryKind::Bissectrice), 3u);
  // the boundary edge through each point is the matching line direction
  auto z = l12_z();
  for (const auto& b : r.boundary) {
    auto n0 = PolyhedralDomain::simplex(3).facet(b.active_facets[0]).normal;
    auto n1 = PolyhedralDomain::simplex(3).facet(b.active_facets[1]).normal;
    auto dir = primitive_part(cross(n0, n1));
    long label = *l12_curve().edge(*b.leaf).leaf_label;
    EXPECT_TRUE(dir == z[label] || dir == -z[label]);
  }
}

TEST(EvenPrimitive, C3NeedsRelaxedMode) {
  auto strict = check_even_primitive(c3_curve(), quadrant());
  EXPECT_FALSE(strict.ok());
  EXPECT_TRUE(has_issue(strict.report, "NON_PRIMITIVE_VERTEX"));
  auto relaxed = check_even_primitive(c3_curve(), quadrant(), true);
  EXPECT_TRUE(relaxed.ok());
  for (const auto& b : relaxed.boundary) {
    if (b.point == pt({0, 0})) {
      EXPECT_EQ(b.kind, BoundaryKind::Bissectrice);
    } else {
      EXPECT_TRUE(b.point == pt({0, 5}) || b.point == pt({5, 0}));
      EXPECT_EQ(b.kind, BoundaryKind::Momentum2);
    }
  }
}

TEST(EvenPrimitive, RejectsBadInputs) {
  // leaf hitting a facet with momentum 1
  auto c = CurveBuilder(2).vertex("m", pt({Rational(1, 4), Rational(1, 4)})).leaf("m", {1, 0}).leaf("m", {-1, 0}).build();
  EXPECT_TRUE(has_issue(check_even_primitive(c, triangle()).report, "BAD_BOUNDARY_POINT"));
  // vertex outside
  auto out = CurveBuilder(2).vertex("m", pt({2, 2})).leaf("m", {1, 1}).leaf("m", {-1, -1}).build();
  EXPECT_TRUE(has_issue(check_even_primitive(out, triangle()).report, "OUTSIDE_DOMAIN"));
  // weight 2 leaf touching the boundary, refused even when relaxed
  auto w = CurveBuilder(2)
               .vertex("m", pt({Rational(1, 4), Rational(1, 4)}))
               .leaf("m", {1, 1}, std::nullopt, 2)
               .leaf("m", {-1, -1}, std::nullopt, 2)
               .build();
  EXPECT_TRUE(has_issue(check_even_primitive(w, triangle(), true).report, "WEIGHT_ABOVE_ONE"));
}

TEST(EvenPrimitive, OverlappingEdgesAreNonFinite) {
  // two vertices joined by an edge: the edge and its neighbours meet only at vertices
  auto c = CurveBuilder(2)
               .vertex("a", pt({1, 1}))
               .vertex("b", pt({2, 1}))
               .edge("a", "b", {1, 0})
               .leaf("a", {-1, 1})
               .leaf("a", {0, -1})
               .leaf("b", {1, 1})
               .leaf("b", {0, -1})
               .build();
  ASSERT_TRUE(validate_curve(c).ok());
  auto scan0 = scan_crossings(c, nullptr);
  EXPECT_TRUE(scan0.crossings.empty());
  EXPECT_TRUE(scan0.overlaps.empty());
  auto d = CurveBuilder(2)
               .vertex("a", pt({0, 0}))
               .vertex("b", pt({1, 0}))
               .leaf("a", {1, 0})
               .leaf("a", {-1, 1})
               .leaf("a", {0, -1})
               .leaf("b", {-1, 0})
               .leaf("b", {1, -1})
               .leaf("b", {0, 1})
               .build();
  EXPECT_FALSE(scan_crossings(d, nullptr).overlaps.empty());
}

TEST(Wavefront, UnitSquare) {
  auto d = PolyhedralDomain::box({1, 1});
  auto c = wavefront(d, Rational(1, 4));
  EXPECT_TRUE(validate_curve(c).ok());
  auto bd = betti_and_degree(c, d);
  EXPECT_EQ(bd.b1, 1);
  EXPECT_EQ(bd.kappa, 0u);
  auto r = check_even_primitive(c, d);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.boundary.size(), 4u);
  EXPECT_EQ(r.count(BoundaryKind::Bissectrice), 4u);
  EXPECT_EQ(c.bounded_edges().size(), 4u);
  for (const auto& v : c.vertices()) {
    for (std::size_t k = 0; k < 2; ++k) EXPECT_TRUE(v.pos[k] == Rational(1, 4) || v.pos[k] == Rational(3, 4));
  }
}

TEST(Wavefront, TriangleAndHexagon) {
  auto t = wavefront(triangle(), Rational(1, 8));
  EXPECT_EQ(betti_and_degree(t).b1, 1);
  auto rt = check_even_primitive(t, triangle());
  EXPECT_TRUE(rt.ok());
  EXPECT_EQ(rt.count(BoundaryKind::Bissectrice), 3u);

  auto h = wavefront(hexagon(), Rational(1, 4));
  EXPECT_EQ(h.leaves().size(), 6u);
  auto rh = check_even_primitive(h, hexagon());
  EXPECT_TRUE(rh.ok());
  EXPECT_EQ(rh.count(BoundaryKind::Bissectrice), 6u);
}

TEST(Wavefront, DeltaTooLarge) {
  try {
    wavefront(triangle(), Rational(1, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DeltaTooLarge);
  }
  EXPECT_THROW(wavefront(triangle(), Rational(1)), Error);
}

TEST(Wavefront, RandomDelzantPolygons) {
  std::mt19937 rng(123);
  int checked = 0;
  for (int it = 0; it < 50; ++it) {
    PolyhedralDomain d = it % 2 ? triangle() : PolyhedralDomain::box({2, 3});
    std::uniform_int_distribution<int> cuts(0, 4);
    int k = cuts(rng);
    for (int s = 0; s < k; ++s) {
      auto faces = minimal_faces(d);
      std::uniform_int_distribution<std::size_t> pick(0, faces.size() - 1);
      d = blow_up(d, faces[pick(rng)], min_edge_length(d) / 3);
    }
    ASSERT_TRUE(validate_delzant(d).ok());
    Rational delta = min_edge_length(d) / 7;
    auto c = wavefront(d, delta);
    auto r = check_even_primitive(c, d);
    EXPECT_TRUE(r.ok()) << (r.ok() ? "" : r.report.issues.front().message);
    EXPECT_EQ(r.count(BoundaryKind::Momentum2), 0u);
    EXPECT_EQ(r.count(BoundaryKind::Bissectrice), minimal_faces(d).size());
    ++checked;
  }
  EXPECT_EQ(checked, 50);
}

TEST(CornerBasis, Examples) {
  for (auto [d, z] : std::vector<std::pair<IntVector, IntVector>>{{{-1, 0, 0}, {0, 1, 2}}, {{0, 0, -1}, {1, 0, 0}}}) {
    auto [a, b] = corner_basis(d, z);
    EXPECT_EQ(a + b, -d);
    EXPECT_EQ(abs(mixed(a, b, z)), 1);
  }
  // the hand pair also satisfies both identities
  IntVector a{0, 1, 1}, b{1, -1, -1};
  EXPECT_EQ(a + b, -(IntVector{-1, 0, 0}));
  EXPECT_EQ(mixed(a, b, IntVector{0, 1, 2}), -1);
  try {
    corner_basis({0, 0, 1}, {0, 0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoBasis);
  }
  EXPECT_THROW(corner_basis({2, 0, 0}, {0, 1, 0}), Error);
}

TEST(CornerBasis, AgreesWithCrossPrimitivity) {
  std::mt19937 rng(4);
  for (int it = 0; it < 400; ++it) {
    auto d = random_vec(rng, 3, -4, 4);
    if (d.is_zero()) continue;
    auto z = random_primitive(rng, 3, 4);
    bool prim = gcd_primitive(cross(d, z)).g == 1;
    bool ok = true;
    try {
      auto [a, b] = corner_basis(d, z);
      EXPECT_EQ(a + b, -d);
      EXPECT_EQ(abs(mixed(a, b, z)), 1);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NoBasis);
      ok = false;
    }
    EXPECT_EQ(ok, prim);
  }
}

TEST(Suitability, Poincare) {
  auto r = suitability_check(poincare_curve(), poincare_lines());
  EXPECT_TRUE(r.pass);
  ASSERT_EQ(r.per_line.size(), 3u);
  for (const auto& l : r.per_line) {
    EXPECT_TRUE(l.cross_primitive);
    EXPECT_TRUE(l.is_hull_vertex);
  }
}

TEST(Suitability, ParallelLineIsNotPrimitive) {
  auto c = CurveBuilder(3).vertex("m", pt({0, 0, 0})).leaf("m", {1, 0, 0}, 0).leaf("m", {-1, 0, 0}, 1).build();
  LineConfiguration lines{{{pt({2, 0, 0}), {1, 0, 0}}, {pt({-1, 0, 0}), {0, 1, 0}}}};
  // line 0 contains its leaf: the intersection is not a point
  EXPECT_THROW(suitability_check(c, lines), Error);
  LineConfiguration ok{{{pt({2, 0, 0}), {0, 0, 1}}, {pt({-1, 0, 0}), {0, 1, 0}}}};
  auto r = suitability_check(c, ok);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(gcd_primitive(cross(IntVector{1, 0, 0}, IntVector{1, 0, 0})).g, 0);
}

TEST(Suitability, CollinearPointsFailHull) {
  EXPECT_FALSE(is_hull_vertex(pt({1, 0, 0}), {pt({0, 0, 0}), pt({2, 0, 0})}));
  EXPECT_TRUE(is_hull_vertex(pt({0, 0, 0}), {pt({1, 0, 0}), pt({2, 0, 0})}));
  EXPECT_FALSE(is_hull_vertex(pt({1, 1, 0}), {pt({0, 0, 0}), pt({3, 0, 0}), pt({0, 3, 0})}));
}

TEST(Suitability, MissingLeaf) {
  LineConfiguration two{{{pt({-1, 0, 0}), {0, 1, 2}}, {pt({0, -1, 0}), {1, 0, 3}}}};
  try {
    suitability_check(poincare_curve(), two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotBoundaryConfig);
  }
}
