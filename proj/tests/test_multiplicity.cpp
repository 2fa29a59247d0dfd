#include <gtest/gtest.h>

#include "support.hpp"

using namespace troplag;
using namespace troplag::testing;

namespace {

Integer det_value(const TropicalCurve& c, const LineConfiguration& lc) { return multiplicity_det(ev_matrix(c, lc)).value; }

}  // namespace

// ---------------------------------------------------------------------------
// Momenta

TEST(LeafMomentum, PoincareMomenta) {
  auto r1 = leaf_momentum({-1, 0, 0}, {0, 1, 2});
  EXPECT_EQ(r1.vector, (IntVector{0, 2, -1}));
  EXPECT_EQ(r1.n, 1);
  EXPECT_EQ(leaf_momentum({0, -1, 0}, {1, 0, 3}).vector, (IntVector{-3, 0, 1}));
  EXPECT_EQ(leaf_momentum({1, 1, 0}, {0, 1, 5}).vector, (IntVector{5, -5, 1}));
}

TEST(LeafMomentum, Factorization) {
  auto r = leaf_momentum({2, 0, 0}, {0, 3, 0});
  EXPECT_EQ(r.vector, (IntVector{0, 0, 6}));
  EXPECT_EQ(r.n, 6);
  EXPECT_EQ(r.n * r.primitive, r.vector);
  EXPECT_THROW(leaf_momentum({0, 0, 0}, {1, 0, 0}), Error);
}

TEST(Propagate, PoincareOutgoing) {
  auto r = propagate(RotationalMomentum({0, 2, -1}), RotationalMomentum({-3, 0, 1}), {1, 1, 0});
  EXPECT_EQ(r.vector, (IntVector{-6, 6, -1}));
}

TEST(Propagate, OrthogonalToOutgoingDirection) {
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    auto a = random_vec(rng, 3, -9, 9), b = random_vec(rng, 3, -9, 9), d = random_primitive(rng, 3, 6);
    auto r = propagate(RotationalMomentum(a), RotationalMomentum(b), d);
    EXPECT_EQ(dot(r.vector, d), 0);
  }
}

TEST(Pairing, Examples) {
  EXPECT_EQ(pairing_coefficient(RotationalMomentum({-6, 6, -1}), RotationalMomentum({5, -5, 1}), {1, 1, 0}), 1);
  for (long p : {1, 2, 5, 7})
    for (long q : {0, 1, 3}) {
      EXPECT_EQ(pairing_coefficient(RotationalMomentum({0, 1, 0}), RotationalMomentum({-p, -q, 0}), {0, 0, 1}), p);
    }
  EXPECT_EQ(pairing_coefficient(RotationalMomentum({1, 0, 0}), RotationalMomentum({2, 0, 0}), {0, 0, 1}), 0);
  EXPECT_THROW(pairing_coefficient(RotationalMomentum({1, 0, 0}), RotationalMomentum({0, 1, 0}), {1, 0, 0}), Error);
}

// ---------------------------------------------------------------------------
// Mixed h-product

TEST(MixedProduct, PoincareEveryRoot) {
  auto c = poincare_curve();
  auto z = z_from_lines(c, poincare_lines());
  EXPECT_EQ(mixed_h_product(c, z), 1);
  EXPECT_EQ(mixed_h_product(c, z, Root::vertex(0)), 1);
  for (auto l : c.leaves()) EXPECT_EQ(mixed_h_product(c, z, Root::leaf(l)), 1) << l;
}

TEST(MixedProduct, L12IsFour) {
  auto c = l12_curve();
  EXPECT_EQ(mixed_h_product(c, l12_z()), 4);
  for (auto l : c.leaves()) EXPECT_EQ(mixed_h_product(c, l12_z(), Root::leaf(l)), 4);
}

TEST(MixedProduct, SingleEdges) {
  EXPECT_EQ(mixed_h_product(disappearing_curve(), {{1, 0, 0}, {1, 0, 0}}), 0);
  for (auto [p, q] : std::vector<std::pair<long, long>>{{1, 0}, {2, 1}, {5, 2}, {7, 3}}) {
    auto c = lens_curve();
    EXPECT_EQ(mixed_h_product(c, z_from_lines(c, lens_lines(p, q))), p);
  }
}

TEST(MixedProduct, Preconditions) {
  auto c = poincare_curve();
  EXPECT_THROW(mixed_h_product(c, {{1, 0, 0}}), Error);
  EXPECT_THROW(mixed_h_product(c, {{1, 0, 0}, {0, 1, 0}, {0, 0, 0}}), Error);
  auto four = CurveBuilder(3)
                  .vertex("o", pt({0, 0, 0}))
                  .leaf("o", {1, 0, 0})
                  .leaf("o", {-1, 0, 0})
                  .leaf("o", {0, 1, 0})
                  .leaf("o", {0, -1, 0})
                  .build();
  try {
    mixed_h_product(four, {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 0, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotTrivalent);
  }
}

// ---------------------------------------------------------------------------
// Evaluation matrix

TEST(EvMatrix, PoincareRowsAreMomenta) {
  auto ev = ev_matrix(poincare_curve(), poincare_lines());
  ASSERT_EQ(ev.m.rows(), 3u);
  EXPECT_EQ(ev.m.row(0), (IntVector{0, 2, -1}));
  EXPECT_EQ(ev.m.row(1), (IntVector{-3, 0, 1}));
  EXPECT_EQ(ev.m.row(2), (IntVector{5, -5, 1}));
  EXPECT_EQ(multiplicity_det(ev).value, 1);
  auto sol = solve_exact(to_rational(ev.m), RationalVector::zero(3));
  EXPECT_EQ(sol.kind, SolveResult::Kind::Unique);
  EXPECT_EQ(abs(*sol.det), 1);
}

TEST(EvMatrix, L12) {
  auto c = l12_curve();
  LineConfiguration lc;
  auto z = l12_z();
  for (std::size_t j = 0; j < 3; ++j) lc.lines.push_back({c.vertex(0).pos + to_rational(c.edge(j).dir), z[j]});
  EXPECT_EQ(multiplicity_det(ev_matrix(c, lc)).value, 4);
}

TEST(EvMatrix, SingleEdges) {
  for (auto [p, q] : std::vector<std::pair<long, long>>{{1, 0}, {2, 1}, {5, 2}, {7, 3}}) {
    EXPECT_EQ(det_value(lens_curve(), lens_lines(p, q)), p);
  }
  EXPECT_EQ(det_value(disappearing_curve(), disappearing_lines()), 0);
}

TEST(EvMatrix, RepeatedRowsGiveZero) {
  EvaluationMatrix ev;
  ev.m = IntMatrix::from_rows({{1, 2, 3}, {1, 2, 3}, {0, 0, 1}});
  EXPECT_EQ(multiplicity_det(ev).value, 0);
}

TEST(EvMatrix, ColumnsFollowThePath) {
  // caterpillar: leaves 0,1 on v5, leaf 2 on v6, leaves 3,4 on v7
  std::vector<IntVector> deg{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}, {1, 2, 0}, {0, -1, 1}};
  std::optional<TropicalCurve> c;
  for (const auto& t : all_trivalent_trees(5)) {
    c = internal_directions_from_leaves(t, deg);
    if (c && c->bounded_edges().size() == 2) break;
  }
  ASSERT_TRUE(c);
  std::mt19937 rng(5);
  auto z = random_zs(rng, 5);
  auto lc = lines_on_leaves(*c, z);
  auto ev = ev_matrix(*c, lc);
  ASSERT_EQ(ev.m.rows(), 5u);
  ASSERT_EQ(ev.columns.size(), 5u);
  for (std::size_t j = 0; j < 5; ++j) {
    IntVector rho = cross(deg[j], z[j]);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(ev.m(j, k), rho[k]);
  }
  // leaves at the reference vertex have no length entries
  for (std::size_t j = 0; j < 5; ++j) {
    std::size_t tail = c->edge(ev.row_leaf[j]).tail;
    if (c->vertex(tail).id == ev.reference_vertex) {
      EXPECT_EQ(ev.m(j, 3), 0);
      EXPECT_EQ(ev.m(j, 4), 0);
    }
  }
}

TEST(EvMatrix, RejectsCycles) {
  auto sq = CurveBuilder(3)
                .vertex("a", pt({0, 0, 0}))
                .vertex("b", pt({1, 0, 0}))
                .vertex("c", pt({1, 1, 0}))
                .vertex("d", pt({0, 1, 0}))
                .edge("a", "b", {1, 0, 0})
                .edge("b", "c", {0, 1, 0})
                .edge("d", "c", {1, 0, 0})
                .edge("a", "d", {0, 1, 0})
                .leaf("a", {-1, -1, 0})
                .leaf("b", {1, -1, 0})
                .leaf("c", {1, 1, 0})
                .leaf("d", {-1, 1, 0})
                .build();
  try {
    ev_matrix(sq, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TreeOnly);
  }
}

// ---------------------------------------------------------------------------
// Properties over random trees

TEST(Oracle, RecursiveProductMatchesDeterminant) {
  std::mt19937 rng(2024);
  int compared = 0, nonzero = 0;
  for (int i = 0; i < 300; ++i) {
    std::size_t kappa = 3 + i % 4;
    auto c = random_tree(rng, kappa, 3, 5);
    auto z = random_zs(rng, kappa);
    auto lc = lines_on_leaves(c, z);
    Integer det = det_value(c, lc);
    Integer rec = mixed_h_product(c, z_from_lines(c, lc));
    EXPECT_EQ(rec, det) << "kappa " << kappa << " trial " << i;
    ++compared;
    if (det != 0) ++nonzero;
  }
  EXPECT_GE(compared, 200);
  EXPECT_GE(nonzero, 150);
}

TEST(Oracle, RootIndependence) {
  std::mt19937 rng(77);
  for (int i = 0; i < 120; ++i) {
    std::size_t kappa = 3 + i % 4;
    auto c = random_tree(rng, kappa, 3, 5);
    auto z = z_from_lines(c, lines_on_leaves(c, random_zs(rng, kappa)));
    Integer ref = mixed_h_product(c, z);
    for (auto v : c.proper_vertices()) EXPECT_EQ(mixed_h_product(c, z, Root::vertex(v)), ref);
    for (auto l : c.leaves()) EXPECT_EQ(mixed_h_product(c, z, Root::leaf(l)), ref);
  }
}

TEST(Oracle, SignInvariance) {
  std::mt19937 rng(99);
  for (int i = 0; i < 60; ++i) {
    std::size_t kappa = 3 + i % 3;
    auto c = random_tree(rng, kappa, 3, 4);
    auto zs = random_zs(rng, kappa);
    auto lc = lines_on_leaves(c, zs);
    Integer ref = det_value(c, lc);
    for (std::size_t j = 0; j < kappa; ++j) {
      auto flipped = lc;
      flipped.lines[j].dir = -flipped.lines[j].dir;
      EXPECT_EQ(det_value(c, flipped), ref);
      EXPECT_EQ(mixed_h_product(c, z_from_lines(c, flipped)), ref);
      for (auto l : c.leaves()) EXPECT_EQ(mixed_h_product(c, z_from_lines(c, flipped), Root::leaf(l)), ref);
    }
  }
}

TEST(Oracle, DeterminantIgnoresBasePointsAndReference) {
  std::mt19937 rng(3);
  for (int i = 0; i < 40; ++i) {
    auto c = random_tree(rng, 5, 3, 4);
    auto lc = lines_on_leaves(c, random_zs(rng, 5));
    Integer ref = det_value(c, lc);
    auto moved = lc;
    for (auto& l : moved.lines) l.base = l.base + to_rational(random_vec(rng, 3, -3, 3));
    EXPECT_EQ(det_value(c, moved), ref);
    // rotate vertex order so another vertex becomes the reference
    std::vector<CurveVertex> vs = c.vertices();
    std::vector<CurveEdge> es = c.edges();
    std::size_t n = vs.size();
    std::rotate(vs.begin(), vs.begin() + 1, vs.end());
    for (auto& e : es) {
      e.tail = (e.tail + n - 1) % n;
      if (e.head) e.head = (*e.head + n - 1) % n;
    }
    TropicalCurve rotated(3, vs, es);
    EXPECT_EQ(det_value(rotated, lc), ref);
  }
}

TEST(Oracle, PairingNeverInconsistentOnPropagatedData) {
  std::mt19937 rng(8);
  for (int i = 0; i < 100; ++i) {
    auto c = random_tree(rng, 3 + i % 4, 3, 5);
    auto z = z_from_lines(c, lines_on_leaves(c, random_zs(rng, c.leaves().size())));
    for (auto l : c.leaves()) EXPECT_NO_THROW(mixed_h_product(c, z, Root::leaf(l)));
  }
}

// ---------------------------------------------------------------------------
// Splitting identity

TEST(Splitting, RandomFourLeafTrees) {
  std::mt19937 rng(41);
  int checked = 0;
  for (int i = 0; i < 80; ++i) {
    auto c = random_tree(rng, 4, 3, 4);
    auto lc = lines_on_leaves(c, random_zs(rng, 4));
    auto b = c.bounded_edges();
    ASSERT_EQ(b.size(), 1u);
    try {
      auto s = splitting_check(c, b[0], lc);
      EXPECT_TRUE(s.holds) << s.lhs << " vs " << rational_str(s.rhs);
      ++checked;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::SplitDegenerate);
    }
  }
  EXPECT_GE(checked, 60);
}

TEST(Splitting, CaterpillarBothEdges) {
  std::mt19937 rng(42);
  for (int i = 0; i < 30; ++i) {
    auto c = random_tree(rng, 5, 3, 4);
    auto lc = lines_on_leaves(c, random_zs(rng, 5));
    for (auto e : c.bounded_edges()) {
      try {
        EXPECT_TRUE(splitting_check(c, e, lc).holds);
      } catch (const Error& err) {
        EXPECT_EQ(err.code(), ErrorCode::SplitDegenerate);
      }
    }
  }
}

TEST(Splitting, WeightTwoEdge) {
  std::vector<IntVector> deg{{1, 0, 1}, {1, 2, -1}, {-1, 0, 3}, {-1, -2, -3}};
  std::optional<TropicalCurve> c;
  for (const auto& t : all_trivalent_trees(4)) {
    auto cand = internal_directions_from_leaves(t, deg);
    if (cand && cand->edge(cand->bounded_edges()[0]).weight == 2) c = cand;
  }
  ASSERT_TRUE(c);
  std::mt19937 rng(4);
  int nonzero = 0;
  for (int i = 0; i < 20; ++i) {
    auto lc = lines_on_leaves(*c, random_zs(rng, 4));
    auto s = splitting_check(*c, c->bounded_edges()[0], lc);
    EXPECT_EQ(s.weight, 2);
    EXPECT_TRUE(s.holds);
    EXPECT_EQ(s.rhs.get_den(), 1);
    if (s.lhs != 0) ++nonzero;
  }
  EXPECT_GT(nonzero, 0);
}

TEST(Splitting, RejectsLeaf) {
  auto c = poincare_curve();
  EXPECT_THROW(splitting_check(c, 0, poincare_lines()), Error);
}

// ---------------------------------------------------------------------------
// Enumeration

TEST(Enumerate, PoincareProblem) {
  std::vector<IntVector> deg{{-1, 0, 0}, {0, -1, 0}, {1, 1, 0}};
  auto res = enumerate_count(deg, poincare_lines(), {0, 1, 2});
  EXPECT_EQ(res.total, 1);
  ASSERT_EQ(res.per_type.size(), 1u);
  EXPECT_EQ(res.per_type[0].status, "ACCEPTED");
  ASSERT_TRUE(res.per_type[0].solution);
  EXPECT_EQ(res.per_type[0].solution->vertex(0).pos, RationalVector::zero(3));
}

TEST(Enumerate, ThreeLeavesMatchHandValue) {
  std::vector<IntVector> deg{{0, 0, 1}, {1, 1, -1}, {-1, -1, 0}};
  std::vector<IntVector> z{{1, 0, 0}, {1, -1, 0}, {0, 1, -1}};
  LineConfiguration lc;
  for (std::size_t j = 0; j < 3; ++j) lc.lines.push_back({to_rational(deg[j]), z[j]});
  auto res = enumerate_count(deg, lc, {0, 1, 2});
  Integer hand = abs(mixed(cross(deg[0], z[0]), cross(deg[1], z[1]), cross(deg[2], z[2])));
  EXPECT_NE(hand, 0);
  EXPECT_EQ(res.total, hand);
  // lines behind the vertex are not met by the rays
  LineConfiguration behind;
  for (std::size_t j = 0; j < 3; ++j) behind.lines.push_back({-to_rational(deg[j]), z[j]});
  EXPECT_EQ(enumerate_count(deg, behind, {0, 1, 2}).total, 0);
}

TEST(Enumerate, LineProblem) {
  auto lc = lens_lines(5, 2);
  auto res = enumerate_count({{0, 0, -1}, {0, 0, 1}}, lc, {0, 1});
  EXPECT_EQ(res.total, 5);
  try {
    enumerate_count({{-1, 1, 0}, {1, -1, 0}}, disappearing_lines(), {0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonGenericConfig);
  }
}

TEST(Enumerate, FourLeafTotalIsStable) {
  std::vector<IntVector> deg{{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};
  std::mt19937 rng(17);
  for (int round = 0; round < 5; ++round) {
    auto z = random_zs(rng, 4);
    std::vector<Integer> totals;
    for (int cfg = 0; cfg < 2; ++cfg) {
      LineConfiguration lc;
      for (std::size_t j = 0; j < 4; ++j) {
        lc.lines.push_back({to_rational(Integer(1000) * deg[j] + random_vec(rng, 3, -3, 3)), z[j]});
      }
      try {
        auto res = enumerate_count(deg, lc, {0, 1, 2, 3});
        EXPECT_EQ(res.per_type.size(), 3u);
        Integer sum = 0;
        for (const auto& t : res.per_type)
          if (t.status == "ACCEPTED") sum += t.multiplicity;
        EXPECT_EQ(sum, res.total);
        totals.push_back(res.total);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonGenericConfig);
      }
    }
    if (totals.size() == 2) {
      EXPECT_EQ(totals[0], totals[1]) << "round " << round;
    }
  }
}

TEST(Enumerate, SpatialFourLeafTotalIsStable) {
  std::vector<IntVector> deg{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, -1}};
  std::mt19937 rng(23);
  int rounds = 0;
  for (int round = 0; round < 6; ++round) {
    auto z = random_zs(rng, 4);
    std::vector<Integer> totals;
    for (int cfg = 0; cfg < 2; ++cfg) {
      LineConfiguration lc;
      for (std::size_t j = 0; j < 4; ++j) {
        lc.lines.push_back({to_rational(Integer(1000) * deg[j] + random_vec(rng, 3, -3, 3)), z[j]});
      }
      try {
        totals.push_back(enumerate_count(deg, lc, {0, 1, 2, 3}).total);
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonGenericConfig);
      }
    }
    if (totals.size() == 2) {
      EXPECT_EQ(totals[0], totals[1]) << "round " << round;
      ++rounds;
    }
  }
  EXPECT_GE(rounds, 3);
}

TEST(Enumerate, RelabelingEqualEntries) {
  std::vector<IntVector> deg{{1, 0, 0}, {1, 0, 0}, {-1, -1, 0}, {-1, 1, 0}};
  std::mt19937 rng(31);
  auto z = random_zs(rng, 4);
  LineConfiguration lc;
  for (std::size_t j = 0; j < 4; ++j) lc.lines.push_back({to_rational(Integer(40) * deg[j] + random_vec(rng, 3, -4, 4)), z[j]});
  auto a = enumerate_count(deg, lc, {0, 1, 2, 3});
  auto b = enumerate_count(deg, lc, {1, 0, 2, 3});
  EXPECT_EQ(a.total, b.total);
}

TEST(Enumerate, Preconditions) {
  std::vector<IntVector> deg(9, IntVector{1, 0, 0});
  LineConfiguration lc;
  lc.lines.assign(9, {pt({0, 0, 0}), {0, 1, 0}});
  std::vector<std::size_t> inc(9);
  std::iota(inc.begin(), inc.end(), 0);
  try {
    enumerate_count(deg, lc, inc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::KappaCap);
  }
  EXPECT_THROW(enumerate_count({{1, 0, 0}, {-1, 0, 0}}, lens_lines(1, 0), {0, 0}), Error);
}

TEST(SplitLines, DualAndCrossPreimage) {
  std::mt19937 rng(6);
  for (int i = 0; i < 100; ++i) {
    auto v = random_primitive(rng, 3, 9);
    EXPECT_EQ(dot(v, dual_vector(v)), 1);
    auto u = random_primitive(rng, 3, 5);
    auto r = cross(u, random_vec(rng, 3, -6, 6));
    if (r.is_zero()) continue;
    EXPECT_EQ(cross(u, cross_preimage(u, r)), r);
  }
  EXPECT_THROW(dual_vector({2, 4, 0}), Error);
  EXPECT_THROW(cross_preimage({1, 0, 0}, {1, 0, 0}), Error);
}
