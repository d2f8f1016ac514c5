#include "polyforge/polytope.hpp"

#include <gtest/gtest.h>

#include "polyforge/faces.hpp"
#include "polyforge/oracle.hpp"
#include "polyforge/random_fixtures.hpp"

using namespace polyforge;

namespace {

RatVec rv(std::initializer_list<long> xs) {
  RatVec v;
  for (long x : xs) v.push_back(Rat(x));
  return v;
}

}  // namespace

TEST(PolarDual, CubeGivesCrosspolytope) {
  Polytope cube = standard_cube(3);
  VPolytope polar = polar_dual(cube.h);
  Polytope cross = standard_crosspolytope(3);
  EXPECT_TRUE(same_vertex_set(polar, cross.v));
}

TEST(PolarDual, CrosspolytopeHRepGivesCubeVertices) {
  Polytope cross = standard_crosspolytope(3);
  VPolytope polar = polar_dual(cross.h);
  EXPECT_TRUE(same_vertex_set(polar, standard_cube(3).v));
}

TEST(PolarDual, BoxInThePlane) {
  // box [-1,2] x [-1,1]: rows x<=2, -x<=1, y<=1, -y<=1, so polar vertices
  // r_i/b_i are (1/2,0), (-1,0), (0,1), (0,-1)
  HPolytope box;
  box.dim = 2;
  box.rows = {HRow{rv({1, 0}), Rat(2)}, HRow{rv({-1, 0}), Rat(1)},
              HRow{rv({0, 1}), Rat(1)}, HRow{rv({0, -1}), Rat(1)}};
  VPolytope polar = polar_dual(box);
  VPolytope expect;
  expect.dim = 2;
  expect.vertices = {{Rat(1, 2), Rat(0)}, {Rat(-1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(0), Rat(-1)}};
  EXPECT_TRUE(same_vertex_set(polar, expect));
}

TEST(PolarDual, OriginMustBeInterior) {
  HPolytope h;
  h.dim = 2;
  h.rows = {HRow{rv({1, 0}), Rat(-1)}, HRow{rv({-1, 0}), Rat(3)},
            HRow{rv({0, 1}), Rat(1)}, HRow{rv({0, -1}), Rat(1)}};
  EXPECT_THROW(polar_dual(h), InputError);
}

TEST(PolarDualV, StandardPairs) {
  // cube vertices {+-1}^3 dualize to the eight rows (+-1,+-1,+-1) . x <= 1
  Polytope cube = standard_cube(3);
  HPolytope eight = polar_dual_v(cube.v);
  EXPECT_EQ(eight.rows.size(), 8u);
  EXPECT_TRUE(same_h_polytope(eight, standard_crosspolytope(3).h));
  // crosspolytope vertices +-e_i dualize to the six cube rows
  Polytope cross = standard_crosspolytope(3);
  HPolytope six = polar_dual_v(cross.v);
  EXPECT_EQ(six.rows.size(), 6u);
  EXPECT_TRUE(same_h_polytope(six, cube.h));
}

TEST(PolarDualV, DoublePolarIsIdentityOnRandomCubes) {
  for (uint64_t seed : {3u, 7u, 19u}) {
    Polytope q = random_cube(3, seed);
    VPolytope polar = polar_dual(q.h);
    HPolytope back = polar_dual_v(polar);
    EXPECT_TRUE(same_h_polytope(back, HPolytope{3, q.h.rows})) << "seed " << seed;
    // cross-validate through the oracle
    OracleResult o = brute_force_hull(polar.vertices, 3);
    EXPECT_EQ(o.v.vertices.size(), polar.vertices.size());
  }
}

TEST(PolarDualV, ShiftedSimplexHasFourRows) {
  VPolytope simplex;
  simplex.dim = 3;
  simplex.vertices = {{Rat(-1), Rat(-1), Rat(-1)},
                      {Rat(2), Rat(0), Rat(0)},
                      {Rat(0), Rat(2), Rat(0)},
                      {Rat(0), Rat(0), Rat(2)}};
  HPolytope dual = polar_dual_v(simplex);
  EXPECT_EQ(dual.rows.size(), 4u);
  // double polar returns the simplex
  VPolytope back = polar_dual(dual);
  OracleResult o = brute_force_hull(back.vertices, 3);
  EXPECT_EQ(o.v.vertices.size(), 4u);
}

TEST(Incidence, StandardCubeCounts) {
  Polytope cube = standard_cube(3);
  EXPECT_EQ(cube.inc.n_vertices, 8u);
  EXPECT_EQ(cube.inc.n_facets, 6u);
  for (size_t v = 0; v < 8; ++v) EXPECT_EQ(cube.inc.facets_of_vertex(v).size(), 3u);
}

TEST(Incidence, CrosspolytopeCounts) {
  for (int d : {3, 4}) {
    Polytope cross = standard_crosspolytope(d);
    EXPECT_EQ(cross.inc.n_vertices, 2 * static_cast<size_t>(d));
    EXPECT_EQ(cross.inc.n_facets, size_t{1} << d);
    for (size_t v = 0; v < cross.inc.n_vertices; ++v)
      EXPECT_EQ(cross.inc.facets_of_vertex(v).size(), size_t{1} << (d - 1));
  }
}

TEST(Incidence, RandomProjectiveImageOfFourCube) {
  Polytope q = random_cube(4, 11);
  for (size_t v = 0; v < q.inc.n_vertices; ++v)
    EXPECT_EQ(q.inc.facets_of_vertex(v).size(), 4u);
  EXPECT_TRUE(oracle_agrees(q));
}

TEST(Incidence, MismatchReported) {
  Polytope cube = standard_cube(2);
  HPolytope wrong = cube.h;
  wrong.rows[0].offset = Rat(1, 2);  // vertex now violates the row
  EXPECT_THROW(incidence(cube.v, wrong), InputError);
}

TEST(FVectorOf, CubeAndCrosspolytope) {
  FVector f3 = f_vector_of(standard_cube(3));
  EXPECT_EQ(f3.entries, (std::vector<Int>{8, 12, 6}));
  FVector fx = f_vector_of(standard_crosspolytope(4));
  EXPECT_EQ(fx.entries, (std::vector<Int>{8, 24, 32, 16}));
}

TEST(FVectorOf, CubeFaceCountFormula) {
  // f_i(d-cube) = 2^{d-i} C(d,i) for d = 1..6
  for (int d = 1; d <= 6; ++d) {
    FVector f = f_vector_of(standard_cube(d));
    for (int i = 0; i < d; ++i) {
      Int expect = (Int(1) << (d - i));
      Int binom = 1;
      for (int k = 0; k < i; ++k) binom = binom * (d - k) / (k + 1);
      EXPECT_EQ(f.entries[i], expect * binom) << "d=" << d << " i=" << i;
    }
  }
}

TEST(VerifyRealization, StandardCubeFacets) {
  Polytope cube = standard_cube(3);
  std::vector<std::vector<size_t>> candidates;
  for (size_t f = 0; f < cube.inc.n_facets; ++f)
    candidates.push_back(cube.inc.vertices_of_facet(f));
  auto outcome = verify_realization(cube.v, candidates);
  ASSERT_TRUE(outcome.ok());
  EXPECT_EQ(outcome.certificate->hyperplanes_checked(), 6u);
}

TEST(VerifyRealization, MissingVertexFails) {
  Polytope cube = standard_cube(3);
  std::vector<std::vector<size_t>> candidates;
  for (size_t f = 0; f < cube.inc.n_facets; ++f)
    candidates.push_back(cube.inc.vertices_of_facet(f));
  candidates[0].pop_back();
  auto outcome = verify_realization(cube.v, candidates);
  EXPECT_FALSE(outcome.ok());
  EXPECT_FALSE(outcome.violated_check.empty());
}

TEST(CombinatorialType, CubeAndNonCubes) {
  for (int d : {2, 3, 4}) EXPECT_TRUE(is_combinatorial_cube(standard_cube(d).inc));
  // 3-simplex
  VPolytope s;
  s.dim = 3;
  s.vertices = {{Rat(-1), Rat(-1), Rat(-1)}, {Rat(2), Rat(0), Rat(0)},
                {Rat(0), Rat(2), Rat(0)}, {Rat(0), Rat(0), Rat(2)}};
  OracleResult o = brute_force_hull(s.vertices, 3);
  Polytope simplex = Polytope::from_reps(s, o.h);
  EXPECT_FALSE(is_combinatorial_cube(simplex.inc));
  EXPECT_FALSE(is_combinatorial_crosspolytope(simplex.inc));
}

TEST(CombinatorialType, PentagonPrismIsNotACube) {
  // prism over a regular-ish rational pentagon
  VPolytope penta;
  penta.dim = 3;
  std::vector<std::pair<Rat, Rat>> base = {
      {Rat(1), Rat(0)}, {Rat(1, 3), Rat(1)}, {Rat(-1), Rat(2, 3)}, {Rat(-1), Rat(-2, 3)}, {Rat(1, 3), Rat(-1)}};
  for (auto& [x, y] : base) {
    penta.vertices.push_back({x, y, Rat(-1)});
    penta.vertices.push_back({x, y, Rat(1)});
  }
  OracleResult o = brute_force_hull(penta.vertices, 3);
  EXPECT_EQ(o.h.rows.size(), 7u);
  EXPECT_FALSE(is_combinatorial_cube(o.inc));
}

TEST(CombinatorialType, CrosspolytopePairing) {
  Polytope cross = standard_crosspolytope(3);
  EXPECT_TRUE(is_combinatorial_crosspolytope(cross.inc));
  OppositePairing pairing = crosspolytope_pairing(cross.inc);
  ASSERT_EQ(pairing.pairs.size(), 3u);
  EXPECT_EQ(pairing.pairs[0], (std::pair<size_t, size_t>{0, 1}));
}

TEST(Oracle, StandardExamples) {
  OracleResult cube = brute_force_hull(standard_cube(3).v.vertices, 3);
  EXPECT_EQ(cube.h.rows.size(), 6u);
  OracleResult cross = brute_force_hull(standard_crosspolytope(4).v.vertices, 4);
  EXPECT_EQ(cross.h.rows.size(), 16u);
}

TEST(Oracle, BoundsAreEnforced) {
  std::vector<RatVec> pts(300, rv({0, 0, 0}));
  EXPECT_THROW(brute_force_hull(pts, 3), BoundsError);
  EXPECT_THROW(brute_force_hull(standard_cube(3).v.vertices, 6), BoundsError);
}

TEST(Oracle, PointLimitIsEnvOverridable) {
  ASSERT_EQ(setenv("POLYFORGE_ORACLE_LIMIT", "7", 1), 0);
  EXPECT_THROW(brute_force_hull(standard_cube(3).v.vertices, 3), BoundsError);
  ASSERT_EQ(setenv("POLYFORGE_ORACLE_LIMIT", "300", 1), 0);
  EXPECT_EQ(oracle_point_limit(), 300u);
  unsetenv("POLYFORGE_ORACLE_LIMIT");
  EXPECT_EQ(oracle_point_limit(), 200u);
}

TEST(Oracle, InteriorPointsAreNotVertices) {
  std::vector<RatVec> pts = standard_cube(3).v.vertices;
  pts.push_back(rv({0, 0, 0}));
  OracleResult o = brute_force_hull(pts, 3);
  EXPECT_EQ(o.v.vertices.size(), 8u);
  EXPECT_EQ(o.h.rows.size(), 6u);
}

TEST(Oracle, AgreesWithConstructionsOnRandomFixtures) {
  for (uint64_t seed : {2u, 5u, 8u}) {
    EXPECT_TRUE(oracle_agrees(random_cube(3, seed))) << seed;
  }
  EXPECT_TRUE(oracle_agrees(random_crosspolytope(3, 4).first));
}

TEST(Rows, CanonicalFormIsPrimitiveAndOrientationPreserving) {
  HRow r = HRow::canonical({Rat(2, 3), Rat(-4, 3)}, Rat(2));
  EXPECT_EQ(r.normal, (RatVec{Rat(1), Rat(-2)}));
  EXPECT_EQ(r.offset, Rat(3));
  HRow flipped = HRow::canonical({Rat(-2, 3), Rat(4, 3)}, Rat(-2));
  EXPECT_EQ(flipped.normal, (RatVec{Rat(-1), Rat(2)}));
  EXPECT_EQ(flipped.offset, Rat(-3));
}

TEST(Certificates, ReverifyingSerializedDataReproducesTheCertificate) {
  Polytope q = random_cube(3, 21);
  auto first = check_valid_realization(q.v, q.h, q.inc);
  ASSERT_TRUE(first.ok());
  // round-trip through the canonical reps and re-check
  Polytope again = Polytope::from_reps(q.v, q.h);
  auto second = check_valid_realization(again.v, again.h, again.inc);
  ASSERT_TRUE(second.ok());
  EXPECT_EQ(first.certificate->hyperplanes_checked(), second.certificate->hyperplanes_checked());
  EXPECT_EQ(first.certificate->strict_inequalities_verified(),
            second.certificate->strict_inequalities_verified());
}
