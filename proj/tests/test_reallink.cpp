#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sasaki/reallink.hpp"
#include "sasaki/reeb.hpp"

using namespace sasaki;

namespace {

QuadricSystem ypq_system(long long p, long long q) {
  const DelzantData data = build_delzant(ypq_cone(p, q));
  return build_system(data, reeb_coefficients(data, ypq_reeb(p, q).xi));
}

QuadricSystem sphere_system(std::size_t d) {
  QuadricSystem s;
  s.homogeneous = lattice::IntMatrix(0, d);
  s.inhomogeneous.assign(d, 1.0);
  return s;
}

// Row permutation and signed rescaling of the homogeneous rows, plus adding a
// multiple of a homogeneous row to b (which leaves b.u = 1 unchanged on A u = 0).
QuadricSystem scramble(const QuadricSystem& s, std::mt19937_64& rng) {
  QuadricSystem out = s;
  const std::size_t k = s.k(), d = s.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_int_distribution<int> scale(1, 4);
  for (std::size_t i = 0; i < k; ++i) {
    const int c = scale(rng) * ((rng() & 1) ? 1 : -1);
    for (std::size_t j = 0; j < d; ++j) out.homogeneous(i, j) = s.homogeneous(perm[i], j) * c;
  }
  if (k > 0) {
    const double mix = std::uniform_real_distribution<double>(-0.05, 0.05)(rng);
    for (std::size_t j = 0; j < d; ++j) out.inhomogeneous[j] += mix * s.homogeneous(0, j).convert_to<double>();
  }
  return out;
}

}  // namespace

TEST(BuildSystem, SphereFromOrthant) {
  const DelzantData data = build_delzant(orthant(3));
  const std::vector<double> xi{1, 1, 1};
  const QuadricSystem s = build_system(data, reeb_coefficients(data, xi));
  EXPECT_EQ(s.k(), 0u);
  EXPECT_EQ(s.inhomogeneous, xi);
}

TEST(BuildSystem, Ypq31AtFirstNormalsSum) {
  const ConeSpec cone = ypq_cone(3, 1);
  const DelzantData data = build_delzant(cone);
  const auto xi0 = lattice::to_doubles(first_normals_sum(cone));
  const QuadricSystem s = build_system(data, reeb_coefficients(data, xi0));
  EXPECT_TRUE(interior_point(s).has_value());
  EXPECT_TRUE(polytope_bounded(s));
}

TEST(BuildSystem, InfeasibleOutsideReebCone) {
  const DelzantData data = build_delzant(ypq_cone(2, 1));
  const std::vector<double> bad{-3, 0, 0};
  EXPECT_THROW(build_system(data, reeb_coefficients(data, bad)), InfeasibleSystemError);
}

TEST(SystemsEquivalent, MatchesReferenceSystem) {
  for (auto [p, q] : oracle::coprime_pairs(7))
    EXPECT_TRUE(systems_equivalent(ypq_system(p, q), ypq_reference_system(p, q))) << p << "," << q;
}

TEST(SystemsEquivalent, DetectsDifferentSystems) {
  EXPECT_FALSE(systems_equivalent(ypq_system(2, 1), ypq_reference_system(3, 1)));
  QuadricSystem s = ypq_system(2, 1);
  QuadricSystem t = s;
  t.inhomogeneous[0] *= 1.01;
  EXPECT_FALSE(systems_equivalent(s, t));
  // a positive rescale of b alone changes the level set
  QuadricSystem u = s;
  for (double& v : u.inhomogeneous) v *= 2.0;
  EXPECT_FALSE(systems_equivalent(s, u));
}

TEST(SystemsEquivalent, SphereScaling) {
  QuadricSystem a = sphere_system(3);
  QuadricSystem b = a;
  for (double& v : b.inhomogeneous) v = 2.0;
  // {u1+u2+u3 = 1} and {2u1+2u2+2u3 = 2}: the second is written with b = 1 after dividing
  for (double& v : b.inhomogeneous) v /= 2.0;
  EXPECT_TRUE(systems_equivalent(a, b));
}

TEST(SystemsEquivalentProperty, RandomizedTransformations) {
  std::mt19937_64 rng(77);
  const auto pairs = oracle::coprime_pairs(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [p, q] = pairs[static_cast<std::size_t>(trial) % pairs.size()];
    const QuadricSystem s = ypq_system(p, q);
    const QuadricSystem t = scramble(s, rng);
    EXPECT_TRUE(systems_equivalent(s, s));
    EXPECT_TRUE(systems_equivalent(s, t));
    EXPECT_TRUE(systems_equivalent(t, s));
  }
}

TEST(SystemsEquivalent, CrossResiduals) {
  // samples of one system satisfy the other
  const QuadricSystem s = ypq_system(2, 1);
  const QuadricSystem r = ypq_reference_system(2, 1);
  for (const auto& x : sample(s, 100, 4).points) EXPECT_LT(r.max_residual(x), 1e-10);
  for (const auto& x : sample(r, 100, 4).points) EXPECT_LT(s.max_residual(x), 1e-10);
}

TEST(Sample, SphereResiduals) {
  const SampleSet set = sample(sphere_system(3), 100, 1);
  ASSERT_EQ(set.points.size(), 100u);
  EXPECT_LT(set.residual_max, 1e-12);
  for (const auto& x : set.points) EXPECT_NEAR(x[0] * x[0] + x[1] * x[1] + x[2] * x[2], 1.0, 1e-12);
}

TEST(Sample, YpqInvariants) {
  for (auto [p, q] : oracle::coprime_pairs(5)) {
    const QuadricSystem s = ypq_system(p, q);
    const SampleSet set = sample(s, 500, 11);
    ASSERT_EQ(set.points.size(), 500u);
    EXPECT_LT(set.residual_max, 1e-10);
    for (std::size_t i = 0; i < set.points.size(); ++i) {
      EXPECT_EQ(set.jacobian_ranks[i], 2u);
      EXPECT_EQ(jacobian_rank(s, set.points[i]), 2u);
    }
  }
}

TEST(Sample, EmptyPolytopeIsAnError) {
  QuadricSystem s = sphere_system(3);
  s.inhomogeneous = {-1.0, -1.0, -1.0};
  EXPECT_THROW(sample(s, 10, 0), std::exception);
}

TEST(Sample, WorkerCountDoesNotChangeResults) {
  const QuadricSystem s = ypq_system(3, 2);
  SampleOptions one, four;
  four.workers = 4;
  const SampleSet a = sample(s, 300, 99, one);
  const SampleSet b = sample(s, 300, 99, four);
  EXPECT_EQ(a.points, b.points);
  EXPECT_EQ(sample(s, 300, 99, one).points, a.points);
  EXPECT_NE(sample(s, 300, 100, one).points, a.points);
}

TEST(DeckAction, ResidualsInvariant) {
  const QuadricSystem s = ypq_system(2, 1);
  const DeckGroup deck = deck_group(build_delzant(ypq_cone(2, 1)));
  for (const auto& x : sample(s, 200, 5).points)
    for (const auto& e : deck.elements) EXPECT_EQ(s.residuals(e.apply(x)), s.residuals(x));
}

TEST(Classify, Ypq21) {
  const QuadricSystem s = ypq_system(2, 1);
  const DeckGroup deck = deck_group(build_delzant(ypq_cone(2, 1)));
  const TopologyReport t = classify_ypq(s, deck, sample(s, 500, 0));
  EXPECT_EQ(t.upstairs, "torus");
  ASSERT_TRUE(t.ellipse_coords.has_value());
  EXPECT_EQ(*t.ellipse_coords, (std::array<std::size_t, 2>{0, 2}));
  ASSERT_EQ(t.actions.size(), 1u);
  EXPECT_NE(t.actions[0].action.find("ellipse"), std::string::npos);
  EXPECT_TRUE(t.actions[0].free);
  EXPECT_TRUE(t.actions[0].free_structural);
  EXPECT_GT(t.actions[0].min_displacement, 1e-6);
  EXPECT_EQ(t.quotient, "torus");
  EXPECT_TRUE(t.covering_consistent);
}

TEST(Classify, Ypq31) {
  const QuadricSystem s = ypq_system(3, 1);
  const DeckGroup deck = deck_group(build_delzant(ypq_cone(3, 1)));
  const TopologyReport t = classify_ypq(s, deck, sample(s, 500, 0));
  EXPECT_EQ(t.upstairs, "torus");
  ASSERT_EQ(t.actions.size(), 1u);
  EXPECT_NE(t.actions[0].action.find("circle fiber"), std::string::npos);
  EXPECT_TRUE(t.actions[0].free);
  EXPECT_EQ(t.quotient, "torus");
}

TEST(Classify, Sphere) {
  const DelzantData data = build_delzant(orthant(3));
  const TopologyReport t = classify_ypq(sphere_system(3), deck_group(data), 50, 0);
  EXPECT_EQ(t.quotient, "no deck quotient; real sphere S^2");
}

TEST(QuotientRepresentative, Examples) {
  DeckGroup trivial;
  trivial.size = 4;
  trivial.elements = {SignVector(4)};
  const std::vector<double> x{1, 2, 3, 4};
  EXPECT_EQ(quotient_representative(x, trivial), x);
  DeckGroup g;
  g.size = 4;
  g.elements = {SignVector(4), SignVector::parse("1010")};
  EXPECT_EQ(quotient_representative(x, g), (std::vector<double>{-1, 2, -3, 4}));
  const auto r = quotient_representative(x, g);
  EXPECT_EQ(quotient_representative(r, g), r);
  EXPECT_EQ(deck_orbit(x, g).size(), 2u);
}
