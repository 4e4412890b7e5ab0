#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sasaki/reeb.hpp"

using namespace sasaki;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Positive combinations of the normals, rescaled onto the slice <gamma, xi> = n + 1.
std::vector<std::vector<double>> interior_points(const ConeSpec& cone, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(0.2, 1.0);
  const auto gamma = gorenstein_vector(cone);
  std::vector<std::vector<double>> out;
  while (out.size() < count) {
    std::vector<double> xi(cone.dim(), 0.0);
    for (const auto& normal : cone.normals()) {
      const double c = w(rng);
      for (std::size_t i = 0; i < cone.dim(); ++i) xi[i] += c * normal[i].convert_to<double>();
    }
    if (gamma) {
      double g = 0;
      for (std::size_t i = 0; i < cone.dim(); ++i) g += (*gamma)[i].convert_to<double>() * xi[i];
      for (double& v : xi) v *= static_cast<double>(cone.dim()) / g;
    }
    out.push_back(xi);
  }
  return out;
}

}  // namespace

TEST(Volume, OrthantValues) {
  const VolumeProfile profile = make_volume_profile(orthant(3));
  const std::vector<double> one{1, 1, 1}, two{2, 2, 2};
  EXPECT_NEAR(volume(profile, one), 1.0 / 48.0, 1e-15);
  EXPECT_NEAR(volume(profile, two), 1.0 / 384.0, 1e-16);
  const std::vector<double> boundary{1, 0, 0};
  EXPECT_THROW(volume(profile, boundary), DivergenceError);
}

TEST(Volume, MonteCarloAgreement) {
  for (const auto& cone : {orthant(3), ypq_cone(2, 1)}) {
    const VolumeProfile profile = make_volume_profile(cone);
    const RayList rays = dual_rays(cone);
    for (const auto& xi : interior_points(cone, 3, 9)) {
      const double exact = volume(profile, xi);
      const double mc = oracle::volume_monte_carlo(cone, rays, xi, 400000, 17);
      EXPECT_NEAR(mc / exact, 1.0, 2e-2) << cone.name();
    }
  }
}

TEST(VolumeProperty, Homogeneity) {
  for (auto [p, q] : oracle::coprime_pairs(5)) {
    const ConeSpec cone = ypq_cone(p, q);
    const VolumeProfile profile = make_volume_profile(cone);
    for (const auto& xi : interior_points(cone, 10, 3)) {
      for (double c : {0.5, 1.7, 3.0}) {
        std::vector<double> scaled = xi;
        for (double& v : scaled) v *= c;
        EXPECT_LT(rel(volume(profile, scaled), std::pow(c, -3.0) * volume(profile, xi)), 1e-10);
      }
    }
  }
}

TEST(VolumeProperty, TriangulationIndependence) {
  std::vector<ConeSpec> cones{orthant(3)};
  for (auto [p, q] : oracle::coprime_pairs(7)) cones.push_back(ypq_cone(p, q));
  for (const auto& cone : cones) {
    const VolumeProfile a = make_volume_profile(cone, FanApex::first);
    const VolumeProfile b = make_volume_profile(cone, FanApex::last);
    for (const auto& xi : interior_points(cone, 10, 5))
      EXPECT_LT(rel(volume(a, xi), volume(b, xi)), 1e-10) << cone.name();
  }
}

TEST(VolumeProperty, GradientMatchesFiniteDifferences) {
  std::size_t points = 0;
  for (const auto& cone : {ypq_cone(2, 1), ypq_cone(5, 3), orthant(3), ypq_cone(7, 4)}) {
    const VolumeProfile profile = make_volume_profile(cone);
    for (const auto& xi : interior_points(cone, 5, 13)) {
      const auto g = volume_gradient(profile, xi);
      const auto fd = oracle::fd_gradient([&](std::span<const double> x) { return volume(profile, x); }, xi);
      double gn = 0, diff = 0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        gn += g[i] * g[i];
        diff += (g[i] - fd[i]) * (g[i] - fd[i]);
      }
      EXPECT_LT(std::sqrt(diff / gn), 1e-5);
      ++points;
    }
  }
  EXPECT_EQ(points, 20u);
}

TEST(VolumeProperty, MidpointConvexOnSlice) {
  const ConeSpec cone = ypq_cone(3, 1);
  const VolumeProfile profile = make_volume_profile(cone);
  const auto pts = interior_points(cone, 100, 21);
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
    std::vector<double> mid(3);
    for (std::size_t k = 0; k < 3; ++k) mid[k] = 0.5 * (pts[i][k] + pts[i + 1][k]);
    const double lhs = volume(profile, mid);
    const double rhs = 0.5 * (volume(profile, pts[i]) + volume(profile, pts[i + 1]));
    EXPECT_LE(lhs, rhs + 1e-12);
  }
}

TEST(Minimize, OrthantIsSymmetric) {
  const ReebSolution s = minimize_volume(orthant(3));
  for (double v : s.xi) EXPECT_NEAR(v, 1.0, 1e-8);
  EXPECT_EQ(s.provenance, Provenance::minimized);
  EXPECT_LT(s.grad_norm, 1e-9);
}

TEST(Minimize, AgreesWithClosedForm) {
  for (auto [p, q] : oracle::coprime_pairs(5)) {
    const ReebSolution s = minimize_volume(ypq_cone(p, q));
    const auto expected = oracle::ypq_xi(static_cast<double>(p), static_cast<double>(q));
    double err = 0;
    for (std::size_t i = 0; i < 3; ++i) err += (s.xi[i] - expected[i]) * (s.xi[i] - expected[i]);
    EXPECT_LT(std::sqrt(err), 1e-6) << p << "," << q;
    EXPECT_NEAR(s.xi[0], 3.0, 1e-10);  // the slice <e1*, xi> = 3
    EXPECT_TRUE(reeb_cone_contains(ypq_cone(p, q), s.xi));
  }
}

TEST(Minimize, UnsupportedWithoutGorensteinVector) {
  const ConeSpec cone(2, {lattice::to_int_vector({2, 1}), lattice::to_int_vector({1, 2})});
  EXPECT_THROW(minimize_volume(cone), UnsupportedConeError);
}

TEST(Minimize, NonConvergenceCarriesTrace) {
  MinimizeOptions opts;
  opts.max_iterations = 1;
  opts.tolerance = 1e-300;
  try {
    minimize_volume(ypq_cone(5, 2), opts);
    FAIL();
  } catch (const NonConvergenceError& e) {
    EXPECT_FALSE(e.trace().empty());
  }
}

TEST(ClosedForm, Ypq21) {
  const double root13 = std::sqrt(13.0);
  EXPECT_NEAR(ypq_inverse_l(2, 1), 2 * root13 - 5, 1e-12);
  const ReebSolution s = ypq_reeb(2, 1);
  EXPECT_EQ(s.provenance, Provenance::closed_form);
  EXPECT_NEAR(s.xi[0], 3.0, 1e-12);
  EXPECT_NEAR(s.xi[1], root13 - 1, 1e-12);
  EXPECT_NEAR(s.xi[2], root13 - 1, 1e-12);
  EXPECT_NEAR(ypq_inverse_l(3, 1), 3 * std::sqrt(33.0) - 15, 1e-12);
  EXPECT_THROW(ypq_reeb(1, 0), std::invalid_argument);
  EXPECT_THROW(ypq_reeb(4, 2), std::invalid_argument);
}
