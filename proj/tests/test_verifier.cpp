#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sasaki/verifier.hpp"

using namespace sasaki;

namespace {

struct Fixture {
  DelzantData data;
  ReebCoefficients coeffs;
  QuadricSystem system;
};

Fixture ypq_fixture(long long p, long long q) {
  Fixture f{build_delzant(ypq_cone(p, q)), {}, {}};
  f.coeffs = reeb_coefficients(f.data, ypq_reeb(p, q).xi);
  f.system = build_system(f.data, f.coeffs);
  return f;
}

ComplexPoint random_complex(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexPoint z(static_cast<Eigen::Index>(d));
  for (auto& v : z) v = {g(rng), g(rng)};
  return z;
}

// A point of the zero level of the K moment map: |z_j|^2 = x_j^2 with random phases.
ComplexPoint lift(const std::vector<double>& x, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  ComplexPoint z(static_cast<Eigen::Index>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) z(static_cast<Eigen::Index>(j)) = std::polar(x[j], phase(rng));
  return z;
}

SampleSet sphere_samples(std::size_t n, std::size_t count, std::uint64_t seed) {
  QuadricSystem s;
  s.homogeneous = lattice::IntMatrix(0, n + 1);
  s.inhomogeneous.assign(n + 1, 1.0);
  return sample(s, count, seed);
}

}  // namespace

TEST(ContactData, RealPointsRealVectors) {
  const Fixture f = ypq_fixture(2, 1);
  const ContactData ctx(f.coeffs, f.data.kernel);
  const auto x = sample(f.system, 10, 1).points;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (const auto& p : x) {
    ComplexPoint z(4), v(4);
    for (int j = 0; j < 4; ++j) {
      z(j) = p[static_cast<std::size_t>(j)];
      v(j) = g(rng);
    }
    EXPECT_NEAR(eval_eta(ctx, z, v).eta, 0.0, 1e-15);
  }
}

TEST(ContactData, RejectsOrigin) {
  const Fixture f = ypq_fixture(2, 1);
  const ContactData ctx(f.coeffs, f.data.kernel);
  const ComplexPoint zero = ComplexPoint::Zero(4);
  EXPECT_THROW(eval_eta(ctx, zero, zero), std::domain_error);
}

TEST(ContactDataProperty, ReebPairingIsOne) {
  std::mt19937_64 rng(3);
  for (auto [p, q] : oracle::coprime_pairs(5)) {
    const Fixture f = ypq_fixture(p, q);
    const ContactData ctx(f.coeffs, f.data.kernel);
    for (int i = 0; i < 100; ++i) {
      const ComplexPoint z = random_complex(4, rng);
      EXPECT_NEAR(ctx.eta(z, ctx.reeb_field(z)).eta, 1.0, 1e-12);
      EXPECT_NEAR(ctx.eta(z, ctx.euler_field(z)).radial, 1.0, 1e-12);
    }
  }
}

TEST(ContactDataProperty, KDirectionsAreAnnihilated) {
  const Fixture f = ypq_fixture(3, 1);
  const ContactData ctx(f.coeffs, f.data.kernel);
  std::mt19937_64 rng(4);
  for (const auto& x : sample(f.system, 100, 4).points) {
    const ComplexPoint z = lift(x, rng);
    EXPECT_NEAR(ctx.eta(z, ctx.k_direction(z, 0)).eta, 0.0, 1e-12);
  }
}

TEST(ContactDataProperty, AntiInvariantUnderConjugation) {
  const Fixture f = ypq_fixture(5, 3);
  const ContactData ctx(f.coeffs, f.data.kernel);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const ComplexPoint z = random_complex(4, rng);
    const ComplexPoint v = random_complex(4, rng);
    EXPECT_NEAR(ctx.eta(z.conjugate(), v.conjugate()).eta, -ctx.eta(z, v).eta, 1e-12);
    EXPECT_NEAR(ctx.r(z.conjugate()), ctx.r(z), 1e-12);
  }
}

TEST(ContactDataProperty, RadiusIsKInvariant) {
  const Fixture f = ypq_fixture(3, 2);
  const ContactData ctx(f.coeffs, f.data.kernel);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> t(0.0, 1.0);
  for (const auto& x : sample(f.system, 50, 8).points) {
    ComplexPoint z = lift(x, rng);
    const double angle = 2.0 * M_PI * t(rng);
    ComplexPoint w = z;
    for (int j = 0; j < 4; ++j)
      w(j) *= std::polar(1.0, angle * f.data.kernel(static_cast<std::size_t>(j), 0).convert_to<double>());
    EXPECT_NEAR(ctx.r(w), ctx.r(z), 1e-12);
  }
}

TEST(ContactDataProperty, WellDefinedModuloKernel) {
  const Fixture f = ypq_fixture(2, 1);
  const ContactData ctx(f.coeffs, f.data.kernel);
  ReebCoefficients shifted = f.coeffs;
  for (std::size_t j = 0; j < 4; ++j) shifted.b[j] += 0.37 * f.data.kernel(j, 0).convert_to<double>();
  const ContactData ctx2(shifted, f.data.kernel);
  std::mt19937_64 rng(6);
  for (const auto& x : sample(f.system, 100, 6).points) {
    const ComplexPoint z = lift(x, rng);
    const ComplexPoint v = random_complex(4, rng);
    EXPECT_NEAR(ctx.eta(z, v).eta, ctx2.eta(z, v).eta, 1e-10);
  }
}

TEST(ContactData, OmegaMatchesFiniteDifferenceOfPotentialForm) {
  // omega = (1/2) d alpha with alpha_z(X) = 2 sum_j b_j Im(conj(z_j) X_j), on horizontal vectors
  const Fixture f = ypq_fixture(2, 1);
  const ContactData ctx(f.coeffs, f.data.kernel);
  const auto& b = f.coeffs.b;
  auto alpha = [&](const ComplexPoint& z, const ComplexPoint& x) {
    double s = 0;
    for (int j = 0; j < 4; ++j) s += 2.0 * b[static_cast<std::size_t>(j)] * (std::conj(z(j)) * x(j)).imag();
    return s;
  };
  std::mt19937_64 rng(7);
  const double h = 1e-6;
  for (const auto& x : sample(f.system, 20, 7).points) {
    const ComplexPoint z = lift(x, rng);
    const ComplexPoint X = ctx.horizontal(z, random_complex(4, rng));
    const ComplexPoint Y = ctx.horizontal(z, random_complex(4, rng));
    const double dxy = (alpha(z + h * X, Y) - alpha(z - h * X, Y)) / (2 * h);
    const double dyx = (alpha(z + h * Y, X) - alpha(z - h * Y, X)) / (2 * h);
    EXPECT_NEAR(ctx.omega(z, X, Y), 0.5 * (dxy - dyx), 1e-6);
  }
}

TEST(VerifyLink, SphereAndYpqPass) {
  {
    QuadricSystem s;
    s.homogeneous = lattice::IntMatrix(0, 3);
    s.inhomogeneous = {1, 1, 1};
    const ContactData ctx(ReebCoefficients{{1, 1, 1}}, lattice::IntMatrix(3, 0));
    const VerificationReport r = verify_link(s, ctx, sample(s, 100, 0));
    EXPECT_TRUE(r.passed());
  }
  const Fixture f = ypq_fixture(2, 1);
  const ContactData ctx(f.coeffs, f.data.kernel);
  const VerificationReport r = verify_link(f.system, ctx, sample(f.system, 500, 0));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.sample_count, 500u);
  ASSERT_NE(r.find("eta_vanishes"), nullptr);
  EXPECT_LT(r.find("eta_vanishes")->max_violation, 1e-9);
  EXPECT_LT(r.find("omega_vanishes")->max_violation, 1e-9);
  EXPECT_LT(r.find("cone_tangency")->max_violation, 1e-10);
}

TEST(VerifyLink, NoiseFails) {
  const Fixture f = ypq_fixture(2, 1);
  const ContactData ctx(f.coeffs, f.data.kernel);
  const SampleSet noisy = perturb_samples(sample(f.system, 200, 0), 1e-3, 1);
  const VerificationReport r = verify_link(f.system, ctx, noisy);
  EXPECT_FALSE(r.passed());
  EXPECT_GT(r.find("cone_tangency")->max_violation, 1e-6);
}

TEST(VerifyLink, ToleranceBelowFloorFails) {
  const Fixture f = ypq_fixture(2, 1);
  const ContactData ctx(f.coeffs, f.data.kernel);
  VerifyOptions opts;
  opts.pairing_tol = 1e-15;
  opts.residual_tol = 1e-15;
  EXPECT_FALSE(verify_link(f.system, ctx, sample(f.system, 50, 0), opts).passed());
}

TEST(VerifyLink, Deterministic) {
  const Fixture f = ypq_fixture(3, 1);
  const ContactData ctx(f.coeffs, f.data.kernel);
  const auto a = verify_link(f.system, ctx, sample(f.system, 100, 9));
  const auto b = verify_link(f.system, ctx, sample(f.system, 100, 9));
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) EXPECT_EQ(a.checks[i].max_violation, b.checks[i].max_violation);
}

TEST(FlatSpecial, PassesOnSphere) {
  const VerificationReport r = verify_flat_special(2, sphere_samples(2, 100, 3));
  EXPECT_TRUE(r.passed());
  EXPECT_LT(r.find("im_omega_vanishes")->max_violation, 1e-12);
  EXPECT_LT(r.find("calibration_equality")->max_violation, 1e-9);
}

TEST(FlatSpecial, RotatedEulerFrameFails) {
  FlatOptions opts;
  opts.frame = FlatFrame::rotated_euler;
  const VerificationReport r = verify_flat_special(2, sphere_samples(2, 100, 3), opts);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.find("calibration_equality")->passed);
}

TEST(FlatSpecial, FrameRotationKeepsVerdict) {
  // an orientation-preserving rotation of a real frame leaves Omega unchanged
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  Eigen::Matrix3d m;
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = g(rng);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(m);
  Eigen::Matrix3d q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1;
  std::vector<ComplexPoint> e, rotated;
  for (int c = 0; c < 3; ++c) {
    e.push_back(Eigen::Vector3d::Unit(c).cast<std::complex<double>>());
    rotated.push_back(q.col(c).cast<std::complex<double>>());
  }
  const auto a = evaluate_holomorphic_volume(e);
  const auto b = evaluate_holomorphic_volume(rotated);
  EXPECT_NEAR(std::abs(a.value - b.value), 0.0, 1e-12);
  EXPECT_NEAR(b.volume, 1.0, 1e-12);
}

TEST(FlatSpecial, RejectsNonFlatInput) {
  const Fixture f = ypq_fixture(2, 1);
  EXPECT_THROW(verify_flat_special(2, sample(f.system, 10, 0)), std::invalid_argument);
}

TEST(TangentFrame, OrthonormalAndTangent) {
  const Fixture f = ypq_fixture(2, 1);
  for (const auto& x : sample(f.system, 50, 2).points) {
    const Eigen::MatrixXd t = tangent_frame(f.system, x);
    ASSERT_EQ(t.cols(), 2);
    EXPECT_LT((t.transpose() * t - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-12);
    EXPECT_LT((constraint_jacobian(f.system, x) * t).norm(), 1e-10);
  }
}
