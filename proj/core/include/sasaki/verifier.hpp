// Pointwise differential-geometric checks upstairs in C^d on the level set of
// the K moment map. With rho = r^2 = 2 sum_j b_j |z_j|^2:
//
//   eta_z(X)      = (2 / rho) sum_j b_j Im(conj(z_j) X_j)     (eta = d^c log r)
//   dlog r_z(X)   = (2 / rho) sum_j b_j Re(conj(z_j) X_j)
//   omega_z(X, Y) = 2 sum_j b_j Im(conj(X_j) Y_j)             (omega = d(r^2 eta) / 2)
//
// with d^c = i(dbar - d). X is first projected onto the horizontal space, the
// real-orthogonal complement of the K orbit directions {i a o z, a o z} taken
// modulo span{i z, z}; on the K level set this is the plain orthogonal
// complement, so the pairings are those of the quotient forms. The Reeb field
// is i z (the J rotation of the Euler field z) and satisfies eta(i z) = 1
// identically.

#ifndef SASAKI_VERIFIER_HPP
#define SASAKI_VERIFIER_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sasaki/delzant.hpp"
#include "sasaki/reallink.hpp"

namespace sasaki {

using ComplexPoint = Eigen::VectorXcd;

struct EtaPairing {
  double eta = 0.0;     // d^c log r (X)
  double radial = 0.0;  // d log r (X)
};

class ContactData {
 public:
  /// kernel is the d x k matrix A; pass a d x 0 matrix for the flat model.
  ContactData(ReebCoefficients coeffs, lattice::IntMatrix kernel);

  std::size_t size() const { return b_.size(); }
  const std::vector<double>& b() const { return b_; }

  double r(const ComplexPoint& z) const;
  double r(std::span<const double> x) const;

  /// Projection of X onto the horizontal space at z.
  ComplexPoint horizontal(const ComplexPoint& z, const ComplexPoint& x) const;

  EtaPairing eta(const ComplexPoint& z, const ComplexPoint& x) const;
  double omega(const ComplexPoint& z, const ComplexPoint& x, const ComplexPoint& y) const;

  ComplexPoint euler_field(const ComplexPoint& z) const { return z; }
  ComplexPoint reeb_field(const ComplexPoint& z) const;
  /// Infinitesimal action of kernel column i: X_j = i a_ji z_j.
  ComplexPoint k_direction(const ComplexPoint& z, std::size_t column) const;

 private:
  std::vector<double> b_;
  Eigen::MatrixXd kernel_;
};

/// Throws std::domain_error when r(z) == 0.
EtaPairing eval_eta(const ContactData& ctx, const ComplexPoint& z, const ComplexPoint& x);

struct CheckOutcome {
  std::string name;
  double max_violation = 0.0;
  double tolerance = 0.0;
  double floor = 0.0;  // rounding floor; a tolerance below it cannot certify anything
  bool passed = false;
};

struct VerificationReport {
  std::vector<CheckOutcome> checks;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> failures;  // per-point problems, e.g. rank-deficient frames

  bool passed() const;
  const CheckOutcome* find(const std::string& name) const;
};

struct VerifyOptions {
  double pairing_tol = 1e-9;
  double residual_tol = 1e-10;
};

/// Checks at each sample: eta and omega vanish on the tangent frame, the Euler
/// direction is tangent to the cone, r = 1 on the level set (after the 1/sqrt 2
/// rescaling between b.u = 1 and the characteristic hyperplane at 1/2), and
/// eta(Reeb) = 1.
VerificationReport verify_link(const QuadricSystem& system, const ContactData& ctx,
                               const SampleSet& samples, const VerifyOptions& options = {});

enum class FlatFrame { lagrangian, rotated_euler };

struct FlatOptions {
  double im_tol = 1e-12;
  double calibration_tol = 1e-9;
  FlatFrame frame = FlatFrame::lagrangian;
};

struct HolomorphicVolume {
  std::complex<double> value;  // dz_1 ^ ... ^ dz_m on the frame
  double volume = 0.0;         // Riemannian volume of the frame
};

HolomorphicVolume evaluate_holomorphic_volume(std::span<const ComplexPoint> frame);

/// Flat model C^{n+1}: Im Omega vanishes and Re Omega calibrates the cone over
/// the real unit sphere. Throws std::invalid_argument if the samples are not
/// points of S^n in R^{n+1}.
VerificationReport verify_flat_special(std::size_t n, const SampleSet& samples,
                                       const FlatOptions& options = {});

/// Copy of the samples with uniform noise of the given amplitude on every coordinate.
SampleSet perturb_samples(const SampleSet& samples, double amplitude, std::uint64_t seed);

/// Orthonormal basis (columns) of the tangent space of the locus at x.
Eigen::MatrixXd tangent_frame(const QuadricSystem& system, std::span<const double> x);

}  // namespace sasaki

#endif  // SASAKI_VERIFIER_HPP
