// The real locus of the quotient: points x in R^d with
//
//   sum_j a_ij x_j^2 = 0  (i = 1..k),      sum_j b_j x_j^2 = 1,
//
// whose quotient by the deck group is fix(tau) on the Sasaki level set.
// Everything is linear in u = x o x, so the locus is the sign-lift of the
// polytope P = {u >= 0 : A u = 0, b.u = 1}.

#ifndef SASAKI_REALLINK_HPP
#define SASAKI_REALLINK_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sasaki/delzant.hpp"
#include "sasaki/lattice.hpp"

namespace sasaki {

struct QuadricSystem {
  lattice::IntMatrix homogeneous;    // k x d, rows a_i
  std::vector<double> inhomogeneous;  // b, the equation b.u = 1

  std::size_t size() const { return inhomogeneous.size(); }
  std::size_t k() const { return homogeneous.rows(); }

  /// k homogeneous residuals followed by b.(x o x) - 1.
  std::vector<double> residuals(std::span<const double> x) const;
  double max_residual(std::span<const double> x) const;
};

class InfeasibleSystemError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A = transpose of the kernel basis, b = coeffs.b. Throws
/// InfeasibleSystemError when P has empty interior or is unbounded.
QuadricSystem build_system(const DelzantData& data, const ReebCoefficients& coeffs);

/// The reduced Y^{p,q} system at the Sasaki-Einstein Reeb vector,
///   p u2 + p u4 = (p+q) u1 + (p-q) u3,
///   (3p+3q-l^{-1}) u1 + (3p-3q+l^{-1}) u3 = 2p,
/// with the inhomogeneous row divided by 2p.
QuadricSystem ypq_reference_system(long long p, long long q);

/// Point of P maximizing min_j u_j, if that minimum is positive.
std::optional<std::vector<double>> interior_point(const QuadricSystem& system);

/// P has no recession direction.
bool polytope_bounded(const QuadricSystem& system);

/// Whether the affine sets {A1 u = 0, b1.u = 1} and {A2 u = 0, b2.u = 1} agree.
bool systems_equivalent(const QuadricSystem& s1, const QuadricSystem& s2, double tol = 1e-9);

struct SampleOptions {
  std::size_t burn_in = 200;
  std::size_t thinning = 10;
  std::size_t chains = 8;   // fixed; results do not depend on workers
  std::size_t workers = 1;
};

struct SampleSet {
  std::vector<std::vector<double>> points;
  double residual_max = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> jacobian_ranks;
};

/// Hit-and-run in P, lifted by x_j = +-sqrt(u_j) with random signs.
SampleSet sample(const QuadricSystem& system, std::size_t count, std::uint64_t seed,
                 const SampleOptions& options = {});

/// (k+1) x d Jacobian of the defining equations at x.
Eigen::MatrixXd constraint_jacobian(const QuadricSystem& system, std::span<const double> x);
std::size_t jacobian_rank(const QuadricSystem& system, std::span<const double> x);

struct DeckAction {
  SignVector element;
  std::string action;
  bool free_structural = false;  // no point of the locus is fixed (exact LP test)
  double min_displacement = 0.0;  // over the samples
  bool free = false;
};

struct TopologyReport {
  std::string upstairs;  // "torus", "sphere S^n" or "unclassified"
  std::optional<std::array<std::size_t, 2>> ellipse_coords;  // 0-based
  std::optional<std::array<std::size_t, 2>> fiber_coords;
  std::vector<DeckAction> actions;
  std::string quotient;
  bool covering_consistent = false;  // orbit sizes equal the deck order on samples
  std::size_t sample_components = 0;  // epsilon-graph diagnostic only
  std::vector<std::string> diagnostics;
};

TopologyReport classify_ypq(const QuadricSystem& system, const DeckGroup& deck,
                            const SampleSet& samples);
TopologyReport classify_ypq(const QuadricSystem& system, const DeckGroup& deck,
                            std::size_t sample_count = 500, std::uint64_t seed = 0);

/// Lexicographically smallest point of the deck orbit of x.
std::vector<double> quotient_representative(std::span<const double> x, const DeckGroup& deck);

/// Distinct points of the deck orbit of x.
std::vector<std::vector<double>> deck_orbit(std::span<const double> x, const DeckGroup& deck);

}  // namespace sasaki

#endif  // SASAKI_REALLINK_HPP
