// Quotient bookkeeping for the toric construction C^d // K: the exact sequence
// 0 -> k -> R^d -> R^{n+1} -> 0 with beta = (lambda_1 ... lambda_d), the integer
// kernel matrix A, the Reeb coefficients b with beta b = xi, and the
// 2-torsion {a in K : a^2 = 1} acting on R^d by coordinate sign flips.

#ifndef SASAKI_DELZANT_HPP
#define SASAKI_DELZANT_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sasaki/cone.hpp"
#include "sasaki/lattice.hpp"

namespace sasaki {

/// Thrown when a cone fails validation; carries the full report.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct DelzantData {
  lattice::IntMatrix beta;    // (n+1) x d, columns are the normals
  lattice::IntMatrix kernel;  // d x k, saturated basis of ker beta, column HNF
  std::size_t k = 0;          // d - (n+1)
  std::size_t torsion_rank = 0;                 // log2 of the 2-torsion order
  std::vector<lattice::Integer> beta_divisors;  // all 1 iff K is connected
  bool kernel_saturated = false;

  std::size_t dim() const { return beta.rows(); }
  std::size_t size() const { return beta.cols(); }
};

/// Element of (Z/2)^d; bit j set means x_j -> -x_j.
class SignVector {
 public:
  SignVector() = default;
  explicit SignVector(std::size_t size, std::uint32_t bits = 0);
  /// Parses strings like "1010" (first character is coordinate 1).
  static SignVector parse(const std::string& pattern);

  std::size_t size() const { return size_; }
  std::uint32_t bits() const { return bits_; }
  bool flips(std::size_t j) const { return (bits_ >> j) & 1u; }
  bool is_identity() const { return bits_ == 0; }
  std::size_t weight() const;

  SignVector operator^(const SignVector& other) const;
  std::string str() const;

  /// Applies the sign flips to a point of R^d.
  std::vector<double> apply(std::span<const double> x) const;

  friend bool operator==(const SignVector&, const SignVector&) = default;
  friend std::strong_ordering operator<=>(const SignVector& a, const SignVector& b) {
    return a.str() <=> b.str();
  }

 private:
  std::size_t size_ = 0;
  std::uint32_t bits_ = 0;
};

struct DeckGroup {
  std::size_t size = 0;               // ambient dimension d
  std::vector<SignVector> elements;   // sorted; the identity comes first

  std::size_t order() const { return elements.size(); }
  bool contains(const SignVector& s) const;
  friend bool operator==(const DeckGroup&, const DeckGroup&) = default;
};

struct ReebCoefficients {
  std::vector<double> b;  // minimum-norm solution of beta b = xi
};

/// Throws ValidationError if the cone is not a good strongly convex cone.
DelzantData build_delzant(const ConeSpec& cone);

/// 2-torsion of K as the kernel of (beta mod 2) : F_2^d -> F_2^{n+1}.
DeckGroup deck_group(const DelzantData& data);

/// 2-torsion of the identity component of K: exp(2 pi i A t) at t in (Z/2)^k / 2.
/// Equals deck_group(data) exactly when K is connected.
DeckGroup deck_group_from_kernel(const DelzantData& data);

ReebCoefficients reeb_coefficients(const DelzantData& data, std::span<const double> xi);
std::vector<lattice::Rational> reeb_coefficients_exact(const DelzantData& data,
                                                       std::span<const lattice::Rational> xi);

/// Nontrivial deck element as tabulated in the standard Y^{p,q} parity table:
/// x4 for p even, x3 for p and q odd, x3 and x4 for p odd and q even.
SignVector ypq_tabulated_deck_element(long long p, long long q);

}  // namespace sasaki

#endif  // SASAKI_DELZANT_HPP
