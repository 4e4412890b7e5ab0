// Rational polyhedral cones C = {y : <y, lambda_i> >= 0} given by integer
// inward facet normals, with the validity predicates a moment cone of a toric
// Sasaki manifold has to satisfy.

#ifndef SASAKI_CONE_HPP
#define SASAKI_CONE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sasaki/lattice.hpp"

namespace sasaki {

/// Face enumeration is exponential in the number of normals.
inline constexpr std::size_t kMaxNormals = 16;

class ConeSpec {
 public:
  /// Throws std::invalid_argument when the shape is wrong (dim == 0, no
  /// normals, a normal of the wrong length, or more than kMaxNormals normals).
  ConeSpec(std::size_t dim, std::vector<lattice::IntVector> normals, std::string name = {});

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return normals_.size(); }
  const std::vector<lattice::IntVector>& normals() const { return normals_; }
  const lattice::IntVector& normal(std::size_t i) const { return normals_.at(i); }
  const std::string& name() const { return name_; }

  /// The dim x d matrix whose columns are the normals.
  lattice::IntMatrix beta() const;

  friend bool operator==(const ConeSpec&, const ConeSpec&) = default;

 private:
  std::size_t dim_;
  std::vector<lattice::IntVector> normals_;
  std::string name_;
};

struct Verdict {
  bool passed = true;
  std::string witness;  // empty when passed
};

struct ValidationReport {
  Verdict primitive;
  Verdict strongly_convex;
  Verdict full_dimensional;
  Verdict minimal;
  Verdict good;

  bool ok() const {
    return primitive.passed && strongly_convex.passed && full_dimensional.passed &&
           minimal.passed && good.passed;
  }
};

/// Primitive integer generators of the extreme rays of C, lexicographic order.
using RayList = std::vector<lattice::IntVector>;

/// A face of C: the normals vanishing on it and its dimension. The full cone
/// has an empty index set; the apex {0} is not listed.
struct Face {
  std::vector<std::size_t> normals;
  std::size_t dim = 0;
};
using FaceLattice = std::vector<Face>;

ValidationReport validate(const ConeSpec& cone);

/// Throws std::domain_error if C contains a line or has empty interior.
RayList dual_rays(const ConeSpec& cone);

/// Faces of C other than the apex, from its extreme rays.
FaceLattice face_lattice(const ConeSpec& cone, const RayList& rays);

/// True iff <ray, xi> > 0 for every extreme ray, i.e. xi in the open dual cone.
bool reeb_cone_contains(const RayList& rays, std::span<const double> xi);
bool reeb_cone_contains(const ConeSpec& cone, std::span<const double> xi);
bool reeb_cone_contains(const RayList& rays, std::span<const lattice::Integer> xi);

/// Integer covector pairing to exactly 1 with every normal, if one exists.
std::optional<lattice::IntVector> gorenstein_vector(const ConeSpec& cone);

/// Sum of the first dim normals (the default Reeb vector of the construction).
lattice::IntVector first_normals_sum(const ConeSpec& cone);

/// Standard orthant: normals e_1, ..., e_dim.
ConeSpec orthant(std::size_t dim);

/// The Y^{p,q} moment cone. Requires p > q >= 1 and gcd(p, q) == 1.
ConeSpec ypq_cone(long long p, long long q);

/// Recovers (p, q) if the cone's normals are exactly the Y^{p,q} normals.
std::optional<std::pair<long long, long long>> match_ypq(const ConeSpec& cone);

}  // namespace sasaki

#endif  // SASAKI_CONE_HPP
