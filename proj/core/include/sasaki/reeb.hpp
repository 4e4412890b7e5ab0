// Volume functional on the Reeb cone and its minimization. The Reeb vector of
// the Sasaki-Einstein metric is the critical point of
//
//   V(xi) = vol{ y in C : <y, xi> <= 1/2 }
//
// restricted to the slice <gamma, xi> = n+1, gamma the Gorenstein vector.

#ifndef SASAKI_REEB_HPP
#define SASAKI_REEB_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sasaki/cone.hpp"

namespace sasaki {

struct SimplicialPiece {
  std::vector<std::size_t> rays;  // indices into VolumeProfile::rays
  lattice::Integer det;           // |det| of the ray matrix, nonzero
};

enum class FanApex { first, last };

struct VolumeProfile {
  std::size_t dim = 0;
  std::vector<std::vector<double>> rays;
  std::vector<SimplicialPiece> triangulation;
  std::optional<lattice::IntVector> gamma;
};

/// Raised when xi lies on or outside the boundary of the Reeb cone.
class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnsupportedConeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TraceEntry {
  std::size_t iteration = 0;
  double volume = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, std::vector<TraceEntry> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<TraceEntry>& trace() const { return trace_; }

 private:
  std::vector<TraceEntry> trace_;
};

enum class Provenance { closed_form, minimized };
std::string to_string(Provenance p);

struct ReebSolution {
  std::vector<double> xi;
  double volume = 0.0;
  double grad_norm = 0.0;  // norm of the gradient projected onto the slice
  Provenance provenance = Provenance::minimized;
  std::size_t iterations = 0;
};

struct MinimizeOptions {
  double tolerance = 1e-9;
  std::size_t max_iterations = 10000;
};

/// Fan triangulation of C from the lexicographically first (or last) ray.
VolumeProfile make_volume_profile(const ConeSpec& cone, FanApex apex = FanApex::first);

double volume(const VolumeProfile& profile, std::span<const double> xi);
std::vector<double> volume_gradient(const VolumeProfile& profile, std::span<const double> xi);

/// Gradient with its component along gamma removed.
std::vector<double> projected_gradient(const VolumeProfile& profile, std::span<const double> xi);

ReebSolution minimize_volume(const ConeSpec& cone, const MinimizeOptions& options = {});

/// l^{-1} = (3q^2 - 2p^2 + p sqrt(4p^2 - 3q^2)) / q.
double ypq_inverse_l(long long p, long long q);

/// Closed form xi = (3, (3p - 3q + l^{-1})/2, (3p - 3q + l^{-1})/2).
ReebSolution ypq_reeb(long long p, long long q);

}  // namespace sasaki

#endif  // SASAKI_REEB_HPP
