#include "sasaki/reeb.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace sasaki {

using lattice::Integer;
using lattice::IntMatrix;
using lattice::IntVector;

namespace {

constexpr double kMinPairing = 1e-12;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

class Triangulator {
 public:
  Triangulator(const ConeSpec& cone, const RayList& rays, FanApex apex)
      : cone_(cone), rays_(rays), apex_(apex), zero_(rays.size(), std::vector<bool>(cone.size())) {
    for (std::size_t r = 0; r < rays.size(); ++r)
      for (std::size_t i = 0; i < cone.size(); ++i) {
        Integer s = 0;
        for (std::size_t j = 0; j < cone.dim(); ++j) s += rays[r][j] * cone.normal(i)[j];
        zero_[r][i] = s == 0;
      }
  }

  std::vector<std::vector<std::size_t>> run() {
    std::vector<std::size_t> all(rays_.size());
    std::iota(all.begin(), all.end(), 0);
    return triangulate(all, cone_.dim());
  }

 private:
  std::size_t rank_of(const std::vector<std::size_t>& idx) const {
    if (idx.empty()) return 0;
    std::vector<IntVector> cols;
    for (std::size_t i : idx) cols.push_back(rays_[i]);
    return lattice::rank(IntMatrix::from_columns(cols, cone_.dim()));
  }

  std::vector<std::vector<std::size_t>> triangulate(const std::vector<std::size_t>& face,
                                                    std::size_t dim) const {
    if (face.size() == dim) return {face};
    const std::size_t apex = apex_ == FanApex::first ? face.front() : face.back();
    std::set<std::vector<std::size_t>> facets;
    for (std::size_t i = 0; i < cone_.size(); ++i) {
      std::vector<std::size_t> sub;
      for (std::size_t r : face)
        if (zero_[r][i]) sub.push_back(r);
      if (sub.empty() || sub.size() == face.size()) continue;
      if (std::find(sub.begin(), sub.end(), apex) != sub.end()) continue;
      if (rank_of(sub) == dim - 1) facets.insert(std::move(sub));
    }
    std::vector<std::vector<std::size_t>> out;
    for (const auto& facet : facets)
      for (auto simplex : triangulate(facet, dim - 1)) {
        simplex.insert(simplex.begin(), apex);
        out.push_back(std::move(simplex));
      }
    return out;
  }

  const ConeSpec& cone_;
  const RayList& rays_;
  FanApex apex_;
  std::vector<std::vector<bool>> zero_;
};

std::vector<double> ray_pairings(const VolumeProfile& profile, std::span<const double> xi) {
  if (xi.size() != profile.dim) throw std::invalid_argument("volume: xi has the wrong length");
  std::vector<double> out;
  out.reserve(profile.rays.size());
  for (const auto& r : profile.rays) out.push_back(dot(r, xi));
  return out;
}

void require_interior(const std::vector<double>& pairings) {
  for (std::size_t r = 0; r < pairings.size(); ++r)
    if (!(pairings[r] > 0.0) || !std::isfinite(pairings[r])) {
      std::ostringstream msg;
      msg << "volume diverges: xi pairs to " << pairings[r] << " with ray " << r + 1;
      throw DivergenceError(msg.str());
    }
}

double piece_volume(const VolumeProfile& profile, const SimplicialPiece& piece,
                    const std::vector<double>& pairings) {
  const std::size_t n1 = profile.dim;
  double v = piece.det.convert_to<double>() * std::pow(0.5, static_cast<double>(n1)) / factorial(n1);
  for (std::size_t r : piece.rays) v /= pairings[r];
  return v;
}

std::vector<double> project_out(std::vector<double> g, std::span<const double> gamma) {
  const double f = dot(g, gamma) / dot(gamma, gamma);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= f * gamma[i];
  return g;
}

}  // namespace

std::string to_string(Provenance p) {
  return p == Provenance::closed_form ? "closed_form" : "minimized";
}

VolumeProfile make_volume_profile(const ConeSpec& cone, FanApex apex) {
  const RayList rays = dual_rays(cone);
  VolumeProfile profile;
  profile.dim = cone.dim();
  for (const auto& r : rays) profile.rays.push_back(lattice::to_doubles(r));
  profile.gamma = gorenstein_vector(cone);
  for (auto& simplex : Triangulator(cone, rays, apex).run()) {
    std::vector<IntVector> cols;
    for (std::size_t i : simplex) cols.push_back(rays[i]);
    Integer det = abs(lattice::determinant(IntMatrix::from_columns(cols, cone.dim())));
    if (det == 0) throw std::logic_error("make_volume_profile: degenerate simplicial piece");
    profile.triangulation.push_back({std::move(simplex), std::move(det)});
  }
  return profile;
}

double volume(const VolumeProfile& profile, std::span<const double> xi) {
  const auto pairings = ray_pairings(profile, xi);
  require_interior(pairings);
  double total = 0.0;
  for (const auto& piece : profile.triangulation) total += piece_volume(profile, piece, pairings);
  return total;
}

std::vector<double> volume_gradient(const VolumeProfile& profile, std::span<const double> xi) {
  const auto pairings = ray_pairings(profile, xi);
  require_interior(pairings);
  std::vector<double> grad(profile.dim, 0.0);
  for (const auto& piece : profile.triangulation) {
    const double v = piece_volume(profile, piece, pairings);
    for (std::size_t r : piece.rays)
      for (std::size_t k = 0; k < profile.dim; ++k)
        grad[k] -= v * profile.rays[r][k] / pairings[r];
  }
  return grad;
}

std::vector<double> projected_gradient(const VolumeProfile& profile, std::span<const double> xi) {
  if (!profile.gamma) throw UnsupportedConeError("projected_gradient: cone has no Gorenstein vector");
  return project_out(volume_gradient(profile, xi), lattice::to_doubles(*profile.gamma));
}

ReebSolution minimize_volume(const ConeSpec& cone, const MinimizeOptions& options) {
  const VolumeProfile profile = make_volume_profile(cone);
  if (!profile.gamma)
    throw UnsupportedConeError("minimize_volume: no integer vector pairs to 1 with every normal");
  const std::vector<double> gamma = lattice::to_doubles(*profile.gamma);
  const double level = static_cast<double>(cone.dim());

  // Sum of all normals pairs positively with every ray, so it starts inside.
  std::vector<double> xi(cone.dim(), 0.0);
  for (const auto& n : cone.normals())
    for (std::size_t j = 0; j < cone.dim(); ++j) xi[j] += n[j].convert_to<double>();
  const double scale = level / dot(gamma, xi);
  for (double& v : xi) v *= scale;

  auto feasible = [&](const std::vector<double>& x) {
    return std::all_of(profile.rays.begin(), profile.rays.end(),
                       [&](const std::vector<double>& r) { return dot(r, x) >= kMinPairing; });
  };

  std::deque<TraceEntry> trace;
  double value = volume(profile, xi);
  std::vector<double> pg = project_out(volume_gradient(profile, xi), gamma);
  double pg_norm = norm(pg);
  double alpha = norm(xi) / std::max(pg_norm, 1e-300) * 1e-2;
  constexpr double kArmijo = 1e-4;

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    trace.push_back({it, value, pg_norm, alpha});
    if (trace.size() > 25) trace.pop_front();
    // V is small on the slice, so an absolute gradient test alone stops early.
    if (pg_norm < options.tolerance && pg_norm < options.tolerance * value) {
      return {xi, value, pg_norm, Provenance::minimized, it};
    }

    std::vector<double> candidate(xi.size());
    double cand_value = 0.0;
    std::vector<double> cand_pg;
    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt, alpha *= 0.5) {
      for (std::size_t i = 0; i < xi.size(); ++i) candidate[i] = xi[i] - alpha * pg[i];
      if (!feasible(candidate)) continue;
      cand_value = volume(profile, candidate);
      if (cand_value <= value - kArmijo * alpha * pg_norm * pg_norm) {
        accepted = true;
      } else if (std::abs(cand_value - value) <= 16.0 * std::numeric_limits<double>::epsilon() * value) {
        // Function values no longer resolve the decrease; fall back to the gradient.
        cand_pg = project_out(volume_gradient(profile, candidate), gamma);
        accepted = norm(cand_pg) < pg_norm;
      }
      if (accepted) break;
    }
    if (!accepted) {
      std::ostringstream msg;
      msg << "minimize_volume: line search failed at iteration " << it
          << " with projected gradient norm " << pg_norm;
      throw NonConvergenceError(msg.str(), {trace.begin(), trace.end()});
    }
    if (cand_pg.empty()) cand_pg = project_out(volume_gradient(profile, candidate), gamma);

    // Barzilai-Borwein proposal for the next trial step.
    double ss = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
      const double s = candidate[i] - xi[i];
      ss += s * s;
      sy += s * (cand_pg[i] - pg[i]);
    }
    alpha = sy > 0.0 ? ss / sy : 2.0 * alpha;

    xi = candidate;
    value = cand_value;
    pg = std::move(cand_pg);
    pg_norm = norm(pg);
  }
  std::ostringstream msg;
  msg << "minimize_volume: no convergence after " << options.max_iterations
      << " iterations, projected gradient norm " << pg_norm;
  throw NonConvergenceError(msg.str(), {trace.begin(), trace.end()});
}

double ypq_inverse_l(long long p, long long q) {
  if (q < 1 || p <= q || std::gcd(p, q) != 1)
    throw std::invalid_argument("ypq_reeb: need coprime p > q >= 1");
  const auto pd = static_cast<double>(p);
  const auto qd = static_cast<double>(q);
  return (3.0 * qd * qd - 2.0 * pd * pd + pd * std::sqrt(4.0 * pd * pd - 3.0 * qd * qd)) / qd;
}

ReebSolution ypq_reeb(long long p, long long q) {
  const double inv_l = ypq_inverse_l(p, q);
  const double s = 0.5 * (3.0 * static_cast<double>(p - q) + inv_l);
  ReebSolution sol;
  sol.xi = {3.0, s, s};
  sol.provenance = Provenance::closed_form;
  const VolumeProfile profile = make_volume_profile(ypq_cone(p, q));
  sol.volume = volume(profile, sol.xi);
  sol.grad_norm = norm(projected_gradient(profile, sol.xi));
  return sol;
}

}  // namespace sasaki
