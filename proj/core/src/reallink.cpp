#include "sasaki/reallink.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "linprog.hpp"
#include "sasaki/reeb.hpp"

namespace sasaki {

namespace {

constexpr double kResidualTolerance = 1e-10;
constexpr double kDisplacementFloor = 1e-6;

Eigen::MatrixXd homogeneous_rows(const QuadricSystem& s) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(s.k()), static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.k(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          s.homogeneous(i, j).convert_to<double>();
  return a;
}

Eigen::VectorXd inhomogeneous_row(const QuadricSystem& s) {
  return Eigen::Map<const Eigen::VectorXd>(s.inhomogeneous.data(),
                                           static_cast<Eigen::Index>(s.size()));
}

// [A; b] with right-hand side [0; 1].
Eigen::MatrixXd stacked(const QuadricSystem& s) {
  const auto k = static_cast<Eigen::Index>(s.k());
  Eigen::MatrixXd m(k + 1, static_cast<Eigen::Index>(s.size()));
  m.topRows(k) = homogeneous_rows(s);
  m.row(k) = inhomogeneous_row(s).transpose();
  return m;
}

void check_shape(const QuadricSystem& s) {
  if (s.homogeneous.cols() != s.size() && s.k() > 0)
    throw std::invalid_argument("QuadricSystem: A and b disagree on the dimension");
}

std::size_t numeric_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++r;
  return r;
}

// Feasibility of P with the listed coordinates forced to zero.
bool face_nonempty(const QuadricSystem& s, const std::vector<std::size_t>& zero_coords) {
  const auto d = static_cast<Eigen::Index>(s.size());
  const Eigen::MatrixXd m = stacked(s);
  const auto extra = static_cast<Eigen::Index>(zero_coords.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m.rows() + extra, d);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m.rows() + extra);
  a.topRows(m.rows()) = m;
  b(m.rows() - 1) = 1.0;
  for (Eigen::Index i = 0; i < extra; ++i)
    a(m.rows() + i, static_cast<Eigen::Index>(zero_coords[static_cast<std::size_t>(i)])) = 1.0;
  const auto lp = detail::maximize(a, b, Eigen::VectorXd::Zero(d));
  return lp.status == detail::LpStatus::optimal;
}

std::uint64_t chain_seed(std::uint64_t master, std::size_t chain) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(chain), 0x5a5a17u};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::size_t count_components(const std::vector<std::vector<double>>& pts) {
  const std::size_t n = pts.size();
  if (n == 0) return 0;
  // epsilon = twice the largest nearest-neighbour distance
  double eps = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) nearest = std::min(nearest, distance(pts[i], pts[j]));
    if (std::isfinite(nearest)) eps = std::max(eps, nearest);
  }
  eps *= 2.0;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (distance(pts[i], pts[j]) <= eps) parent[find(i)] = find(j);
  std::size_t components = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (find(i) == i) ++components;
  return components;
}

struct ProductForm {
  std::array<std::size_t, 2> ellipse;
  std::array<std::size_t, 2> fiber;
};

// Looks for an equation supported on one coordinate pair with positive
// coefficients (an ellipse) plus an equation giving the other pair a positive
// radius over that ellipse (a circle fiber).
std::optional<ProductForm> find_product_form(const QuadricSystem& s) {
  const Eigen::MatrixXd a = homogeneous_rows(s);
  const Eigen::VectorXd b = inhomogeneous_row(s);
  const Eigen::VectorXd row_a = a.row(0).transpose();
  const double scale = std::max(row_a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  const double tol = 1e-9 * scale;

  const std::array<std::array<std::size_t, 4>, 6> splits = {{
      {0, 1, 2, 3}, {2, 3, 0, 1}, {0, 2, 1, 3}, {1, 3, 0, 2}, {0, 3, 1, 2}, {1, 2, 0, 3},
  }};
  for (const auto& sp : splits) {
    const std::size_t i = sp[0], j = sp[1], k = sp[2], l = sp[3];
    // alpha * a + beta * b vanishing on the fiber pair (k, l).
    const double det = row_a(k) * b(l) - row_a(l) * b(k);
    if (std::abs(det) > tol * scale) continue;
    double alpha = b(k), beta = -row_a(k);
    if (std::abs(alpha) + std::abs(beta) <= tol) {
      alpha = b(l);
      beta = -row_a(l);
    }
    if (std::abs(beta) <= tol) continue;
    const Eigen::VectorXd ellipse = (alpha * row_a + beta * b) / beta;  // ellipse . u = 1
    if (!(ellipse(i) > tol && ellipse(j) > tol)) continue;

    // Fiber equation r_k u_k + r_l u_l = rhs - r_i u_i - r_j u_j, positive on the ellipse.
    auto fiber_ok = [&](Eigen::VectorXd r, double rhs) {
      if (r(k) < 0) {
        r = -r;
        rhs = -rhs;
      }
      if (!(r(k) > tol && r(l) > tol)) return false;
      const double at_i = rhs - r(i) / ellipse(i);
      const double at_j = rhs - r(j) / ellipse(j);
      return at_i > tol && at_j > tol;
    };
    if (fiber_ok(row_a, 0.0) || fiber_ok(b, 1.0)) return ProductForm{{i, j}, {k, l}};
  }
  return std::nullopt;
}

std::string coord_pair(const std::array<std::size_t, 2>& c) {
  std::ostringstream os;
  os << "(x" << c[0] + 1 << ",x" << c[1] + 1 << ')';
  return os.str();
}

}  // namespace

std::vector<double> QuadricSystem::residuals(std::span<const double> x) const {
  if (x.size() != size()) throw std::invalid_argument("QuadricSystem: point has the wrong length");
  std::vector<double> out(k() + 1, 0.0);
  for (std::size_t i = 0; i < k(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      out[i] += homogeneous(i, j).convert_to<double>() * x[j] * x[j];
  for (std::size_t j = 0; j < size(); ++j) out[k()] += inhomogeneous[j] * x[j] * x[j];
  out[k()] -= 1.0;
  return out;
}

double QuadricSystem::max_residual(std::span<const double> x) const {
  double m = 0.0;
  for (double r : residuals(x)) m = std::max(m, std::abs(r));
  return m;
}

QuadricSystem build_system(const DelzantData& data, const ReebCoefficients& coeffs) {
  if (coeffs.b.size() != data.size())
    throw std::invalid_argument("build_system: coefficient vector has the wrong length");
  QuadricSystem s{data.kernel.transpose(), coeffs.b};
  if (!interior_point(s))
    throw InfeasibleSystemError("build_system: {A u = 0, b.u = 1, u >= 0} has empty interior");
  if (!polytope_bounded(s))
    throw InfeasibleSystemError("build_system: solution polytope is unbounded");
  return s;
}

QuadricSystem ypq_reference_system(long long p, long long q) {
  const double inv_l = ypq_inverse_l(p, q);
  const auto pd = static_cast<double>(p);
  const auto qd = static_cast<double>(q);
  QuadricSystem s;
  s.homogeneous = lattice::IntMatrix{{-(p + q), p, -(p - q), p}};
  s.inhomogeneous = {(3 * pd + 3 * qd - inv_l) / (2 * pd), 0.0, (3 * pd - 3 * qd + inv_l) / (2 * pd),
                     0.0};
  return s;
}

std::optional<std::vector<double>> interior_point(const QuadricSystem& s) {
  check_shape(s);
  // variables: u (d), t, slack (d), w;  u - t - slack = 0, [A; b] u = [0; 1], t + w = 1
  const auto d = static_cast<Eigen::Index>(s.size());
  const Eigen::MatrixXd m = stacked(s);
  const Eigen::Index rows = d + m.rows() + 1;
  const Eigen::Index vars = 2 * d + 2;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, vars);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(vars);
  for (Eigen::Index j = 0; j < d; ++j) {
    a(j, j) = 1.0;
    a(j, d) = -1.0;
    a(j, d + 1 + j) = -1.0;
  }
  a.block(d, 0, m.rows(), d) = m;
  rhs(d + m.rows() - 1) = 1.0;
  a(rows - 1, d) = 1.0;
  a(rows - 1, vars - 1) = 1.0;
  rhs(rows - 1) = 1.0;
  c(d) = 1.0;
  const auto lp = detail::maximize(a, rhs, c);
  if (lp.status != detail::LpStatus::optimal || lp.value <= 1e-12) return std::nullopt;
  return std::vector<double>(lp.x.data(), lp.x.data() + d);
}

bool polytope_bounded(const QuadricSystem& s) {
  check_shape(s);
  // maximize sum u over {A u = 0, b.u = 0, sum u <= 1, u >= 0}
  const auto d = static_cast<Eigen::Index>(s.size());
  const Eigen::MatrixXd m = stacked(s);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m.rows() + 1, d + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m.rows() + 1);
  a.topLeftCorner(m.rows(), d) = m;
  a.row(m.rows()).head(d).setOnes();
  a(m.rows(), d) = 1.0;
  rhs(m.rows()) = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d + 1);
  c.head(d).setOnes();
  const auto lp = detail::maximize(a, rhs, c);
  return lp.status == detail::LpStatus::optimal && lp.value <= 1e-9;
}

bool systems_equivalent(const QuadricSystem& s1, const QuadricSystem& s2, double tol) {
  if (s1.size() != s2.size()) return false;
  auto augmented = [](const QuadricSystem& s) {
    const Eigen::MatrixXd m = stacked(s);
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(m.rows(), m.cols() + 1);
    aug.leftCols(m.cols()) = m;
    aug(m.rows() - 1, m.cols()) = 1.0;
    for (Eigen::Index r = 0; r < aug.rows(); ++r) {
      const double n = aug.row(r).norm();
      if (n > 0.0) aug.row(r) /= n;
    }
    return aug;
  };
  const Eigen::MatrixXd m1 = augmented(s1);
  const Eigen::MatrixXd m2 = augmented(s2);
  Eigen::MatrixXd both(m1.rows() + m2.rows(), m1.cols());
  both << m1, m2;

  // An affine set is empty iff (0, ..., 0, 1) lies in the augmented row space.
  auto inconsistent = [&](const Eigen::MatrixXd& m) {
    Eigen::MatrixXd ext(m.rows() + 1, m.cols());
    ext << m, Eigen::RowVectorXd::Unit(m.cols(), m.cols() - 1);
    return numeric_rank(ext, tol) == numeric_rank(m, tol);
  };
  const bool empty1 = inconsistent(m1);
  const bool empty2 = inconsistent(m2);
  if (empty1 || empty2) return empty1 && empty2;

  const std::size_t r1 = numeric_rank(m1, tol);
  const std::size_t r2 = numeric_rank(m2, tol);
  return r1 == r2 && numeric_rank(both, tol) == r1;
}

Eigen::MatrixXd constraint_jacobian(const QuadricSystem& s, std::span<const double> x) {
  const auto k = static_cast<Eigen::Index>(s.k());
  const auto d = static_cast<Eigen::Index>(s.size());
  const Eigen::MatrixXd m = stacked(s);
  Eigen::MatrixXd j(k + 1, d);
  for (Eigen::Index r = 0; r <= k; ++r)
    for (Eigen::Index c = 0; c < d; ++c) j(r, c) = 2.0 * m(r, c) * x[static_cast<std::size_t>(c)];
  return j;
}

std::size_t jacobian_rank(const QuadricSystem& s, std::span<const double> x) {
  const Eigen::MatrixXd j = constraint_jacobian(s, x);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-9 * std::max(sv.size() > 0 ? sv(0) : 0.0, 1e-300);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++r;
  return r;
}

SampleSet sample(const QuadricSystem& s, std::size_t count, std::uint64_t seed,
                 const SampleOptions& options) {
  check_shape(s);
  const auto start = interior_point(s);
  if (!start) throw InfeasibleSystemError("sample: the solution polytope has empty interior");
  if (!polytope_bounded(s)) throw InfeasibleSystemError("sample: the solution polytope is unbounded");

  const Eigen::MatrixXd m = stacked(s);
  const auto d = static_cast<Eigen::Index>(s.size());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::MatrixXd raw_kernel = lu.kernel();
  const Eigen::MatrixXd basis =
      raw_kernel.cols() > 0 && raw_kernel.norm() > 0
          ? Eigen::MatrixXd(Eigen::HouseholderQR<Eigen::MatrixXd>(raw_kernel).householderQ() *
                            Eigen::MatrixXd::Identity(d, raw_kernel.cols()))
          : Eigen::MatrixXd(d, 0);
  const auto pinv = m.completeOrthogonalDecomposition();
  Eigen::VectorXd target = Eigen::VectorXd::Zero(m.rows());
  target(m.rows() - 1) = 1.0;

  const std::size_t chains = std::max<std::size_t>(1, options.chains);
  SampleSet out;
  out.seed = seed;
  out.points.assign(count, std::vector<double>(static_cast<std::size_t>(d)));
  out.jacobian_ranks.assign(count, 0);
  std::vector<double> chain_residual(chains, 0.0);
  std::vector<std::string> chain_error(chains);

  auto run_chain = [&](std::size_t c) {
    std::mt19937_64 rng(chain_seed(seed, c));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(start->data(), d);

    auto step = [&]() {
      if (basis.cols() == 0) return true;
      for (int attempt = 0; attempt < 100; ++attempt) {
        Eigen::VectorXd g(basis.cols());
        for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = gauss(rng);
        const Eigen::VectorXd dir = basis * g;
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < d; ++j) {
          if (dir(j) > 0) lo = std::max(lo, -u(j) / dir(j));
          if (dir(j) < 0) hi = std::min(hi, -u(j) / dir(j));
        }
        if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) continue;
        u += (lo + (hi - lo) * unit(rng)) * dir;
        u = u.cwiseMax(0.0);
        return true;
      }
      return false;
    };

    for (std::size_t i = 0; i < options.burn_in; ++i)
      if (!step()) {
        chain_error[c] = "hit-and-run could not find a feasible chord";
        return;
      }
    for (std::size_t idx = c; idx < count; idx += chains) {
      std::vector<double> x(static_cast<std::size_t>(d));
      bool ok = false;
      for (int retry = 0; retry < 20 && !ok; ++retry) {
        for (std::size_t t = 0; t < options.thinning; ++t)
          if (!step()) {
            chain_error[c] = "hit-and-run could not find a feasible chord";
            return;
          }
        // Pull back onto the affine hull to stop round-off drift.
        u -= pinv.solve(m * u - target);
        if ((u.array() <= 0.0).any()) continue;
        for (Eigen::Index j = 0; j < d; ++j)
          x[static_cast<std::size_t>(j)] = (coin(rng) ? -1.0 : 1.0) * std::sqrt(u(j));
        ok = s.max_residual(x) < kResidualTolerance;
      }
      if (!ok) {
        chain_error[c] = "sample residual stayed above tolerance after retries";
        return;
      }
      chain_residual[c] = std::max(chain_residual[c], s.max_residual(x));
      out.jacobian_ranks[idx] = jacobian_rank(s, x);
      out.points[idx] = std::move(x);
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, chains);
  if (workers == 1) {
    for (std::size_t c = 0; c < chains; ++c) run_chain(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chains; c = next++) run_chain(c);
      });
  }
  for (const auto& e : chain_error)
    if (!e.empty()) throw SamplerError("sample: " + e);
  out.residual_max = *std::max_element(chain_residual.begin(), chain_residual.end());
  return out;
}

TopologyReport classify_ypq(const QuadricSystem& s, const DeckGroup& deck,
                            const SampleSet& samples) {
  TopologyReport report;
  report.sample_components = count_components(samples.points);
  {
    std::ostringstream os;
    os << "epsilon-graph on " << samples.points.size() << " samples has "
       << report.sample_components << " component(s) (diagnostic only)";
    report.diagnostics.push_back(os.str());
  }

  std::size_t consistent = 0;
  for (const auto& x : samples.points)
    if (deck_orbit(x, deck).size() == deck.order()) ++consistent;
  report.covering_consistent = consistent == samples.points.size();

  if (s.k() == 0) {
    const bool ellipsoid = std::all_of(s.inhomogeneous.begin(), s.inhomogeneous.end(),
                                       [](double v) { return v > 0.0; });
    std::ostringstream sphere;
    sphere << "sphere S^" << s.size() - 1;
    report.upstairs = ellipsoid ? sphere.str() : "unclassified";
    if (deck.order() <= 1) {
      report.quotient = "no deck quotient; real " + sphere.str();
    } else {
      report.quotient = "unclassified";
      report.diagnostics.push_back("nontrivial deck group on a sphere is not classified");
    }
    if (!ellipsoid) report.diagnostics.push_back("inhomogeneous row is not positive definite");
    return report;
  }

  if (s.size() != 4 || s.k() != 1) {
    report.upstairs = "unclassified";
    report.quotient = "unclassified";
    report.diagnostics.push_back("classifier handles d = 4, k = 1 and k = 0 only");
    return report;
  }

  const auto product = find_product_form(s);
  if (product) {
    report.upstairs = "torus";
    report.ellipse_coords = product->ellipse;
    report.fiber_coords = product->fiber;
    report.diagnostics.push_back("ellipse in " + coord_pair(product->ellipse) +
                                 " times circle fiber in " + coord_pair(product->fiber));
  } else {
    report.upstairs = "unclassified";
    report.diagnostics.push_back("no ellipse-times-circle product form found");
  }

  bool all_translations = true;
  for (const auto& element : deck.elements) {
    if (element.is_identity()) continue;
    DeckAction act;
    act.element = element;
    std::vector<std::size_t> flipped;
    for (std::size_t j = 0; j < element.size(); ++j)
      if (element.flips(j)) flipped.push_back(j);
    act.free_structural = !face_nonempty(s, flipped);
    act.min_displacement = std::numeric_limits<double>::infinity();
    for (const auto& x : samples.points)
      act.min_displacement = std::min(act.min_displacement, distance(x, element.apply(x)));
    if (samples.points.empty()) act.min_displacement = 0.0;
    act.free = act.free_structural && act.min_displacement > kDisplacementFloor;

    bool translation = false;
    if (product) {
      auto flips_exactly = [&](std::initializer_list<std::size_t> coords) {
        return element.weight() == coords.size() &&
               std::all_of(coords.begin(), coords.end(), [&](std::size_t j) { return element.flips(j); });
      };
      const auto& e = product->ellipse;
      const auto& f = product->fiber;
      if (flips_exactly({e[0], e[1]})) {
        act.action = "antipodal on the ellipse " + coord_pair(e);
        translation = true;
      } else if (flips_exactly({f[0], f[1]})) {
        act.action = "antipodal on the circle fiber " + coord_pair(f);
        translation = true;
      } else if (element.weight() == 4) {
        act.action = "antipodal on both factors";
        translation = true;
      } else {
        act.action = "reflection on a factor";
      }
    } else {
      act.action = "sign flip " + element.str();
    }
    if (!(translation && act.free)) all_translations = false;
    report.actions.push_back(std::move(act));
  }

  if (product && all_translations) {
    report.quotient = "torus";
  } else {
    report.quotient = "unclassified";
    if (product) report.diagnostics.push_back("some deck element is not a free translation");
  }
  return report;
}

TopologyReport classify_ypq(const QuadricSystem& s, const DeckGroup& deck,
                            std::size_t sample_count, std::uint64_t seed) {
  return classify_ypq(s, deck, sample(s, sample_count, seed));
}

std::vector<std::vector<double>> deck_orbit(std::span<const double> x, const DeckGroup& deck) {
  std::vector<std::vector<double>> orbit;
  for (const auto& e : deck.elements) {
    auto y = e.apply(x);
    if (std::find(orbit.begin(), orbit.end(), y) == orbit.end()) orbit.push_back(std::move(y));
  }
  if (orbit.empty()) orbit.emplace_back(x.begin(), x.end());
  return orbit;
}

std::vector<double> quotient_representative(std::span<const double> x, const DeckGroup& deck) {
  auto orbit = deck_orbit(x, deck);
  return *std::min_element(orbit.begin(), orbit.end());
}

}  // namespace sasaki
