#include "sasaki/cone.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "linprog.hpp"

namespace sasaki {

using lattice::Integer;
using lattice::IntMatrix;
using lattice::IntVector;

namespace {

using Mask = std::uint32_t;

Integer pairing(const IntVector& a, const IntVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::string index_list(const std::vector<std::size_t>& idx) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i] + 1;
  os << '}';
  return os.str();
}

void for_each_subset(std::size_t n, std::size_t k,
                     const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == k) {
      fn(idx);
      return;
    }
    for (std::size_t i = start; i + (k - pos) <= n; ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
}

// Naive double description: every rank-(dim-1) subset of normals cuts a line;
// keep the generators on which all normals are nonnegative.
RayList extreme_rays_of_pointed(const ConeSpec& cone) {
  const std::size_t dim = cone.dim();
  std::set<IntVector> found;
  for_each_subset(cone.size(), dim - 1, [&](const std::vector<std::size_t>& subset) {
    std::vector<IntVector> rows;
    for (std::size_t i : subset) rows.push_back(cone.normal(i));
    const IntMatrix sub = IntMatrix::from_rows(rows, dim);
    const IntMatrix kernel = lattice::integer_kernel_basis(sub);
    if (kernel.cols() != 1) return;
    IntVector v = lattice::make_primitive(kernel.column(0));
    for (int sign : {1, -1}) {
      IntVector w = v;
      if (sign < 0)
        for (auto& x : w) x = -x;
      const bool inside = std::all_of(cone.normals().begin(), cone.normals().end(),
                                      [&](const IntVector& n) { return pairing(n, w) >= 0; });
      if (inside) found.insert(std::move(w));
    }
  });
  return RayList(found.begin(), found.end());
}

bool has_interior(const ConeSpec& cone) {
  // maximize t s.t. N (y+ - y-) - t - s = 0, t + w = 1, all variables >= 0.
  const auto d = static_cast<Eigen::Index>(cone.size());
  const auto n = static_cast<Eigen::Index>(cone.dim());
  const Eigen::Index vars = 2 * n + 1 + d + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d + 1, vars);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d + 1);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(vars);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = cone.normal(static_cast<std::size_t>(i))[static_cast<std::size_t>(j)]
                           .convert_to<double>();
      a(i, j) = v;
      a(i, n + j) = -v;
    }
    a(i, 2 * n) = -1.0;
    a(i, 2 * n + 1 + i) = -1.0;
  }
  a(d, 2 * n) = 1.0;
  a(d, vars - 1) = 1.0;
  b(d) = 1.0;
  c(2 * n) = 1.0;
  const auto lp = detail::maximize(a, b, c);
  return lp.status == detail::LpStatus::optimal && lp.value > 1e-9;
}

std::size_t rank_of_columns(const std::vector<IntVector>& vecs, std::size_t dim) {
  if (vecs.empty()) return 0;
  return lattice::rank(IntMatrix::from_columns(vecs, dim));
}

}  // namespace

ConeSpec::ConeSpec(std::size_t dim, std::vector<IntVector> normals, std::string name)
    : dim_(dim), normals_(std::move(normals)), name_(std::move(name)) {
  if (dim_ == 0) throw std::invalid_argument("ConeSpec: dimension must be positive");
  if (normals_.empty()) throw std::invalid_argument("ConeSpec: no normals given");
  if (normals_.size() > kMaxNormals)
    throw std::invalid_argument("ConeSpec: at most 16 normals are supported");
  for (std::size_t i = 0; i < normals_.size(); ++i)
    if (normals_[i].size() != dim_) {
      std::ostringstream msg;
      msg << "ConeSpec: normal " << i + 1 << " has length " << normals_[i].size()
          << ", expected " << dim_;
      throw std::invalid_argument(msg.str());
    }
}

IntMatrix ConeSpec::beta() const { return IntMatrix::from_columns(normals_, dim_); }

ValidationReport validate(const ConeSpec& cone) {
  ValidationReport report;
  const std::size_t dim = cone.dim();
  const std::size_t d = cone.size();

  for (std::size_t i = 0; i < d && report.primitive.passed; ++i) {
    const Integer g = lattice::gcd_of(cone.normal(i));
    if (g == 1) continue;
    std::ostringstream w;
    w << "normal " << i + 1 << ' ' << lattice::to_string(cone.normal(i));
    w << (g == 0 ? " is zero" : " is not primitive (gcd " + g.str() + ")");
    report.primitive = {false, w.str()};
  }

  const IntMatrix lineality = lattice::integer_kernel_basis(cone.beta().transpose());
  if (lineality.cols() > 0) {
    report.strongly_convex = {false, "cone contains the line spanned by " +
                                         lattice::to_string(lineality.column(0))};
  }

  if (!has_interior(cone)) {
    report.full_dimensional = {false, "cone has empty interior"};
  }

  if (!report.strongly_convex.passed || !report.full_dimensional.passed) {
    const std::string skipped = "not checked: requires a strongly convex full-dimensional cone";
    report.minimal = {false, skipped};
    report.good = {false, skipped};
    return report;
  }

  const RayList rays = extreme_rays_of_pointed(cone);

  for (std::size_t j = 0; j < d && report.minimal.passed; ++j) {
    std::vector<IntVector> on_facet;
    for (const auto& r : rays)
      if (pairing(cone.normal(j), r) == 0) on_facet.push_back(r);
    bool redundant = rank_of_columns(on_facet, dim) != dim - 1;
    std::size_t twin = j;
    if (!redundant && lattice::gcd_of(cone.normal(j)) != 0) {
      const IntVector pj = lattice::make_primitive(cone.normal(j));
      for (std::size_t i = 0; i < j; ++i)
        if (lattice::gcd_of(cone.normal(i)) != 0 && lattice::make_primitive(cone.normal(i)) == pj) {
          redundant = true;
          twin = i;
          break;
        }
    }
    if (redundant) {
      std::ostringstream w;
      w << "normal " << j + 1 << ' ' << lattice::to_string(cone.normal(j)) << " is redundant";
      if (twin != j) w << " (same facet as normal " << twin + 1 << ')';
      report.minimal = {false, w.str()};
    }
  }

  for (const Face& face : face_lattice(cone, rays)) {
    if (face.normals.empty()) continue;
    std::vector<IntVector> vecs;
    for (std::size_t i : face.normals) vecs.push_back(cone.normal(i));
    if (rank_of_columns(vecs, dim) != vecs.size()) {
      report.good = {false, "face cut by normals " + index_list(face.normals) +
                                " has linearly dependent normals"};
      break;
    }
    if (!lattice::is_saturated(vecs, dim)) {
      report.good = {false, "face cut by normals " + index_list(face.normals) +
                                " spans a non-saturated sublattice"};
      break;
    }
  }
  return report;
}

RayList dual_rays(const ConeSpec& cone) {
  const IntMatrix lineality = lattice::integer_kernel_basis(cone.beta().transpose());
  if (lineality.cols() > 0)
    throw std::domain_error("dual_rays: cone contains the line spanned by " +
                            lattice::to_string(lineality.column(0)));
  RayList rays = extreme_rays_of_pointed(cone);
  if (rank_of_columns(rays, cone.dim()) != cone.dim())
    throw std::domain_error("dual_rays: cone has empty interior");
  return rays;
}

FaceLattice face_lattice(const ConeSpec& cone, const RayList& rays) {
  const std::size_t d = cone.size();
  std::vector<Mask> zeros(rays.size(), 0);
  for (std::size_t r = 0; r < rays.size(); ++r)
    for (std::size_t i = 0; i < d; ++i)
      if (pairing(cone.normal(i), rays[r]) == 0) zeros[r] |= Mask{1} << i;

  // A face is determined by its ray set; its normal set is the closure.
  std::set<Mask> seen;
  std::vector<std::pair<Mask, Mask>> stack;  // (normals, rays)
  const Mask all_rays = rays.size() >= 32 ? ~Mask{0} : (Mask{1} << rays.size()) - 1;
  stack.emplace_back(0, all_rays);
  seen.insert(0);
  FaceLattice out;
  while (!stack.empty()) {
    auto [normals, ray_set] = stack.back();
    stack.pop_back();
    std::vector<IntVector> face_rays;
    for (std::size_t r = 0; r < rays.size(); ++r)
      if (ray_set & (Mask{1} << r)) face_rays.push_back(rays[r]);
    Face face;
    for (std::size_t i = 0; i < d; ++i)
      if (normals & (Mask{1} << i)) face.normals.push_back(i);
    face.dim = rank_of_columns(face_rays, cone.dim());
    out.push_back(std::move(face));

    for (std::size_t j = 0; j < d; ++j) {
      if (normals & (Mask{1} << j)) continue;
      Mask sub = 0;
      Mask closure = ~Mask{0};
      for (std::size_t r = 0; r < rays.size(); ++r)
        if ((ray_set & (Mask{1} << r)) && (zeros[r] & (Mask{1} << j))) {
          sub |= Mask{1} << r;
          closure &= zeros[r];
        }
      if (sub == 0) continue;
      if (seen.insert(closure).second) stack.emplace_back(closure, sub);
    }
  }
  std::sort(out.begin(), out.end(), [](const Face& a, const Face& b) {
    if (a.normals.size() != b.normals.size()) return a.normals.size() < b.normals.size();
    return a.normals < b.normals;
  });
  return out;
}

bool reeb_cone_contains(const RayList& rays, std::span<const double> xi) {
  for (const auto& r : rays) {
    if (r.size() != xi.size()) throw std::invalid_argument("reeb_cone_contains: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r[i].convert_to<double>() * xi[i];
    if (!(s > 0.0)) return false;
  }
  return !rays.empty();
}

bool reeb_cone_contains(const RayList& rays, std::span<const Integer> xi) {
  for (const auto& r : rays) {
    if (r.size() != xi.size()) throw std::invalid_argument("reeb_cone_contains: size mismatch");
    Integer s = 0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r[i] * xi[i];
    if (s <= 0) return false;
  }
  return !rays.empty();
}

bool reeb_cone_contains(const ConeSpec& cone, std::span<const double> xi) {
  return reeb_cone_contains(dual_rays(cone), xi);
}

std::optional<IntVector> gorenstein_vector(const ConeSpec& cone) {
  // Solve N gamma = 1 over the integers through the Smith form of N.
  const IntMatrix n = cone.beta().transpose();
  const auto snf = lattice::smith_normal_form(n);
  const IntVector rhs = snf.left * IntVector(cone.size(), Integer(1));
  IntVector y(cone.dim(), Integer(0));
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    const Integer di = i < snf.diag.size() ? snf.diag[i] : Integer(0);
    if (di == 0) {
      if (rhs[i] != 0) return std::nullopt;
      continue;
    }
    if (rhs[i] % di != 0) return std::nullopt;
    y[i] = rhs[i] / di;
  }
  return snf.right * y;
}

IntVector first_normals_sum(const ConeSpec& cone) {
  IntVector sum(cone.dim(), Integer(0));
  for (std::size_t i = 0; i < std::min(cone.dim(), cone.size()); ++i)
    for (std::size_t j = 0; j < cone.dim(); ++j) sum[j] += cone.normal(i)[j];
  return sum;
}

ConeSpec orthant(std::size_t dim) {
  std::vector<IntVector> normals;
  for (std::size_t i = 0; i < dim; ++i) {
    IntVector e(dim, Integer(0));
    e[i] = 1;
    normals.push_back(std::move(e));
  }
  return ConeSpec(dim, std::move(normals), "orthant");
}

ConeSpec ypq_cone(long long p, long long q) {
  if (q < 1 || p <= q || std::gcd(p, q) != 1) {
    std::ostringstream msg;
    msg << "Y^{p,q} needs coprime p > q >= 1, got p=" << p << " q=" << q;
    throw std::invalid_argument(msg.str());
  }
  std::vector<IntVector> normals = {
      lattice::to_int_vector({1, 0, 0}),
      lattice::to_int_vector({1, p - q - 1, p - q}),
      lattice::to_int_vector({1, p, p}),
      lattice::to_int_vector({1, 1, 0}),
  };
  std::ostringstream name;
  name << "Y^{" << p << ',' << q << '}';
  return ConeSpec(3, std::move(normals), name.str());
}

std::optional<std::pair<long long, long long>> match_ypq(const ConeSpec& cone) {
  if (cone.dim() != 3 || cone.size() != 4) return std::nullopt;
  const IntVector& l3 = cone.normal(2);
  if (l3[1] != l3[2] || l3[1] < 2 || l3[1] > Integer(1) << 40) return std::nullopt;
  const auto p = l3[1].convert_to<long long>();
  const Integer& l2z = cone.normal(1)[2];
  if (l2z < 1 || l2z >= p) return std::nullopt;
  const long long q = p - l2z.convert_to<long long>();
  if (std::gcd(p, q) != 1) return std::nullopt;
  if (ypq_cone(p, q).normals() != cone.normals()) return std::nullopt;
  return std::make_pair(p, q);
}

}  // namespace sasaki
