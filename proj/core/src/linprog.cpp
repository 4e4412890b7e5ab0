#include "linprog.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace sasaki::detail {

namespace {

constexpr int kMaxPivots = 50000;

struct Tableau {
  Eigen::MatrixXd t;  // constraint rows, then the objective row; rhs in the last column
  std::vector<Eigen::Index> basis;

  Eigen::Index rows() const { return t.rows() - 1; }
  Eigen::Index rhs() const { return t.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t.row(r) /= t(r, c);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (i == r || t(i, c) == 0.0) continue;
      t.row(i) -= t(i, c) * t.row(r);
    }
    basis[static_cast<std::size_t>(r)] = c;
  }

  // Runs simplex over columns [0, allowed). Returns false when unbounded.
  bool run(Eigen::Index allowed, double eps) {
    for (int it = 0; it < kMaxPivots; ++it) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j)
        if (t(rows(), j) < -eps) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows(); ++i) {
        if (t(i, enter) <= eps) continue;
        const double ratio = t(i, rhs()) / t(i, enter);
        if (ratio < best - eps ||
            (std::abs(ratio - best) <= eps && leave >= 0 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }
};

}  // namespace

LpResult maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  double eps) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  LpResult result;

  Tableau ph1;
  ph1.t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  ph1.basis.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b(i) < 0 ? -1.0 : 1.0;
    ph1.t.row(i).head(n) = sign * a.row(i);
    ph1.t(i, n + i) = 1.0;
    ph1.t(i, n + m) = sign * b(i);
    ph1.basis[static_cast<std::size_t>(i)] = n + i;
    ph1.t.row(m) -= ph1.t.row(i);
  }
  for (Eigen::Index i = 0; i < m; ++i) ph1.t(m, n + i) = 0.0;
  ph1.run(n + m, eps);

  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  if (m > 0 && -ph1.t(m, n + m) > 1e3 * eps * scale) return result;

  // Drive artificial variables out of the basis; drop redundant rows.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (ph1.basis[static_cast<std::size_t>(i)] < n) {
      keep.push_back(i);
      continue;
    }
    Eigen::Index col = -1;
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(ph1.t(i, j)) > 1e3 * eps) {
        col = j;
        break;
      }
    if (col >= 0) {
      ph1.pivot(i, col);
      keep.push_back(i);
    }
  }

  Tableau ph2;
  const auto rows = static_cast<Eigen::Index>(keep.size());
  ph2.t = Eigen::MatrixXd::Zero(rows + 1, n + 1);
  ph2.basis.resize(keep.size());
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index src = keep[static_cast<std::size_t>(r)];
    ph2.t.row(r).head(n) = ph1.t.row(src).head(n);
    ph2.t(r, n) = ph1.t(src, n + m);
    ph2.basis[static_cast<std::size_t>(r)] = ph1.basis[static_cast<std::size_t>(src)];
  }
  ph2.t.row(rows).head(n) = -c.transpose();
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index bc = ph2.basis[static_cast<std::size_t>(r)];
    const double f = ph2.t(rows, bc);
    if (f != 0.0) ph2.t.row(rows) -= f * ph2.t.row(r);
  }
  if (!ph2.run(n, eps)) {
    result.status = LpStatus::unbounded;
    return result;
  }

  result.status = LpStatus::optimal;
  result.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index r = 0; r < rows; ++r)
    result.x(ph2.basis[static_cast<std::size_t>(r)]) = std::max(0.0, ph2.t(r, n));
  result.value = c.dot(result.x);
  return result;
}

}  // namespace sasaki::detail
