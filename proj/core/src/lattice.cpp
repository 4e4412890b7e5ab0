#include "sasaki/lattice.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <utility>

namespace sasaki::lattice {

namespace {

struct Bezout {
  Integer g, x, y;  // x*a + y*b == g >= 0
};

Bezout extended_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b;
  Integer old_s = 1, s = 0;
  Integer old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = std::move(r);
    r = std::move(tmp);
    tmp = old_s - q * s;
    old_s = std::move(s);
    s = std::move(tmp);
    tmp = old_t - q * t;
    old_t = std::move(t);
    t = std::move(tmp);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Replace columns (p, c) of m by (x*p + y*c, u*p + v*c).
void combine_columns(IntMatrix& m, std::size_t p, std::size_t c, const Integer& x,
                     const Integer& y, const Integer& u, const Integer& v) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Integer np = x * m(r, p) + y * m(r, c);
    Integer nc = u * m(r, p) + v * m(r, c);
    m(r, p) = std::move(np);
    m(r, c) = std::move(nc);
  }
}

void add_column_multiple(IntMatrix& m, std::size_t target, std::size_t source,
                         const Integer& factor) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, target) += factor * m(r, source);
}

void add_row_multiple(IntMatrix& m, std::size_t target, std::size_t source,
                      const Integer& factor) {
  for (std::size_t c = 0; c < m.cols(); ++c) m(target, c) += factor * m(source, c);
}

void negate_column(IntMatrix& m, std::size_t c) {
  for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = -m(r, c);
}

void negate_row(IntMatrix& m, std::size_t r) {
  for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = -m(r, c);
}

// Row echelon form over Q; returns the rank and the pivot column of each row.
std::size_t rational_echelon(std::vector<std::vector<Rational>>& a,
                             std::vector<std::size_t>* pivots = nullptr) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[rank], a[pivot]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    if (pivots) pivots->push_back(c);
    ++rank;
  }
  return rank;
}

}  // namespace

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
    for (long long v : row) entries_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("IntMatrix: row length mismatch");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVector>& columns, std::size_t rows) {
  IntMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows)
      throw std::invalid_argument("IntMatrix: column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

IntVector IntMatrix::row(std::size_t r) const {
  return IntVector(entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

std::vector<IntVector> IntMatrix::columns() const {
  std::vector<IntVector> out;
  out.reserve(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out.push_back(column(c));
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Integer& v) { return v == 0; });
}

bool IntMatrix::is_diagonal() const {
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (r != c && (*this)(r, c) != 0) return false;
  return true;
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
}

void IntMatrix::swap_columns(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("IntMatrix: shape mismatch in product");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(r, k) == 0) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += a(r, k) * b(k, c);
    }
  return out;
}

IntVector operator*(const IntMatrix& a, const IntVector& v) {
  if (a.cols() != v.size()) throw std::invalid_argument("IntMatrix: shape mismatch in product");
  IntVector out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out[r] += a(r, c) * v[c];
  return out;
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) os << ", ";
    os << to_string(m.row(r));
  }
  return os << ']';
}

IntMatrix hermite_normal_form(const IntMatrix& m) {
  IntMatrix unused;
  return hermite_normal_form(m, unused);
}

IntMatrix hermite_normal_form(const IntMatrix& m, IntMatrix& transform) {
  IntMatrix h = m;
  transform = IntMatrix::identity(m.cols());
  std::size_t pivot_col = 0;
  for (std::size_t r = 0; r < h.rows() && pivot_col < h.cols(); ++r) {
    for (std::size_t c = pivot_col + 1; c < h.cols(); ++c) {
      if (h(r, c) == 0) continue;
      const Integer a = h(r, pivot_col);
      const Integer b = h(r, c);
      const Bezout bz = extended_gcd(a, b);
      const Integer u = -b / bz.g;
      const Integer v = a / bz.g;
      combine_columns(h, pivot_col, c, bz.x, bz.y, u, v);
      combine_columns(transform, pivot_col, c, bz.x, bz.y, u, v);
    }
    if (h(r, pivot_col) == 0) continue;
    if (h(r, pivot_col) < 0) {
      negate_column(h, pivot_col);
      negate_column(transform, pivot_col);
    }
    const Integer pivot = h(r, pivot_col);
    for (std::size_t c = 0; c < pivot_col; ++c) {
      const Integer q = floor_div(h(r, c), pivot);
      if (q == 0) continue;
      add_column_multiple(h, c, pivot_col, -q);
      add_column_multiple(transform, c, pivot_col, -q);
    }
    ++pivot_col;
  }
  return h;
}

SnfResult smith_normal_form(const IntMatrix& m) {
  IntMatrix a = m;
  IntMatrix left = IntMatrix::identity(m.rows());
  IntMatrix right = IntMatrix::identity(m.cols());
  const std::size_t n = std::min(m.rows(), m.cols());

  for (std::size_t t = 0; t < n; ++t) {
    bool finished = false;
    while (true) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pi = t, pj = t;
      bool found = false;
      Integer best;
      for (std::size_t i = t; i < a.rows(); ++i)
        for (std::size_t j = t; j < a.cols(); ++j) {
          if (a(i, j) == 0) continue;
          Integer mag = abs(a(i, j));
          if (!found || mag < best) {
            best = std::move(mag);
            pi = i;
            pj = j;
            found = true;
          }
        }
      if (!found) {
        finished = true;
        break;
      }
      a.swap_rows(t, pi);
      left.swap_rows(t, pi);
      a.swap_columns(t, pj);
      right.swap_columns(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < a.rows(); ++i) {
        if (a(i, t) == 0) continue;
        const Integer q = a(i, t) / a(t, t);
        add_row_multiple(a, i, t, -q);
        add_row_multiple(left, i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < a.cols(); ++j) {
        if (a(t, j) == 0) continue;
        const Integer q = a(t, j) / a(t, t);
        add_column_multiple(a, j, t, -q);
        add_column_multiple(right, j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Enforce divisibility of the rest of the block by the pivot.
      bool divisible = true;
      for (std::size_t i = t + 1; i < a.rows() && divisible; ++i)
        for (std::size_t j = t + 1; j < a.cols(); ++j)
          if (a(i, j) % a(t, t) != 0) {
            add_row_multiple(a, t, i, Integer(1));
            add_row_multiple(left, t, i, Integer(1));
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (finished) break;
    if (a(t, t) < 0) {
      negate_row(a, t);
      negate_row(left, t);
    }
  }

  SnfResult out;
  out.diag.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.diag.push_back(a(i, i));
  out.left = std::move(left);
  out.right = std::move(right);
  return out;
}

IntMatrix integer_kernel_basis(const IntMatrix& m) {
  IntMatrix transform;
  const IntMatrix h = hermite_normal_form(m, transform);
  std::vector<IntVector> kernel;
  for (std::size_t c = 0; c < h.cols(); ++c) {
    bool zero = true;
    for (std::size_t r = 0; r < h.rows() && zero; ++r) zero = h(r, c) == 0;
    if (zero) kernel.push_back(transform.column(c));
  }
  if (kernel.empty()) return IntMatrix(m.cols(), 0);
  return hermite_normal_form(IntMatrix::from_columns(kernel, m.cols()));
}

Integer gcd_of(std::span<const Integer> v) {
  Integer g = 0;
  for (const Integer& x : v) g = gcd(g, abs(x));
  return g;
}

bool is_primitive(std::span<const Integer> v) {
  const Integer g = gcd_of(v);
  if (g == 0) throw std::invalid_argument("is_primitive: zero vector");
  return g == 1;
}

IntVector make_primitive(const IntVector& v) {
  const Integer g = gcd_of(v);
  if (g == 0) throw std::invalid_argument("make_primitive: zero vector");
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  return out;
}

bool is_saturated(const std::vector<IntVector>& vectors, std::size_t ambient_dim) {
  if (vectors.empty()) return true;
  const IntMatrix stacked = IntMatrix::from_columns(vectors, ambient_dim);
  const IntMatrix kernel = integer_kernel_basis(stacked);
  if (kernel.cols() > 0) {
    std::vector<Rational> witness;
    for (std::size_t i = 0; i < kernel.rows(); ++i) witness.emplace_back(kernel(i, 0));
    std::ostringstream msg;
    msg << "is_saturated: vectors are linearly dependent, witness combination "
        << to_string(kernel.column(0));
    throw DependentVectorsError(msg.str(), std::move(witness));
  }
  const SnfResult snf = smith_normal_form(stacked);
  return std::all_of(snf.diag.begin(), snf.diag.end(), [](const Integer& d) { return d == 1; });
}

Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      a.swap_rows(k, swap);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::size_t rank(const IntMatrix& m) {
  std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) a[r][c] = m(r, c);
  return rational_echelon(a);
}

std::size_t rank_mod2(const IntMatrix& m) {
  std::vector<std::vector<bool>> a(m.rows(), std::vector<bool>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) a[r][c] = (m(r, c) % 2) != 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && !a[pivot][c]) ++pivot;
    if (pivot == m.rows()) continue;
    std::swap(a[rank], a[pivot]);
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (r != rank && a[r][c])
        for (std::size_t k = c; k < m.cols(); ++k) a[r][k] = a[r][k] != a[rank][k];
    ++rank;
  }
  return rank;
}

std::vector<Rational> min_norm_solution(const IntMatrix& m, const std::vector<Rational>& rhs) {
  if (rhs.size() != m.rows()) throw std::invalid_argument("min_norm_solution: rhs size");
  const IntMatrix gram = m * m.transpose();
  const std::size_t n = gram.rows();
  std::vector<std::vector<Rational>> aug(n, std::vector<Rational>(n + 1));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug[r][c] = gram(r, c);
    aug[r][n] = rhs[r];
  }
  std::vector<std::size_t> pivots;
  const std::size_t rk = rational_echelon(aug, &pivots);
  if (rk < n || (rk > 0 && pivots.back() >= n))
    throw std::domain_error("min_norm_solution: matrix does not have full row rank");
  std::vector<Rational> y(n);
  for (std::size_t r = 0; r < n; ++r) y[r] = aug[r][n] / aug[r][pivots[r]];
  std::vector<Rational> x(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (std::size_t r = 0; r < n; ++r) x[c] += Rational(m(r, c)) * y[r];
  return x;
}

IntVector to_int_vector(std::initializer_list<long long> values) {
  IntVector v;
  v.reserve(values.size());
  for (long long x : values) v.emplace_back(x);
  return v;
}

std::vector<double> to_doubles(std::span<const Integer> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const Integer& x : v) out.push_back(x.convert_to<double>());
  return out;
}

std::string to_string(std::span<const Integer> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  os << ')';
  return os.str();
}

}  // namespace sasaki::lattice
