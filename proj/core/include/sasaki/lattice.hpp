// Exact integer linear algebra: Hermite and Smith normal forms, integer
// kernels, primitivity and saturation of sublattices.
//
// Every routine works on arbitrary-precision integers. Intermediate entries
// of HNF/SNF reductions grow quickly, so nothing here ever touches a
// fixed-width integer or a floating point value.

#ifndef SASAKI_LATTICE_HPP
#define SASAKI_LATTICE_HPP

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace sasaki::lattice {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntVector = std::vector<Integer>;

/// Dense integer matrix stored in row-major order.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);
  static IntMatrix from_columns(const std::vector<IntVector>& columns, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<const Integer> entries() const { return entries_; }

  IntVector row(std::size_t r) const;
  IntVector column(std::size_t c) const;
  std::vector<IntVector> columns() const;

  IntMatrix transpose() const;
  bool is_zero() const;
  bool is_diagonal() const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_columns(std::size_t a, std::size_t b);

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> entries_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, const IntVector& v);
std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

/// Smith normal form `left * input * right == diag(divisors)`.
struct SnfResult {
  std::vector<Integer> diag;  // min(rows, cols) entries, d_1 | d_2 | ...
  IntMatrix left;             // unimodular, rows x rows
  IntMatrix right;            // unimodular, cols x cols
};

/// Thrown by is_saturated when the input vectors are linearly dependent.
/// `witness` is a nonzero rational combination that vanishes.
class DependentVectorsError : public std::invalid_argument {
 public:
  DependentVectorsError(const std::string& what, std::vector<Rational> witness)
      : std::invalid_argument(what), witness_(std::move(witness)) {}
  const std::vector<Rational>& witness() const { return witness_; }

 private:
  std::vector<Rational> witness_;
};

/// Column-style Hermite normal form H = m * U with U unimodular.
/// H is lower echelon: each pivot is positive, entries left of a pivot lie in
/// [0, pivot), entries right of a pivot are zero, and zero columns trail.
IntMatrix hermite_normal_form(const IntMatrix& m);

/// Same as hermite_normal_form, also returning the unimodular transform.
IntMatrix hermite_normal_form(const IntMatrix& m, IntMatrix& transform);

SnfResult smith_normal_form(const IntMatrix& m);

/// Lattice basis (as columns) of {v in Z^cols : m v = 0}, canonicalized by
/// the column HNF. Returns a cols x 0 matrix when the kernel is trivial.
IntMatrix integer_kernel_basis(const IntMatrix& m);

/// Throws std::invalid_argument on the zero vector.
bool is_primitive(std::span<const Integer> v);

/// True iff span_R(vectors) meets Z^ambient_dim exactly in span_Z(vectors).
bool is_saturated(const std::vector<IntVector>& vectors, std::size_t ambient_dim);

Integer gcd_of(std::span<const Integer> v);
IntVector make_primitive(const IntVector& v);

/// Fraction-free (Bareiss) determinant of a square matrix.
Integer determinant(const IntMatrix& m);

std::size_t rank(const IntMatrix& m);

/// Rank over the field with two elements.
std::size_t rank_mod2(const IntMatrix& m);

/// Exact solution of the full-row-rank system m x = rhs with minimum Euclidean
/// norm, x = m^T (m m^T)^{-1} rhs. Throws std::domain_error if m m^T is singular.
std::vector<Rational> min_norm_solution(const IntMatrix& m, const std::vector<Rational>& rhs);

IntVector to_int_vector(std::initializer_list<long long> values);
std::vector<double> to_doubles(std::span<const Integer> v);
std::string to_string(std::span<const Integer> v);

}  // namespace sasaki::lattice

#endif  // SASAKI_LATTICE_HPP
