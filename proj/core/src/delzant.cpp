#include "sasaki/delzant.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

namespace sasaki {

using lattice::Integer;
using lattice::IntMatrix;
using lattice::Rational;

namespace {

std::string summarize(const ValidationReport& r) {
  std::ostringstream os;
  os << "cone failed validation:";
  for (const auto* v : {&r.primitive, &r.strongly_convex, &r.full_dimensional, &r.minimal, &r.good})
    if (!v->passed) os << ' ' << v->witness << ';';
  return os.str();
}

DeckGroup span_of(std::size_t d, const std::vector<std::uint32_t>& generators) {
  std::set<std::uint32_t> elements = {0};
  for (std::uint32_t g : generators) {
    std::set<std::uint32_t> next = elements;
    for (std::uint32_t e : elements) next.insert(e ^ g);
    elements = std::move(next);
  }
  DeckGroup group;
  group.size = d;
  for (std::uint32_t e : elements) group.elements.emplace_back(d, e);
  std::sort(group.elements.begin(), group.elements.end());
  return group;
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error(summarize(report)), report_(std::move(report)) {}

SignVector::SignVector(std::size_t size, std::uint32_t bits) : size_(size), bits_(bits) {
  if (size > 32) throw std::invalid_argument("SignVector: at most 32 coordinates");
  if (size < 32 && (bits >> size) != 0) throw std::invalid_argument("SignVector: stray bits");
}

SignVector SignVector::parse(const std::string& pattern) {
  std::uint32_t bits = 0;
  for (std::size_t j = 0; j < pattern.size(); ++j) {
    if (pattern[j] == '1')
      bits |= 1u << j;
    else if (pattern[j] != '0')
      throw std::invalid_argument("SignVector: pattern must contain only 0 and 1");
  }
  return SignVector(pattern.size(), bits);
}

std::size_t SignVector::weight() const { return static_cast<std::size_t>(std::popcount(bits_)); }

SignVector SignVector::operator^(const SignVector& other) const {
  if (size_ != other.size_) throw std::invalid_argument("SignVector: size mismatch");
  return SignVector(size_, bits_ ^ other.bits_);
}

std::string SignVector::str() const {
  std::string s(size_, '0');
  for (std::size_t j = 0; j < size_; ++j)
    if (flips(j)) s[j] = '1';
  return s;
}

std::vector<double> SignVector::apply(std::span<const double> x) const {
  if (x.size() != size_) throw std::invalid_argument("SignVector::apply: size mismatch");
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t j = 0; j < size_; ++j)
    if (flips(j)) out[j] = -out[j];
  return out;
}

bool DeckGroup::contains(const SignVector& s) const {
  return std::find(elements.begin(), elements.end(), s) != elements.end();
}

DelzantData build_delzant(const ConeSpec& cone) {
  ValidationReport report = validate(cone);
  if (!report.ok()) throw ValidationError(std::move(report));

  DelzantData data;
  data.beta = cone.beta();
  data.kernel = lattice::integer_kernel_basis(data.beta);
  data.k = data.kernel.cols();
  data.torsion_rank = cone.size() - lattice::rank_mod2(data.beta);
  data.beta_divisors = lattice::smith_normal_form(data.beta).diag;

  if (!(data.beta * data.kernel).is_zero())
    throw std::logic_error("build_delzant: beta * A is not zero");
  if (data.k + cone.dim() != cone.size())
    throw std::logic_error("build_delzant: kernel rank does not equal d - (n+1)");
  const auto kernel_snf = lattice::smith_normal_form(data.kernel);
  data.kernel_saturated = std::all_of(kernel_snf.diag.begin(), kernel_snf.diag.end(),
                                      [](const Integer& v) { return v == 1; });
  return data;
}

DeckGroup deck_group(const DelzantData& data) {
  const std::size_t rows = data.dim();
  const std::size_t d = data.size();
  // Reduced row echelon form of beta mod 2, one bitmask per row.
  std::vector<std::uint32_t> reduced(rows, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < d; ++c)
      if (data.beta(r, c) % 2 != 0) reduced[r] |= 1u << c;

  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < d && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && !((reduced[p] >> c) & 1u)) ++p;
    if (p == rows) continue;
    std::swap(reduced[rank], reduced[p]);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != rank && ((reduced[r] >> c) & 1u)) reduced[r] ^= reduced[rank];
    pivot_cols.push_back(c);
    ++rank;
  }

  std::vector<std::uint32_t> generators;
  for (std::size_t free = 0; free < d; ++free) {
    if (std::find(pivot_cols.begin(), pivot_cols.end(), free) != pivot_cols.end()) continue;
    std::uint32_t v = 1u << free;
    for (std::size_t r = 0; r < rank; ++r)
      if ((reduced[r] >> free) & 1u) v |= 1u << pivot_cols[r];
    generators.push_back(v);
  }
  return span_of(d, generators);
}

DeckGroup deck_group_from_kernel(const DelzantData& data) {
  // exp(2 pi i A m / 2) multiplies z_j by (-1)^{(A m)_j}.
  std::vector<std::uint32_t> generators;
  for (std::size_t i = 0; i < data.k; ++i) {
    std::uint32_t v = 0;
    for (std::size_t j = 0; j < data.size(); ++j)
      if (data.kernel(j, i) % 2 != 0) v |= 1u << j;
    generators.push_back(v);
  }
  return span_of(data.size(), generators);
}

std::vector<Rational> reeb_coefficients_exact(const DelzantData& data,
                                              std::span<const Rational> xi) {
  if (xi.size() != data.dim())
    throw std::invalid_argument("reeb_coefficients: xi has the wrong length");
  return lattice::min_norm_solution(data.beta, std::vector<Rational>(xi.begin(), xi.end()));
}

ReebCoefficients reeb_coefficients(const DelzantData& data, std::span<const double> xi) {
  std::vector<Rational> exact;
  exact.reserve(xi.size());
  for (double v : xi) exact.emplace_back(v);
  ReebCoefficients out;
  for (const Rational& v : reeb_coefficients_exact(data, exact)) out.b.push_back(v.convert_to<double>());
  return out;
}

SignVector ypq_tabulated_deck_element(long long p, long long q) {
  if (p % 2 == 0) return SignVector::parse("0001");
  if (q % 2 != 0) return SignVector::parse("0010");
  return SignVector::parse("0011");
}

}  // namespace sasaki
