#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace mmbarrier {

using Rational = boost::rational<std::int64_t>;
using Dims = std::array<std::size_t, 3>;

/// A support point (i, j, k), 0-based along each axis.
struct Triple {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;

  std::size_t operator[](std::size_t axis) const { return axis == 0 ? i : (axis == 1 ? j : k); }

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// Dimensions plus the set of nonzero index triples of a 3-tensor.
///
/// Points are kept sorted lexicographically, so two supports describing the
/// same set compare equal and iterate in the same order.
class TensorSupport {
 public:
  /// Throws InvalidArgument on empty point sets, zero dimensions,
  /// out-of-range or duplicate triples.
  TensorSupport(Dims dims, std::vector<Triple> points);

  const Dims& dims() const { return dims_; }
  std::size_t dim(std::size_t axis) const { return dims_[axis]; }
  const std::vector<Triple>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  bool contains(const Triple& t) const;
  /// Position of `t` in points(), or size() when absent.
  std::size_t index_of(const Triple& t) const;

  friend bool operator==(const TensorSupport&, const TensorSupport&) = default;

 private:
  Dims dims_;
  std::vector<Triple> points_;
};

/// A sparse 3-tensor with exact rational coefficients.
///
/// Coefficients are stored in the order of support().points(); every one is
/// nonzero. Only the support enters the functionals, the coefficients gate
/// membership.
class Tensor {
 public:
  /// Entries may come in any order. Throws InvalidArgument on zero
  /// coefficients, duplicates or out-of-range triples.
  Tensor(Dims dims, std::vector<std::pair<Triple, Rational>> entries);

  const TensorSupport& support() const { return support_; }
  const Dims& dims() const { return support_.dims(); }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  Rational coefficient(const Triple& t) const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  TensorSupport support_;
  std::vector<Rational> coeffs_;
};

/// Unit tensor sum_i x_i y_i z_i.
Tensor make_diagonal(std::size_t n);

/// Matrix multiplication tensor <l,m,n> = sum x_{ij} y_{jk} z_{ki}.
///
/// Pair indices are flattened row-major: x_{ij} -> i*m + j, y_{jk} -> j*n + k,
/// z_{ki} -> k*l + i, giving dims (l*m, m*n, n*l).
Tensor make_matmul(std::size_t l, std::size_t m, std::size_t n);

/// Big Coppersmith-Winograd tensor CW_q on labels {0, ..., q+1}.
Tensor make_cw_big(std::size_t q);

/// Small Coppersmith-Winograd tensor cw_q on labels {0, ..., q}.
Tensor make_cw_small(std::size_t q);

/// Kronecker product; pair (a, b) flattens to a * dim(T) + b on every axis.
Tensor kronecker(const Tensor& s, const Tensor& t);

/// Block direct sum; T's indices are shifted by the dims of S.
Tensor direct_sum(const Tensor& s, const Tensor& t);

/// Resolves `diag:n`, `mm:l,m,n`, `cw:q` or `cwsmall:q`.
/// Throws InvalidArgument for anything else.
Tensor builtin_tensor(const std::string& id);

/// True when `id` has one of the built-in prefixes.
bool is_builtin_id(const std::string& id);

/// Hard limit on the number of support points any constructor may produce.
inline constexpr std::size_t kMaxSupportPoints = std::size_t{1} << 24;

}  // namespace mmbarrier
