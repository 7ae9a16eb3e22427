#include "mmbarrier/tensor.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <string_view>

#include "mmbarrier/error.hpp"

namespace mmbarrier {
namespace {

std::string describe(const Triple& t) {
  return "(" + std::to_string(t.i) + "," + std::to_string(t.j) + "," + std::to_string(t.k) + ")";
}

void check_dims(const Dims& dims) {
  for (std::size_t d : dims) {
    if (d == 0) throw InvalidArgument("tensor dimension must be positive");
  }
}

bool in_range(const Triple& t, const Dims& dims) {
  return t.i < dims[0] && t.j < dims[1] && t.k < dims[2];
}

std::size_t checked_mul(std::size_t a, std::size_t b) {
  std::size_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw CapacityError("dimension overflow");
  return r;
}

std::size_t checked_add(std::size_t a, std::size_t b) {
  std::size_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw CapacityError("dimension overflow");
  return r;
}

void check_point_budget(std::size_t n) {
  if (n > kMaxSupportPoints) {
    throw CapacityError("support would have " + std::to_string(n) + " points, limit is " +
                        std::to_string(kMaxSupportPoints));
  }
}

Rational checked_product(const Rational& a, const Rational& b) {
  // Cross-reduce first so the products stay as small as possible.
  const std::int64_t g1 = std::gcd(a.numerator(), b.denominator());
  const std::int64_t g2 = std::gcd(b.numerator(), a.denominator());
  std::int64_t num = 0;
  std::int64_t den = 0;
  if (__builtin_mul_overflow(a.numerator() / g1, b.numerator() / g2, &num) ||
      __builtin_mul_overflow(a.denominator() / g2, b.denominator() / g1, &den)) {
    throw CapacityError("coefficient overflow in Kronecker product");
  }
  return Rational(num, den);
}

std::size_t parse_positive(std::string_view text, const std::string& id) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw InvalidArgument("malformed tensor id '" + id + "'");
  }
  return value;
}

std::vector<std::size_t> parse_list(std::string_view text, const std::string& id) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_positive(text.substr(start, comma - start), id));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::pair<Triple, Rational>> unit_entries(const std::vector<Triple>& points) {
  std::vector<std::pair<Triple, Rational>> entries;
  entries.reserve(points.size());
  for (const Triple& t : points) entries.emplace_back(t, Rational(1));
  return entries;
}

}  // namespace

TensorSupport::TensorSupport(Dims dims, std::vector<Triple> points)
    : dims_(dims), points_(std::move(points)) {
  check_dims(dims_);
  if (points_.empty()) throw InvalidArgument("support must be nonempty");
  for (const Triple& t : points_) {
    if (!in_range(t, dims_)) throw InvalidArgument("support point " + describe(t) + " out of range");
  }
  std::sort(points_.begin(), points_.end());
  const auto dup = std::adjacent_find(points_.begin(), points_.end());
  if (dup != points_.end()) throw InvalidArgument("duplicate support point " + describe(*dup));
}

bool TensorSupport::contains(const Triple& t) const {
  return std::binary_search(points_.begin(), points_.end(), t);
}

std::size_t TensorSupport::index_of(const Triple& t) const {
  const auto it = std::lower_bound(points_.begin(), points_.end(), t);
  if (it == points_.end() || *it != t) return points_.size();
  return static_cast<std::size_t>(it - points_.begin());
}

namespace {

std::vector<Triple> keys_of(const std::vector<std::pair<Triple, Rational>>& entries) {
  std::vector<Triple> keys;
  keys.reserve(entries.size());
  for (const auto& e : entries) keys.push_back(e.first);
  return keys;
}

}  // namespace

Tensor::Tensor(Dims dims, std::vector<std::pair<Triple, Rational>> entries)
    : support_(dims, keys_of(entries)), coeffs_(entries.size()) {
  for (const auto& [t, c] : entries) {
    if (c.numerator() == 0) throw InvalidArgument("zero coefficient at " + describe(t));
    coeffs_[support_.index_of(t)] = c;
  }
}

Rational Tensor::coefficient(const Triple& t) const {
  const std::size_t idx = support_.index_of(t);
  return idx == support_.size() ? Rational(0) : coeffs_[idx];
}

Tensor make_diagonal(std::size_t n) {
  if (n == 0) throw InvalidArgument("diagonal tensor needs n >= 1");
  check_point_budget(n);
  std::vector<Triple> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) points.push_back({i, i, i});
  return Tensor({n, n, n}, unit_entries(points));
}

Tensor make_matmul(std::size_t l, std::size_t m, std::size_t n) {
  if (l == 0 || m == 0 || n == 0) throw InvalidArgument("matrix multiplication tensor needs l, m, n >= 1");
  const Dims dims{checked_mul(l, m), checked_mul(m, n), checked_mul(n, l)};
  check_point_budget(checked_mul(dims[0], n));
  std::vector<Triple> points;
  points.reserve(l * m * n);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < n; ++k) points.push_back({i * m + j, j * n + k, k * l + i});
    }
  }
  return Tensor(dims, unit_entries(points));
}

Tensor make_cw_big(std::size_t q) {
  if (q == 0) throw InvalidArgument("CW_q needs q >= 1");
  check_point_budget(checked_add(checked_mul(3, q), 3));
  std::vector<Triple> points;
  for (std::size_t i = 1; i <= q; ++i) {
    points.push_back({i, i, 0});
    points.push_back({i, 0, i});
    points.push_back({0, i, i});
  }
  points.push_back({0, 0, q + 1});
  points.push_back({0, q + 1, 0});
  points.push_back({q + 1, 0, 0});
  return Tensor({q + 2, q + 2, q + 2}, unit_entries(points));
}

Tensor make_cw_small(std::size_t q) {
  if (q == 0) throw InvalidArgument("cw_q needs q >= 1");
  check_point_budget(checked_mul(3, q));
  std::vector<Triple> points;
  for (std::size_t i = 1; i <= q; ++i) {
    points.push_back({i, i, 0});
    points.push_back({i, 0, i});
    points.push_back({0, i, i});
  }
  return Tensor({q + 1, q + 1, q + 1}, unit_entries(points));
}

Tensor kronecker(const Tensor& s, const Tensor& t) {
  const Dims& ds = s.dims();
  const Dims& dt = t.dims();
  const Dims dims{checked_mul(ds[0], dt[0]), checked_mul(ds[1], dt[1]), checked_mul(ds[2], dt[2])};
  check_point_budget(checked_mul(s.support().size(), t.support().size()));

  std::vector<std::pair<Triple, Rational>> entries;
  entries.reserve(s.support().size() * t.support().size());
  const auto& ps = s.support().points();
  const auto& pt = t.support().points();
  for (std::size_t a = 0; a < ps.size(); ++a) {
    for (std::size_t b = 0; b < pt.size(); ++b) {
      const Triple x{ps[a].i * dt[0] + pt[b].i, ps[a].j * dt[1] + pt[b].j, ps[a].k * dt[2] + pt[b].k};
      entries.emplace_back(x, checked_product(s.coefficients()[a], t.coefficients()[b]));
    }
  }
  return Tensor(dims, std::move(entries));
}

Tensor direct_sum(const Tensor& s, const Tensor& t) {
  const Dims& ds = s.dims();
  const Dims& dt = t.dims();
  const Dims dims{checked_add(ds[0], dt[0]), checked_add(ds[1], dt[1]), checked_add(ds[2], dt[2])};
  check_point_budget(checked_add(s.support().size(), t.support().size()));

  std::vector<std::pair<Triple, Rational>> entries;
  entries.reserve(s.support().size() + t.support().size());
  for (std::size_t a = 0; a < s.support().size(); ++a) {
    entries.emplace_back(s.support().points()[a], s.coefficients()[a]);
  }
  for (std::size_t b = 0; b < t.support().size(); ++b) {
    const Triple& p = t.support().points()[b];
    entries.emplace_back(Triple{p.i + ds[0], p.j + ds[1], p.k + ds[2]}, t.coefficients()[b]);
  }
  return Tensor(dims, std::move(entries));
}

bool is_builtin_id(const std::string& id) {
  for (std::string_view prefix : {"diag:", "mm:", "cw:", "cwsmall:"}) {
    if (id.starts_with(prefix)) return true;
  }
  return false;
}

Tensor builtin_tensor(const std::string& id) {
  const std::size_t colon = id.find(':');
  if (colon == std::string::npos) throw InvalidArgument("unknown tensor id '" + id + "'");
  const std::string_view family = std::string_view(id).substr(0, colon);
  const std::string_view args = std::string_view(id).substr(colon + 1);

  if (family == "diag") return make_diagonal(parse_positive(args, id));
  if (family == "cw") return make_cw_big(parse_positive(args, id));
  if (family == "cwsmall") return make_cw_small(parse_positive(args, id));
  if (family == "mm") {
    const auto v = parse_list(args, id);
    if (v.size() != 3) throw InvalidArgument("mm id needs three sizes: '" + id + "'");
    return make_matmul(v[0], v[1], v[2]);
  }
  throw InvalidArgument("unknown tensor id '" + id + "'");
}

}  // namespace mmbarrier
