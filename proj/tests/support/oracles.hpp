#pragma once

// Independent dense reference implementations used only by the tests. They
// share nothing with the library beyond GMP rationals and the public types
// they read inputs from.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gshift/chains.hpp"
#include "gshift/operator.hpp"
#include "gshift/vector.hpp"

namespace oracle {

using Q = mpq_class;
using Matrix = std::vector<std::vector<Q>>;  // row-major
using Vec = std::vector<Q>;

inline Matrix zeros(std::size_t r, std::size_t c) { return Matrix(r, std::vector<Q>(c, Q(0))); }

inline Matrix identity(std::size_t n) {
  Matrix m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  Matrix out = zeros(a.size(), b.empty() ? 0 : b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (sgn(a[i][k]) == 0) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

inline Vec multiply(const Matrix& a, const Vec& v) {
  Vec out(a.size(), Q(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  return out;
}

/// Rank by plain Gaussian elimination over Q.
inline std::size_t rank(Matrix m) {
  std::size_t r = 0;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (sgn(m[i][c]) == 0) continue;
      const Q f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

/// Gauss-Jordan inverse; nullopt when singular.
inline std::optional<Matrix> inverse(Matrix m) {
  const std::size_t n = m.size();
  Matrix inv = identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m[p][c]) == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(inv[p], inv[c]);
    const Q d = m[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      m[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || sgn(m[i][c]) == 0) continue;
      const Q f = m[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] -= f * m[c][j];
        inv[i][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

/// Solves sum_k c_k cols[k] = target; nullopt when inconsistent. Columns must
/// be independent.
inline std::optional<Vec> solve_columns(const std::vector<Vec>& cols, const Vec& target) {
  const std::size_t n = target.size();
  const std::size_t k = cols.size();
  Matrix aug = zeros(n, k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) aug[i][j] = cols[j][i];
    aug[i][k] = target[i];
  }
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < k && r < n; ++c) {
    std::size_t p = r;
    while (p < n && sgn(aug[p][c]) == 0) ++p;
    if (p == n) continue;
    std::swap(aug[p], aug[r]);
    const Q d = aug[r][c];
    for (std::size_t j = 0; j <= k; ++j) aug[r][j] /= d;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || sgn(aug[i][c]) == 0) continue;
      const Q f = aug[i][c];
      for (std::size_t j = 0; j <= k; ++j) aug[i][j] -= f * aug[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < n; ++i)
    if (sgn(aug[i][k]) != 0) return std::nullopt;
  Vec out(k, Q(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) out[pivots[i]] = aug[i][k];
  return out;
}

/// Dense coordinates 1..dim of a real exact sparse vector.
inline Vec dense(const gshift::SparseVector& v, std::size_t dim) {
  Vec out(dim, Q(0));
  for (const auto& [n, s] : v.entries()) {
    if (n < 1 || static_cast<std::size_t>(n) > dim) throw std::runtime_error("oracle: coordinate outside window");
    out[static_cast<std::size_t>(n - 1)] = s.real_rational();
  }
  return out;
}

/// Columns S e_j over coordinates 1..dim, read from single applications.
inline Matrix matrix_of(const gshift::OperatorExpr& op, std::size_t dim) {
  Matrix m = zeros(dim, dim);
  for (std::size_t j = 1; j <= dim; ++j) {
    const auto image = gshift::apply(op, gshift::SparseVector::unit(static_cast<gshift::Coord>(j)));
    const Vec col = dense(image, dim);
    for (std::size_t i = 0; i < dim; ++i) m[i][j - 1] = col[i];
  }
  return m;
}

/// Deterministic small rationals p/q with |p| <= num_max, 1 <= q <= den_max.
class RationalSource {
 public:
  explicit RationalSource(std::uint64_t seed) : rng_(seed) {}
  Q next(int num_max = 5, int den_max = 4) {
    const auto p = static_cast<long>(rng_() % static_cast<std::uint64_t>(2 * num_max + 1)) - num_max;
    const auto q = static_cast<long>(rng_() % static_cast<std::uint64_t>(den_max)) + 1;
    Q out(p, q);
    out.canonicalize();
    return out;
  }
  Q nonzero(int num_max = 5, int den_max = 4) {
    for (;;) {
      Q v = next(num_max, den_max);
      if (sgn(v) != 0) return v;
    }
  }
  std::uint64_t raw() { return rng_(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

 private:
  std::mt19937_64 rng_;
};

/// Random invertible matrix: unit lower times unit upper with small entries.
inline Matrix random_invertible(RationalSource& src, std::size_t n) {
  Matrix l = identity(n);
  Matrix u = identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      l[i][j] = src.next(2, 2);
      u[j][i] = src.next(2, 2);
    }
  return multiply(l, u);
}

/// Random strictly upper-triangular matrix; each superdiagonal entry is zero
/// with probability `zero_super`.
inline Matrix random_strict_upper(RationalSource& src, std::size_t n, double zero_super) {
  Matrix m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1) {
        const bool zero = static_cast<double>(src.raw() % 1000) < zero_super * 1000.0;
        m[i][j] = zero ? Q(0) : src.nonzero();
      } else {
        m[i][j] = src.next();
      }
    }
  return m;
}

inline gshift::DenseMatrix to_dense_matrix(const Matrix& m) {
  gshift::DenseMatrix out(m.size(), m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = gshift::Scalar(m[i][j]);
  return out;
}

inline gshift::SparseVector column_vector(const Matrix& m, std::size_t j) {
  gshift::SparseVector v;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (sgn(m[i][j]) != 0) v.set(static_cast<gshift::Coord>(i + 1), gshift::Scalar(m[i][j]));
  return v;
}

/// Exact squared l2 norm of a real exact vector.
inline Q norm2_squared(const gshift::SparseVector& v) {
  Q out = 0;
  for (const auto& [n, s] : v.entries()) {
    const auto& e = s.exact();
    out += e.re * e.re + e.im * e.im;
  }
  return out;
}

/// Largest coordinate touched by the family or consumed from the provider.
inline std::size_t family_dimension(const gshift::ChainFamily& family) {
  std::size_t dim = family.consumed.size();
  for (const auto& c : family.chains)
    for (const auto& v : c.vectors)
      for (auto coord : v.support()) dim = std::max<std::size_t>(dim, static_cast<std::size_t>(coord));
  return dim;
}

/// Dense re-check of the six chain conditions for a family built from the
/// standard provider. Returns an empty string when all hold, otherwise the
/// first violated condition.
inline std::string check_family(const gshift::OperatorExpr& s, const gshift::ChainFamily& family) {
  const std::size_t dim = family_dimension(family);
  const Matrix sm = matrix_of(s, dim);
  auto stacked_rank = [&](const std::vector<Vec>& rows) { return rows.empty() ? std::size_t{0} : rank(rows); };
  std::vector<Vec> e_prev;
  for (std::size_t l = 0; l < family.chains.size(); ++l) {
    const auto& ys = family.chains[l].vectors;
    const std::string at = " at chain " + std::to_string(l + 1);
    if (ys.empty()) return "empty chain" + at;
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      if (multiply(sm, dense(ys[j], dim)) != dense(ys[j + 1], dim)) return "shift-cond" + at;
    }
    const std::size_t r_prev = stacked_rank(e_prev);
    auto with_tail = e_prev;
    with_tail.push_back(multiply(sm, dense(ys.back(), dim)));
    if (stacked_rank(with_tail) != r_prev) return "shift-cond2" + at;
    auto e_m = e_prev;
    for (const auto& y : ys) e_m.push_back(dense(y, dim));
    const std::size_t r_m = stacked_rank(e_m);
    if (r_m != r_prev + ys.size()) return "ind-cond" + at;
    const std::size_t source = family.chains[l].source;
    if (source < 1 || ys.front() != gshift::SparseVector::unit(static_cast<gshift::Coord>(source))) return "use-only-xns" + at;
    for (std::size_t k = 1; k <= source; ++k) {
      auto probe = e_m;
      probe.push_back(dense(gshift::SparseVector::unit(static_cast<gshift::Coord>(k)), dim));
      if (stacked_rank(probe) != r_m) return "useupxns" + at;
    }
    e_prev = std::move(e_m);
  }
  if (stacked_rank(e_prev) != e_prev.size()) return "ys-lin-indep";
  return {};
}

}  // namespace oracle
