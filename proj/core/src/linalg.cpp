#include "gshift/linalg.hpp"

#include <algorithm>
#include <numeric>

#include "gshift/errors.hpp"

namespace gshift {

namespace {

using Combination = std::map<std::size_t, Scalar>;

void accumulate(Combination& target, const Scalar& factor, const Combination& source) {
  for (const auto& [index, value] : source) {
    auto [it, inserted] = target.try_emplace(index, factor * value);
    if (!inserted) {
      it->second += factor * value;
      if (it->second.is_zero()) target.erase(it);
    }
  }
}

double max_abs(const SparseVector& v) {
  double best = 0.0;
  for (const auto& [index, value] : v.entries()) best = std::max(best, value.abs());
  return best;
}

}  // namespace

DenseMatrix DenseMatrix::identity(std::size_t n, ArithmeticMode mode) {
  DenseMatrix m(n, n, mode);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(mode);
  return m;
}

// ---------------------------------------------------------------------------

EchelonBasis::Reduction EchelonBasis::reduce(const SparseVector& v) const {
  Reduction out{v, {}};
  if (rows_.empty()) return out;
  // Rows vanish at every pivot but their own, so the pivot entries of v are
  // untouched while other rows are subtracted.
  for (const auto& [index, value] : v.entries()) {
    const auto it = pivot_row_.find(index);
    if (it == pivot_row_.end()) continue;
    const Row& row = rows_[it->second];
    out.residual.axpy(-value, row.reduced);
    accumulate(out.coefficients, value, row.combination);
  }
  if (mode_ == ArithmeticMode::floating) out.residual.chop(kFloatRankTolerance * std::max(1.0, max_abs(v)));
  return out;
}

bool EchelonBasis::contains(const SparseVector& v) const {
  return reduce(v).residual.empty();
}

bool EchelonBasis::insert(const SparseVector& v) {
  if (v.empty()) return false;
  if (members_.empty()) mode_ = *v.mode();
  auto reduction = reduce(v);
  if (reduction.residual.empty()) return false;

  const auto& residual = reduction.residual.entries();
  auto pivot_it = residual.begin();
  if (mode_ == ArithmeticMode::floating) {
    pivot_it = std::max_element(residual.begin(), residual.end(),
                                [](const auto& a, const auto& b) { return a.second.abs() < b.second.abs(); });
  }
  const Coord pivot = pivot_it->first;
  const Scalar inv = Scalar::one(mode_) / pivot_it->second;

  Row row;
  row.pivot = pivot;
  row.reduced = inv * reduction.residual;
  row.reduced.set(pivot, Scalar::one(mode_));
  const std::size_t index = members_.size();
  row.combination.emplace(index, inv);
  accumulate(row.combination, -inv, reduction.coefficients);

  for (auto& other : rows_) {
    const Scalar* entry = other.reduced.find(pivot);
    if (entry == nullptr) continue;
    const Scalar factor = -*entry;
    other.reduced.axpy(factor, row.reduced);
    other.reduced.set(pivot, Scalar::zero(mode_));
    accumulate(other.combination, factor, row.combination);
  }

  pivot_row_.emplace(pivot, rows_.size());
  rows_.push_back(std::move(row));
  members_.push_back(v);
  return true;
}

std::optional<std::vector<Scalar>> EchelonBasis::expand(const SparseVector& v) const {
  auto reduction = reduce(v);
  if (!reduction.residual.empty()) return std::nullopt;
  const auto m = v.mode().value_or(mode_);
  std::vector<Scalar> out(members_.size(), Scalar::zero(m));
  for (auto& [index, value] : reduction.coefficients) out[index] = value;
  return out;
}

// ---------------------------------------------------------------------------

std::optional<std::vector<Scalar>> expand_in_set(const SparseVector& v, std::span<const SparseVector> basis) {
  EchelonBasis echelon;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!echelon.insert(basis[i])) {
      throw Error(ErrorCode::DependentBasis, "member " + std::to_string(i) + " depends on its predecessors");
    }
  }
  if (basis.empty()) {
    if (v.empty()) return std::vector<Scalar>{};
    return std::nullopt;
  }
  return echelon.expand(v);
}

std::optional<DenseMatrix> inverse(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw Error(ErrorCode::Precondition, "inverse of a non-square matrix");
  if (n == 0) return DenseMatrix();
  const ArithmeticMode mode = m(0, 0).mode();
  DenseMatrix a = m;
  DenseMatrix inv = DenseMatrix::identity(n, mode);
  double scale = 0.0;
  if (mode == ArithmeticMode::floating) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, a(i, j).abs());
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    if (mode == ArithmeticMode::exact) {
      for (std::size_t r = col; r < n; ++r) {
        if (!a(r, col).is_zero()) {
          pivot = r;
          break;
        }
      }
    } else {
      double best = kFloatRankTolerance * std::max(scale, 1.0);
      for (std::size_t r = col; r < n; ++r) {
        if (a(r, col).abs() > best) {
          best = a(r, col).abs();
          pivot = r;
        }
      }
    }
    if (pivot == n) return std::nullopt;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Scalar p = Scalar::one(mode) / a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) *= p;
      inv(col, j) *= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col).is_zero()) continue;
      const Scalar factor = a(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        if (!a(col, j).is_zero()) a(r, j) -= factor * a(col, j);
        if (!inv(col, j).is_zero()) inv(r, j) -= factor * inv(col, j);
      }
    }
  }
  return inv;
}

std::vector<Functional> biorthogonal_system(std::span<const SparseVector> family, NormMode p) {
  EchelonBasis echelon;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!echelon.insert(family[i])) {
      throw Error(ErrorCode::DependentBasis, "family member " + std::to_string(i) + " is dependent");
    }
  }

  // Members touching disjoint coordinates have a block-diagonal Gram matrix.
  std::vector<std::size_t> parent(family.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::unordered_map<Coord, std::size_t> owner;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (const auto& [index, value] : family[i].entries()) {
      auto [it, inserted] = owner.try_emplace(index, i);
      if (!inserted) parent[find(i)] = find(it->second);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t i = 0; i < family.size(); ++i) components[find(i)].push_back(i);

  std::vector<Functional> out(family.size());
  for (const auto& [root, members] : components) {
    const std::size_t c = members.size();
    const ArithmeticMode mode = *family[members.front()].mode();
    DenseMatrix gram(c, c, mode);
    std::vector<SparseVector> conjugates;
    conjugates.reserve(c);
    for (std::size_t i : members) {
      SparseVector conj;
      for (const auto& [index, value] : family[i].entries()) conj.set(index, value.conj());
      conjugates.push_back(std::move(conj));
    }
    for (std::size_t i = 0; i < c; ++i) {
      for (std::size_t j = 0; j < c; ++j) {
        gram(i, j) = Functional(conjugates[j]).evaluate(family[members[i]]);
      }
    }
    const auto gram_inv = inverse(gram);
    if (!gram_inv) throw Error(ErrorCode::DependentBasis, "singular Gram matrix");
    for (std::size_t t = 0; t < c; ++t) {
      SparseVector f;
      for (std::size_t i = 0; i < c; ++i) f.axpy((*gram_inv)(i, t), conjugates[i]);
      out[members[t]] = Functional(std::move(f), p);
    }
  }
  return out;
}

Functional biorthogonal(std::span<const SparseVector> family, std::size_t target, NormMode p) {
  if (target >= family.size()) throw Error(ErrorCode::Precondition, "biorthogonal target out of range");
  return biorthogonal_system(family, p).at(target);
}

}  // namespace gshift
