#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gshift/scalar.hpp"
#include "gshift/vector.hpp"

namespace gshift {

/// Row-major dense matrix of scalars.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, ArithmeticMode mode = ArithmeticMode::exact)
      : rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(mode)) {}

  static DenseMatrix identity(std::size_t n, ArithmeticMode mode = ArithmeticMode::exact);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

/// Incrementally maintained, fully reduced echelon form of the span of a list
/// of sparse vectors. Every reduced row remembers how it combines the original
/// members, so membership tests also return expansion coefficients.
class EchelonBasis {
 public:
  struct Reduction {
    SparseVector residual;
    /// v = sum_i coefficients[i] * member(i) + residual
    std::map<std::size_t, Scalar> coefficients;
  };

  EchelonBasis() = default;

  /// Appends `v` when it is independent of the current members. Returns false
  /// (basis unchanged) otherwise.
  bool insert(const SparseVector& v);

  [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
  [[nodiscard]] const std::vector<SparseVector>& members() const noexcept { return members_; }
  [[nodiscard]] const SparseVector& member(std::size_t i) const { return members_.at(i); }

  [[nodiscard]] Reduction reduce(const SparseVector& v) const;
  [[nodiscard]] bool contains(const SparseVector& v) const;
  /// Coefficients over the members in insertion order, or nullopt when v is
  /// outside the span.
  [[nodiscard]] std::optional<std::vector<Scalar>> expand(const SparseVector& v) const;

 private:
  struct Row {
    Coord pivot = 0;
    SparseVector reduced;  // pivot entry is one; zero at every other pivot
    std::map<std::size_t, Scalar> combination;
  };

  [[nodiscard]] ArithmeticMode mode() const noexcept { return mode_; }

  std::vector<SparseVector> members_;
  std::vector<Row> rows_;
  std::unordered_map<Coord, std::size_t> pivot_row_;
  ArithmeticMode mode_ = ArithmeticMode::exact;
};

/// Relative tolerance below which float-mode residual entries count as zero.
inline constexpr double kFloatRankTolerance = 1e-10;

/// Coefficients c with v = sum_i c_i basis_i, or nullopt when v is outside the
/// span. Throws DependentBasis if `basis` is linearly dependent.
std::optional<std::vector<Scalar>> expand_in_set(const SparseVector& v, std::span<const SparseVector> basis);

/// Biorthogonal functional to member `target` (0-based) of a linearly
/// independent family: f(family_i) = delta_{i,target}. Among such functionals
/// supported on the coordinates touched by the family, the one with minimal
/// l2 coordinate norm is returned.
Functional biorthogonal(std::span<const SparseVector> family, std::size_t target, NormMode p = NormMode::l2);

/// All biorthogonal functionals of the family at once (same choice as
/// `biorthogonal`). Members sharing no coordinates are solved independently.
std::vector<Functional> biorthogonal_system(std::span<const SparseVector> family, NormMode p = NormMode::l2);

/// Inverse of a square matrix by Gauss-Jordan elimination; nullopt if singular.
std::optional<DenseMatrix> inverse(const DenseMatrix& m);

}  // namespace gshift
