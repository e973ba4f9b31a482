#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gshift/scalar.hpp"

namespace gshift {

/// Coordinate index of the sequence model. Negative values occur in bilateral
/// models.
using Coord = std::int64_t;

enum class NormMode { l1, l2, linf };

std::string to_string(NormMode p);
std::optional<NormMode> parse_norm_mode(const std::string& text);
/// Hölder conjugate exponent: l1 <-> linf, l2 <-> l2.
NormMode dual_mode(NormMode p);

/// Finitely supported coordinate vector. No stored entry is zero.
class SparseVector {
 public:
  using Map = std::map<Coord, Scalar>;

  SparseVector() = default;
  SparseVector(std::initializer_list<std::pair<const Coord, Scalar>> entries);

  static SparseVector unit(Coord index, ArithmeticMode mode = ArithmeticMode::exact);

  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
  [[nodiscard]] std::size_t support_size() const noexcept { return entries_.size(); }
  [[nodiscard]] const Map& entries() const noexcept { return entries_; }
  [[nodiscard]] std::vector<Coord> support() const;
  /// Mode of the stored scalars; nullopt for the zero vector.
  [[nodiscard]] std::optional<ArithmeticMode> mode() const;

  /// Coefficient at `index`; `fallback_mode` decides the mode of a missing entry.
  [[nodiscard]] Scalar get(Coord index, ArithmeticMode fallback_mode = ArithmeticMode::exact) const;
  [[nodiscard]] const Scalar* find(Coord index) const;

  void set(Coord index, const Scalar& value);
  /// this += factor * other
  void axpy(const Scalar& factor, const SparseVector& other);
  void add_at(Coord index, const Scalar& value);

  SparseVector& operator+=(const SparseVector& rhs);
  SparseVector& operator-=(const SparseVector& rhs);
  SparseVector& operator*=(const Scalar& factor);

  friend SparseVector operator+(SparseVector a, const SparseVector& b) { return a += b; }
  friend SparseVector operator-(SparseVector a, const SparseVector& b) { return a -= b; }
  friend SparseVector operator*(const Scalar& s, SparseVector v) { return v *= s; }
  friend bool operator==(const SparseVector& a, const SparseVector& b) { return a.entries_ == b.entries_; }

  /// Drops float entries whose magnitude is at most `tolerance`.
  void chop(double tolerance);
  /// Keeps only coordinates in [lo, hi].
  [[nodiscard]] SparseVector restricted(Coord lo, Coord hi) const;

  [[nodiscard]] std::string str() const;

 private:
  Map entries_;
};

/// Value of a norm with a certified rational upper bound.
struct Norm {
  double value = 0.0;
  Rational upper;
  bool exact = true;
  /// Exact squared norm (exact mode, p = 2).
  std::optional<Rational> squared;
};

Norm norm_of_entries(const SparseVector::Map& entries, NormMode p);
Norm vector_norm(const SparseVector& v, NormMode p);

/// A finitely supported linear functional acting by the bilinear pairing
/// f(v) = sum_i f_i v_i. The norm mode records the space it is a dual of.
class Functional {
 public:
  Functional() = default;
  Functional(SparseVector coefficients, NormMode p = NormMode::l2)
      : coefficients_(std::move(coefficients)), mode_(p) {}

  [[nodiscard]] const SparseVector& coefficients() const noexcept { return coefficients_; }
  [[nodiscard]] NormMode norm_mode() const noexcept { return mode_; }
  [[nodiscard]] Scalar evaluate(const SparseVector& v) const;
  [[nodiscard]] Scalar operator()(const SparseVector& v) const { return evaluate(v); }

  friend bool operator==(const Functional& a, const Functional& b) {
    return a.coefficients_ == b.coefficients_ && a.mode_ == b.mode_;
  }

 private:
  SparseVector coefficients_;
  NormMode mode_ = NormMode::l2;
};

/// Norm of `f` as an element of the dual of l^p, i.e. its l^q norm.
Norm dual_norm(const Functional& f, NormMode p);
Norm dual_norm(const Functional& f);

}  // namespace gshift
