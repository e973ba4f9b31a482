#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace gshift {

using Rational = mpq_class;

enum class ArithmeticMode { exact, floating };

std::string to_string(ArithmeticMode mode);

// ---------------------------------------------------------------------------
// Rational helpers
// ---------------------------------------------------------------------------

/// Square root of a nonnegative rational together with whether the value is
/// exact. Inexact results are rounded up with `bits` binary digits of slack.
struct RationalRoot {
  Rational value;
  bool exact = false;
};

RationalRoot sqrt_upper(const Rational& q, unsigned bits = 40);

/// Exact n-th root when both numerator and denominator are perfect n-th
/// powers, otherwise nullopt.
std::optional<Rational> exact_root(const Rational& q, unsigned long n);

Rational pow(const Rational& base, std::int64_t exponent);

/// A double that is >= q (q >= 0).
double to_double_up(const Rational& q);

/// Smallest-magnitude exact rational enclosure of a nonnegative double,
/// nudged upward by `relative_slack`.
Rational rational_upper(double x, double relative_slack = 1e-12);

/// Natural logarithm of a positive rational, robust for huge numerators.
double log_rational(const Rational& q);

/// Parses "p/q", "p" or a decimal string such as "-0.05" or "1e-3" exactly.
std::optional<Rational> parse_rational(const std::string& text);

/// "p/q" (or "p" when the denominator is one).
std::string format_rational(const Rational& q);

// ---------------------------------------------------------------------------
// Scalar
// ---------------------------------------------------------------------------

struct ExactComplex {
  Rational re;
  Rational im;
};

/// A complex number carried either exactly (a pair of rationals) or as a pair
/// of binary64 reals. Mixing modes in one operation throws ModeMismatch.
class Scalar {
 public:
  Scalar() : value_(ExactComplex{}) {}
  Scalar(const Rational& re) : value_(ExactComplex{re, 0}) {}
  Scalar(const Rational& re, const Rational& im) : value_(ExactComplex{re, im}) {}
  Scalar(int value) : value_(ExactComplex{value, 0}) {}
  explicit Scalar(std::complex<double> value) : value_(value) {}

  static Scalar zero(ArithmeticMode mode);
  static Scalar one(ArithmeticMode mode);
  /// The rational `q` carried in `mode` (rounded to nearest in float mode).
  static Scalar from_rational(const Rational& q, ArithmeticMode mode);
  static Scalar ratio(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return Scalar(q);
  }
  static Scalar imaginary_unit() { return Scalar(Rational(0), Rational(1)); }

  [[nodiscard]] ArithmeticMode mode() const noexcept {
    return std::holds_alternative<ExactComplex>(value_) ? ArithmeticMode::exact
                                                         : ArithmeticMode::floating;
  }
  [[nodiscard]] bool is_exact() const noexcept { return mode() == ArithmeticMode::exact; }
  [[nodiscard]] bool is_zero() const;
  [[nodiscard]] bool is_real() const;

  [[nodiscard]] const ExactComplex& exact() const;
  [[nodiscard]] std::complex<double> to_complex() const;

  [[nodiscard]] Scalar conj() const;
  /// |z|^2 in the same mode.
  [[nodiscard]] Scalar abs2() const;
  /// |z|^2 as a rational: exact in exact mode, an upper bound in float mode.
  [[nodiscard]] Rational abs2_upper() const;
  [[nodiscard]] double abs() const;
  /// Certified rational upper bound on |z|.
  [[nodiscard]] RationalRoot abs_upper() const;
  /// Real part as a rational; throws unless the scalar is exact and real.
  [[nodiscard]] const Rational& real_rational() const;

  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);

  friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
  friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
  friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
  friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }
  Scalar operator-() const;

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  [[nodiscard]] std::string str() const;

 private:
  std::variant<ExactComplex, std::complex<double>> value_;
};

}  // namespace gshift
