#include "gshift/scalar.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "gshift/errors.hpp"

namespace gshift {

std::string to_string(ArithmeticMode mode) {
  return mode == ArithmeticMode::exact ? "exact" : "float";
}

RationalRoot sqrt_upper(const Rational& q, unsigned bits) {
  if (sgn(q) < 0) throw Error(ErrorCode::Precondition, "square root of a negative rational");
  if (sgn(q) == 0) return {Rational(0), true};
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) != 0 && mpz_perfect_square_p(den.get_mpz_t()) != 0) {
    mpz_class rn;
    mpz_class rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    Rational r(rn, rd);
    r.canonicalize();
    return {r, true};
  }
  // sqrt(n/d) = sqrt(n d 4^b) / (d 2^b) < (isqrt(n d 4^b) + 1) / (d 2^b)
  mpz_class scaled = num * den;
  scaled <<= 2 * bits;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  mpz_class scale_den = den;
  scale_den <<= bits;
  Rational r(root + 1, scale_den);
  r.canonicalize();
  return {r, false};
}

std::optional<Rational> exact_root(const Rational& q, unsigned long n) {
  if (n == 0) return std::nullopt;
  if (sgn(q) < 0 && n % 2 == 0) return std::nullopt;
  mpz_class rn;
  mpz_class rd;
  const int num_exact = mpz_root(rn.get_mpz_t(), q.get_num().get_mpz_t(), n);
  const int den_exact = mpz_root(rd.get_mpz_t(), q.get_den().get_mpz_t(), n);
  if (num_exact == 0 || den_exact == 0) return std::nullopt;
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

Rational pow(const Rational& base, std::int64_t exponent) {
  if (exponent == 0) return Rational(1);
  const auto e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  mpz_class num;
  mpz_class den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), e);
  if (exponent < 0) {
    if (num == 0) throw Error(ErrorCode::Precondition, "negative power of zero");
    std::swap(num, den);
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

double to_double_up(const Rational& q) {
  const double d = q.get_d();
  if (Rational(d) >= q) return d;
  return std::nextafter(d, std::numeric_limits<double>::infinity());
}

Rational rational_upper(double x, double relative_slack) {
  if (!std::isfinite(x)) throw Error(ErrorCode::Overflow, "non-finite value has no rational enclosure");
  const double bumped = std::nextafter(std::abs(x) * (1.0 + relative_slack),
                                       std::numeric_limits<double>::infinity());
  return Rational(bumped);
}

double log_rational(const Rational& q) {
  if (sgn(q) <= 0) return -std::numeric_limits<double>::infinity();
  long num_exp = 0;
  long den_exp = 0;
  const double num_mant = mpz_get_d_2exp(&num_exp, q.get_num().get_mpz_t());
  const double den_mant = mpz_get_d_2exp(&den_exp, q.get_den().get_mpz_t());
  return std::log(num_mant) - std::log(den_mant) +
         static_cast<double>(num_exp - den_exp) * std::log(2.0);
}

std::optional<Rational> parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  }
  if (text.empty()) return std::nullopt;

  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const auto num = parse_rational(text.substr(0, slash));
    const auto den = parse_rational(text.substr(slash + 1));
    if (!num || !den || sgn(*den) == 0) return std::nullopt;
    Rational r = *num / *den;
    r.canonicalize();
    return r;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long fraction_digits = 0;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++fraction_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits.empty()) return std::nullopt;
  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') return std::nullopt;
    ++pos;
    std::size_t used = 0;
    try {
      exponent = std::stol(text.substr(pos), &used);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (pos + used != text.size()) return std::nullopt;
  }
  mpz_class mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  const long scale = exponent - fraction_digits;
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational r = scale < 0 ? Rational(mantissa, power) : Rational(mantissa * power);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& q) {
  return q.get_str();
}

// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void mode_mismatch() {
  throw Error(ErrorCode::ModeMismatch, "exact and float scalars mixed in one operation");
}

}  // namespace

Scalar Scalar::zero(ArithmeticMode mode) {
  return mode == ArithmeticMode::exact ? Scalar() : Scalar(std::complex<double>(0.0, 0.0));
}

Scalar Scalar::one(ArithmeticMode mode) {
  return mode == ArithmeticMode::exact ? Scalar(1) : Scalar(std::complex<double>(1.0, 0.0));
}

Scalar Scalar::from_rational(const Rational& q, ArithmeticMode mode) {
  return mode == ArithmeticMode::exact ? Scalar(q) : Scalar(std::complex<double>(q.get_d(), 0.0));
}

bool Scalar::is_zero() const {
  if (const auto* e = std::get_if<ExactComplex>(&value_)) return sgn(e->re) == 0 && sgn(e->im) == 0;
  return std::get<std::complex<double>>(value_) == std::complex<double>(0.0, 0.0);
}

bool Scalar::is_real() const {
  if (const auto* e = std::get_if<ExactComplex>(&value_)) return sgn(e->im) == 0;
  return std::get<std::complex<double>>(value_).imag() == 0.0;
}

const ExactComplex& Scalar::exact() const {
  if (const auto* e = std::get_if<ExactComplex>(&value_)) return *e;
  throw Error(ErrorCode::ModeMismatch, "exact value requested from a float scalar");
}

std::complex<double> Scalar::to_complex() const {
  if (const auto* e = std::get_if<ExactComplex>(&value_)) return {e->re.get_d(), e->im.get_d()};
  return std::get<std::complex<double>>(value_);
}

Scalar Scalar::conj() const {
  if (const auto* e = std::get_if<ExactComplex>(&value_)) return Scalar(e->re, -e->im);
  return Scalar(std::conj(std::get<std::complex<double>>(value_)));
}

Scalar Scalar::abs2() const {
  if (const auto* e = std::get_if<ExactComplex>(&value_)) return Scalar(Rational(e->re * e->re + e->im * e->im));
  return Scalar(std::complex<double>(std::norm(std::get<std::complex<double>>(value_)), 0.0));
}

Rational Scalar::abs2_upper() const {
  if (const auto* e = std::get_if<ExactComplex>(&value_)) return e->re * e->re + e->im * e->im;
  return rational_upper(std::norm(std::get<std::complex<double>>(value_)));
}

double Scalar::abs() const {
  if (const auto* e = std::get_if<ExactComplex>(&value_)) {
    if (sgn(e->im) == 0) return std::abs(e->re.get_d());
    return std::sqrt(Rational(e->re * e->re + e->im * e->im).get_d());
  }
  return std::abs(std::get<std::complex<double>>(value_));
}

RationalRoot Scalar::abs_upper() const {
  if (const auto* e = std::get_if<ExactComplex>(&value_)) {
    if (sgn(e->im) == 0) return {Rational(::abs(e->re)), true};
    if (sgn(e->re) == 0) return {Rational(::abs(e->im)), true};
    return sqrt_upper(e->re * e->re + e->im * e->im);
  }
  return {rational_upper(std::abs(std::get<std::complex<double>>(value_))), false};
}

const Rational& Scalar::real_rational() const {
  const auto& e = exact();
  if (sgn(e.im) != 0) throw Error(ErrorCode::Precondition, "scalar is not real");
  return e.re;
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  if (mode() != rhs.mode()) mode_mismatch();
  if (auto* e = std::get_if<ExactComplex>(&value_)) {
    const auto& r = std::get<ExactComplex>(rhs.value_);
    e->re += r.re;
    e->im += r.im;
  } else {
    std::get<std::complex<double>>(value_) += std::get<std::complex<double>>(rhs.value_);
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  if (mode() != rhs.mode()) mode_mismatch();
  if (auto* e = std::get_if<ExactComplex>(&value_)) {
    const auto& r = std::get<ExactComplex>(rhs.value_);
    e->re -= r.re;
    e->im -= r.im;
  } else {
    std::get<std::complex<double>>(value_) -= std::get<std::complex<double>>(rhs.value_);
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  if (mode() != rhs.mode()) mode_mismatch();
  if (auto* e = std::get_if<ExactComplex>(&value_)) {
    const auto& r = std::get<ExactComplex>(rhs.value_);
    if (sgn(e->im) == 0 && sgn(r.im) == 0) {
      e->re *= r.re;
      return *this;
    }
    Rational re = e->re * r.re - e->im * r.im;
    Rational im = e->re * r.im + e->im * r.re;
    e->re = std::move(re);
    e->im = std::move(im);
  } else {
    std::get<std::complex<double>>(value_) *= std::get<std::complex<double>>(rhs.value_);
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
  if (mode() != rhs.mode()) mode_mismatch();
  if (rhs.is_zero()) throw Error(ErrorCode::Precondition, "division by zero scalar");
  if (auto* e = std::get_if<ExactComplex>(&value_)) {
    const auto& r = std::get<ExactComplex>(rhs.value_);
    if (sgn(r.im) == 0) {
      e->re /= r.re;
      e->im /= r.re;
      return *this;
    }
    const Rational denom = r.re * r.re + r.im * r.im;
    Rational re = (e->re * r.re + e->im * r.im) / denom;
    Rational im = (e->im * r.re - e->re * r.im) / denom;
    e->re = std::move(re);
    e->im = std::move(im);
  } else {
    std::get<std::complex<double>>(value_) /= std::get<std::complex<double>>(rhs.value_);
  }
  return *this;
}

Scalar Scalar::operator-() const {
  if (const auto* e = std::get_if<ExactComplex>(&value_)) return Scalar(Rational(-e->re), Rational(-e->im));
  return Scalar(-std::get<std::complex<double>>(value_));
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.mode() != b.mode()) return false;
  if (const auto* e = std::get_if<ExactComplex>(&a.value_)) {
    const auto& r = std::get<ExactComplex>(b.value_);
    return e->re == r.re && e->im == r.im;
  }
  return std::get<std::complex<double>>(a.value_) == std::get<std::complex<double>>(b.value_);
}

std::string Scalar::str() const {
  if (const auto* e = std::get_if<ExactComplex>(&value_)) {
    if (sgn(e->im) == 0) return format_rational(e->re);
    return "(" + format_rational(e->re) + "," + format_rational(e->im) + ")";
  }
  std::ostringstream os;
  os.precision(17);
  const auto z = std::get<std::complex<double>>(value_);
  if (z.imag() == 0.0) {
    os << z.real();
  } else {
    os << "(" << z.real() << "," << z.imag() << ")";
  }
  return os.str();
}

}  // namespace gshift
