#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gshift/scalar.hpp"

namespace gshift {

/// Closed-form rule for the weights past the explicit prefix. Every built-in
/// rule is non-increasing in |n| unless it is unbounded.
struct TailRule {
  enum class Kind {
    constant,             // w_n = value
    one_over_n,           // w_n = scale / max(|n|, 1)
    geometric,            // w_n = scale * ratio^|n|
    one_plus_one_over_n,  // w_n = 1 + 1/max(|n|, 1)
  };
  Kind kind = Kind::constant;
  Rational value = 1;
  Rational scale = 1;
  Rational ratio = Rational(1, 2);

  static TailRule constant(Rational c) { return {Kind::constant, std::move(c), 1, Rational(1, 2)}; }
  static TailRule one_over_n(Rational scale = 1) { return {Kind::one_over_n, 1, std::move(scale), Rational(1, 2)}; }
  static TailRule geometric(Rational ratio, Rational scale = 1) {
    return {Kind::geometric, 1, std::move(scale), std::move(ratio)};
  }
  static TailRule one_plus_one_over_n() { return {Kind::one_plus_one_over_n, 1, 1, Rational(1, 2)}; }

  [[nodiscard]] Rational at(std::int64_t n) const;
  friend bool operator==(const TailRule&, const TailRule&) = default;
};

std::string to_string(TailRule::Kind kind);
std::optional<TailRule::Kind> parse_tail_kind(const std::string& name);

/// Weight sequence w_n given as an explicit prefix (w_{start}, w_{start+1},
/// ...) followed by an optional tail rule, or by a user closure.
class WeightSequence {
 public:
  using Generator = std::function<Scalar(std::int64_t)>;

  WeightSequence() = default;
  WeightSequence(std::vector<Scalar> prefix, std::optional<TailRule> tail, std::int64_t prefix_start = 1,
                 ArithmeticMode mode = ArithmeticMode::exact);

  static WeightSequence rule(TailRule tail, ArithmeticMode mode = ArithmeticMode::exact) {
    return WeightSequence({}, std::move(tail), 1, mode);
  }
  static WeightSequence explicit_list(std::vector<Scalar> prefix, std::int64_t prefix_start = 1);
  /// Closure-defined weights. `sup_bound` is a declared bound on sup |w_n|,
  /// needed only for operator norms.
  static WeightSequence from_function(Generator generator, std::string label,
                                      std::optional<Rational> sup_bound = std::nullopt,
                                      ArithmeticMode mode = ArithmeticMode::exact);

  /// w_n, or nullopt past the prefix when there is no tail.
  [[nodiscard]] std::optional<Scalar> at(std::int64_t n) const;
  /// w_n; throws HorizonTooShort when unavailable.
  [[nodiscard]] Scalar operator()(std::int64_t n) const;

  /// Certified upper bound on sup |w_n| over n >= first (and n <= -1 as well
  /// when `two_sided`). Throws Unbounded.
  [[nodiscard]] RationalRoot sup_abs(std::int64_t first, bool two_sided) const;

  [[nodiscard]] const std::vector<Scalar>& prefix() const noexcept { return prefix_; }
  [[nodiscard]] std::int64_t prefix_start() const noexcept { return prefix_start_; }
  [[nodiscard]] const std::optional<TailRule>& tail() const noexcept { return tail_; }
  [[nodiscard]] bool is_closure() const noexcept { return static_cast<bool>(generator_); }
  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  [[nodiscard]] ArithmeticMode mode() const noexcept { return mode_; }

  /// Structural equality; closures compare by label only.
  friend bool operator==(const WeightSequence& a, const WeightSequence& b);

 private:
  std::vector<Scalar> prefix_;
  std::optional<TailRule> tail_;
  std::int64_t prefix_start_ = 1;
  ArithmeticMode mode_ = ArithmeticMode::exact;
  Generator generator_;
  std::string label_;
  std::optional<Rational> sup_bound_;
};

}  // namespace gshift
