#include "gshift/weights.hpp"

#include <algorithm>

#include "gshift/errors.hpp"

namespace gshift {

namespace {

std::int64_t magnitude(std::int64_t n) {
  return std::max<std::int64_t>(n < 0 ? -n : n, 1);
}

}  // namespace

Rational TailRule::at(std::int64_t n) const {
  switch (kind) {
    case Kind::constant: return value;
    case Kind::one_over_n: return Rational(scale / magnitude(n));
    case Kind::geometric: return Rational(scale * pow(ratio, n < 0 ? -n : n));
    case Kind::one_plus_one_over_n: return Rational(1 + Rational(1, magnitude(n)));
  }
  return value;
}

std::string to_string(TailRule::Kind kind) {
  switch (kind) {
    case TailRule::Kind::constant: return "const";
    case TailRule::Kind::one_over_n: return "one_over_n";
    case TailRule::Kind::geometric: return "geometric";
    case TailRule::Kind::one_plus_one_over_n: return "one_plus_one_over_n";
  }
  return "const";
}

std::optional<TailRule::Kind> parse_tail_kind(const std::string& name) {
  if (name == "const" || name == "constant") return TailRule::Kind::constant;
  if (name == "one_over_n") return TailRule::Kind::one_over_n;
  if (name == "geometric") return TailRule::Kind::geometric;
  if (name == "one_plus_one_over_n") return TailRule::Kind::one_plus_one_over_n;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

WeightSequence::WeightSequence(std::vector<Scalar> prefix, std::optional<TailRule> tail, std::int64_t prefix_start,
                               ArithmeticMode mode)
    : prefix_(std::move(prefix)), tail_(std::move(tail)), prefix_start_(prefix_start), mode_(mode) {
  if (!prefix_.empty()) mode_ = prefix_.front().mode();
  for (const auto& w : prefix_) {
    if (w.mode() != mode_) throw Error(ErrorCode::ModeMismatch, "weight prefix mixes arithmetic modes");
  }
}

WeightSequence WeightSequence::explicit_list(std::vector<Scalar> prefix, std::int64_t prefix_start) {
  return WeightSequence(std::move(prefix), std::nullopt, prefix_start);
}

WeightSequence WeightSequence::from_function(Generator generator, std::string label,
                                             std::optional<Rational> sup_bound, ArithmeticMode mode) {
  WeightSequence w;
  w.generator_ = std::move(generator);
  w.label_ = std::move(label);
  w.sup_bound_ = std::move(sup_bound);
  w.mode_ = mode;
  return w;
}

std::optional<Scalar> WeightSequence::at(std::int64_t n) const {
  if (generator_) return generator_(n);
  const std::int64_t offset = n - prefix_start_;
  if (offset >= 0 && offset < static_cast<std::int64_t>(prefix_.size())) {
    return prefix_[static_cast<std::size_t>(offset)];
  }
  if (!tail_) return std::nullopt;
  return Scalar::from_rational(tail_->at(n), mode_);
}

Scalar WeightSequence::operator()(std::int64_t n) const {
  auto w = at(n);
  if (!w) throw Error(ErrorCode::HorizonTooShort, "weight w_" + std::to_string(n) + " is not available");
  return *w;
}

RationalRoot WeightSequence::sup_abs(std::int64_t first, bool two_sided) const {
  if (generator_) {
    if (!sup_bound_) throw Error(ErrorCode::Unbounded, "closure weights '" + label_ + "' carry no declared bound");
    return {*sup_bound_, false};
  }
  auto in_domain = [&](std::int64_t n) { return two_sided || n >= first; };
  const std::int64_t prefix_end = prefix_start_ + static_cast<std::int64_t>(prefix_.size()) - 1;
  auto in_prefix = [&](std::int64_t n) { return !prefix_.empty() && n >= prefix_start_ && n <= prefix_end; };

  RationalRoot best{0, true};
  auto consider = [&](const RationalRoot& r) {
    if (r.value > best.value) {
      best = r;
    } else if (r.value == best.value) {
      best.exact = best.exact || r.exact;
    }
  };
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    if (in_domain(prefix_start_ + static_cast<std::int64_t>(i))) consider(prefix_[i].abs_upper());
  }
  if (!tail_) return best;
  if (tail_->kind == TailRule::Kind::geometric && abs(tail_->ratio) > 1) {
    throw Error(ErrorCode::Unbounded, "geometric weights with |ratio| > 1");
  }
  // Built-in tails are non-increasing in |n|: the sup sits at the tail index
  // closest to zero on either side.
  const std::int64_t candidates[] = {two_sided ? 0 : std::max<std::int64_t>(0, first), prefix_end + 1, -1,
                                     prefix_start_ - 1, first};
  for (std::int64_t n : candidates) {
    if (!in_domain(n) || in_prefix(n)) continue;
    consider({abs(tail_->at(n)), true});
  }
  return best;
}

bool operator==(const WeightSequence& a, const WeightSequence& b) {
  if (a.is_closure() || b.is_closure()) return a.is_closure() == b.is_closure() && a.label_ == b.label_;
  return a.prefix_ == b.prefix_ && a.tail_ == b.tail_ && a.prefix_start_ == b.prefix_start_ && a.mode_ == b.mode_;
}

}  // namespace gshift
