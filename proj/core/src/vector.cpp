#include "gshift/vector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gshift/errors.hpp"

namespace gshift {

std::string to_string(NormMode p) {
  switch (p) {
    case NormMode::l1: return "l1";
    case NormMode::l2: return "l2";
    case NormMode::linf: return "linf";
  }
  return "l2";
}

std::optional<NormMode> parse_norm_mode(const std::string& text) {
  if (text == "l1" || text == "1") return NormMode::l1;
  if (text == "l2" || text == "2") return NormMode::l2;
  if (text == "linf" || text == "inf") return NormMode::linf;
  return std::nullopt;
}

NormMode dual_mode(NormMode p) {
  switch (p) {
    case NormMode::l1: return NormMode::linf;
    case NormMode::l2: return NormMode::l2;
    case NormMode::linf: return NormMode::l1;
  }
  return NormMode::l2;
}

// ---------------------------------------------------------------------------

SparseVector::SparseVector(std::initializer_list<std::pair<const Coord, Scalar>> entries) {
  for (const auto& [index, value] : entries) add_at(index, value);
}

SparseVector SparseVector::unit(Coord index, ArithmeticMode mode) {
  SparseVector v;
  v.entries_.emplace(index, Scalar::one(mode));
  return v;
}

std::vector<Coord> SparseVector::support() const {
  std::vector<Coord> out;
  out.reserve(entries_.size());
  for (const auto& [index, value] : entries_) out.push_back(index);
  return out;
}

std::optional<ArithmeticMode> SparseVector::mode() const {
  if (entries_.empty()) return std::nullopt;
  return entries_.begin()->second.mode();
}

Scalar SparseVector::get(Coord index, ArithmeticMode fallback_mode) const {
  if (const auto it = entries_.find(index); it != entries_.end()) return it->second;
  return Scalar::zero(fallback_mode);
}

const Scalar* SparseVector::find(Coord index) const {
  const auto it = entries_.find(index);
  return it == entries_.end() ? nullptr : &it->second;
}

void SparseVector::set(Coord index, const Scalar& value) {
  if (value.is_zero()) {
    entries_.erase(index);
  } else {
    entries_.insert_or_assign(index, value);
  }
}

void SparseVector::add_at(Coord index, const Scalar& value) {
  if (value.is_zero()) return;
  auto [it, inserted] = entries_.try_emplace(index, value);
  if (!inserted) {
    it->second += value;
    if (it->second.is_zero()) entries_.erase(it);
  }
}

void SparseVector::axpy(const Scalar& factor, const SparseVector& other) {
  if (factor.is_zero()) return;
  for (const auto& [index, value] : other.entries_) add_at(index, factor * value);
}

SparseVector& SparseVector::operator+=(const SparseVector& rhs) {
  for (const auto& [index, value] : rhs.entries_) add_at(index, value);
  return *this;
}

SparseVector& SparseVector::operator-=(const SparseVector& rhs) {
  for (const auto& [index, value] : rhs.entries_) add_at(index, -value);
  return *this;
}

SparseVector& SparseVector::operator*=(const Scalar& factor) {
  if (factor.is_zero()) {
    entries_.clear();
    return *this;
  }
  for (auto& [index, value] : entries_) value *= factor;
  return *this;
}

void SparseVector::chop(double tolerance) {
  std::erase_if(entries_, [&](const auto& kv) { return !kv.second.is_exact() && kv.second.abs() <= tolerance; });
}

SparseVector SparseVector::restricted(Coord lo, Coord hi) const {
  SparseVector out;
  for (auto it = entries_.lower_bound(lo); it != entries_.end() && it->first <= hi; ++it) {
    out.entries_.emplace(it->first, it->second);
  }
  return out;
}

std::string SparseVector::str() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [index, value] : entries_) {
    if (!first) os << ", ";
    first = false;
    os << index << ": " << value.str();
  }
  os << "}";
  return os.str();
}

// ---------------------------------------------------------------------------

Norm norm_of_entries(const SparseVector::Map& entries, NormMode p) {
  Norm out;
  out.upper = 0;
  if (entries.empty()) {
    if (p == NormMode::l2) out.squared = Rational(0);
    return out;
  }
  const bool exact_mode = entries.begin()->second.is_exact();
  if (!exact_mode) {
    double value = 0.0;
    for (const auto& [index, s] : entries) {
      const double a = s.abs();
      switch (p) {
        case NormMode::l1: value += a; break;
        case NormMode::l2: value += a * a; break;
        case NormMode::linf: value = std::max(value, a); break;
      }
    }
    if (p == NormMode::l2) value = std::sqrt(value);
    out.value = value;
    out.upper = rational_upper(value);
    out.exact = false;
    return out;
  }

  switch (p) {
    case NormMode::l2: {
      Rational squared = 0;
      for (const auto& [index, s] : entries) squared += s.abs2_upper();
      const auto root = sqrt_upper(squared);
      out.value = std::sqrt(squared.get_d());
      out.upper = root.value;
      out.exact = root.exact;
      out.squared = squared;
      break;
    }
    case NormMode::l1: {
      Rational total = 0;
      bool exact = true;
      double value = 0.0;
      for (const auto& [index, s] : entries) {
        const auto a = s.abs_upper();
        total += a.value;
        exact = exact && a.exact;
        value += s.abs();
      }
      out.value = value;
      out.upper = total;
      out.exact = exact;
      break;
    }
    case NormMode::linf: {
      Rational best = 0;
      bool exact = true;
      double value = 0.0;
      for (const auto& [index, s] : entries) {
        const auto a = s.abs_upper();
        if (a.value > best) best = a.value;
        exact = exact && a.exact;
        value = std::max(value, s.abs());
      }
      out.value = value;
      out.upper = best;
      out.exact = exact;
      break;
    }
  }
  return out;
}

Norm vector_norm(const SparseVector& v, NormMode p) {
  return norm_of_entries(v.entries(), p);
}

Scalar Functional::evaluate(const SparseVector& v) const {
  const auto& f = coefficients_.entries();
  const auto& x = v.entries();
  std::optional<Scalar> sum;
  const bool iterate_f = f.size() <= x.size();
  const auto& small = iterate_f ? f : x;
  const auto& large = iterate_f ? x : f;
  for (const auto& [index, value] : small) {
    const auto it = large.find(index);
    if (it == large.end()) continue;
    if (sum) {
      *sum += value * it->second;
    } else {
      sum = value * it->second;
    }
  }
  if (sum) return *sum;
  const auto mode = v.mode() ? *v.mode() : coefficients_.mode().value_or(ArithmeticMode::exact);
  return Scalar::zero(mode);
}

Norm dual_norm(const Functional& f, NormMode p) {
  return norm_of_entries(f.coefficients().entries(), dual_mode(p));
}

Norm dual_norm(const Functional& f) {
  return dual_norm(f, f.norm_mode());
}

}  // namespace gshift
