#include "gshift/operator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "gshift/errors.hpp"

namespace gshift {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::vector<std::size_t> gather_terms(const LocalityMap& locality, const SparseVector& v) {
  std::set<std::size_t> picked(locality.always.begin(), locality.always.end());
  for (const auto& [index, value] : v.entries()) {
    if (!locality.lookup) throw Error(ErrorCode::LocalityViolation, "locality map has no lookup");
    const auto terms = locality.lookup(index);
    if (!terms) {
      throw Error(ErrorCode::LocalityViolation, "no locality entry for coordinate " + std::to_string(index));
    }
    picked.insert(terms->begin(), terms->end());
  }
  return {picked.begin(), picked.end()};
}

bool same_weighted_shift(const WeightedShift& a, const WeightedShift& b) {
  return a.direction == b.direction && a.weights == b.weights && a.stride == b.stride && a.phase == b.phase;
}

}  // namespace

std::optional<std::int64_t> WeightedShift::position_of(Coord n) const {
  const std::int64_t delta = n - phase;
  if (stride != 1 && (delta % stride) != 0) return std::nullopt;
  const std::int64_t position = floor_div(delta, stride) + 1;
  if (direction == ShiftDirection::forward && position < 1) return std::nullopt;
  return position;
}

bool operator==(const OperatorExpr& a, const OperatorExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->index() != b.node_->index()) return false;
  return std::visit(
      Overloaded{
          [&](const DenseBlock& x) {
            const auto& y = std::get<DenseBlock>(*b.node_);
            return x.offset == y.offset && x.entries == y.entries;
          },
          [&](const WeightedShift& x) { return same_weighted_shift(x, std::get<WeightedShift>(*b.node_)); },
          [&](const RankOne& x) {
            const auto& y = std::get<RankOne>(*b.node_);
            return x.functional == y.functional && x.vector == y.vector && x.scale == y.scale;
          },
          [&](const ScalarIdentity& x) { return x.lambda == std::get<ScalarIdentity>(*b.node_).lambda; },
          [&](const Sum& x) { return x.terms == std::get<Sum>(*b.node_).terms; },
          [&](const LazySum&) { return false; },
      },
      *a.node_);
}

// Constructors ---------------------------------------------------------------

OperatorExpr zero_operator() {
  return ScalarIdentity{Scalar(0)};
}

OperatorExpr dense_block(Coord offset, DenseMatrix entries) {
  if (entries.rows() != entries.cols()) throw Error(ErrorCode::Precondition, "dense block must be square");
  return DenseBlock{offset, std::move(entries)};
}

OperatorExpr forward_shift(WeightSequence weights) {
  return WeightedShift{ShiftDirection::forward, std::move(weights), 1, 1};
}

OperatorExpr bilateral_shift(WeightSequence weights) {
  return WeightedShift{ShiftDirection::bilateral, std::move(weights), 1, 1};
}

OperatorExpr rank_one(Functional f, SparseVector v, Scalar scale) {
  return RankOne{std::move(f), std::move(v), std::move(scale)};
}

OperatorExpr scalar_identity(Scalar lambda) {
  return ScalarIdentity{std::move(lambda)};
}

OperatorExpr sum(std::vector<SumTerm> terms) {
  return Sum{std::move(terms), std::nullopt};
}

OperatorExpr difference(const OperatorExpr& a, const OperatorExpr& b) {
  return sum({SumTerm{Scalar(1), a}, SumTerm{Scalar(-1), b}});
}

// apply ------------------------------------------------------------------------

SparseVector apply(const OperatorExpr& op, const SparseVector& v) {
  SparseVector out;
  if (v.empty()) return out;
  std::visit(Overloaded{
                 [&](const DenseBlock& b) {
                   const auto n = static_cast<Coord>(b.entries.rows());
                   for (const auto& [index, x] : v.entries()) {
                     const Coord j = index - b.offset;
                     if (j < 0 || j >= n) continue;
                     for (Coord i = 0; i < n; ++i) {
                       const Scalar& a = b.entries(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                       if (!a.is_zero()) out.add_at(b.offset + i, a * x);
                     }
                   }
                 },
                 [&](const WeightedShift& s) {
                   for (const auto& [index, x] : v.entries()) {
                     const auto position = s.position_of(index);
                     if (!position) continue;
                     out.add_at(index + s.stride, s.weights(*position) * x);
                   }
                 },
                 [&](const RankOne& r) {
                   const Scalar value = r.functional.evaluate(v);
                   if (!value.is_zero()) out.axpy(r.scale * value, r.vector);
                 },
                 [&](const ScalarIdentity& s) {
                   if (!s.lambda.is_zero()) out = s.lambda * v;
                 },
                 [&](const Sum& s) {
                   if (s.locality) {
                     for (std::size_t k : gather_terms(*s.locality, v)) {
                       const auto& term = s.terms.at(k);
                       out.axpy(term.coefficient, apply(term.op, v));
                     }
                   } else {
                     for (const auto& term : s.terms) out.axpy(term.coefficient, apply(term.op, v));
                   }
                 },
                 [&](const LazySum& s) {
                   for (std::size_t k : gather_terms(s.locality, v)) out.axpy(s.coefficient, apply(s.term(k), v));
                 },
             },
             op.node());
  return out;
}

SparseVector power_apply(const OperatorExpr& op, SparseVector v, std::size_t n) {
  for (std::size_t i = 0; i < n && !v.empty(); ++i) v = apply(op, v);
  return v;
}

// norms ------------------------------------------------------------------------

namespace {

NormBound dense_block_norm(const DenseBlock& b, NormMode p) {
  const std::size_t n = b.entries.rows();
  std::vector<Rational> col_upper(n, 0);
  std::vector<Rational> row_upper(n, 0);
  std::vector<double> col_value(n, 0.0);
  std::vector<double> row_value(n, 0.0);
  std::vector<int> col_count(n, 0);
  std::vector<int> row_count(n, 0);
  bool all_exact = true;
  Rational max_entry = 0;
  double max_entry_value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Scalar& a = b.entries(i, j);
      if (a.is_zero()) continue;
      const auto up = a.abs_upper();
      all_exact = all_exact && up.exact;
      col_upper[j] += up.value;
      row_upper[i] += up.value;
      col_value[j] += a.abs();
      row_value[i] += a.abs();
      ++col_count[j];
      ++row_count[i];
      if (up.value > max_entry) max_entry = up.value;
      max_entry_value = std::max(max_entry_value, a.abs());
    }
  }
  const Rational col_max = n ? *std::max_element(col_upper.begin(), col_upper.end()) : Rational(0);
  const Rational row_max = n ? *std::max_element(row_upper.begin(), row_upper.end()) : Rational(0);
  const double col_max_value = n ? *std::max_element(col_value.begin(), col_value.end()) : 0.0;
  const double row_max_value = n ? *std::max_element(row_value.begin(), row_value.end()) : 0.0;
  const bool monomial = std::all_of(col_count.begin(), col_count.end(), [](int c) { return c <= 1; }) &&
                        std::all_of(row_count.begin(), row_count.end(), [](int c) { return c <= 1; });

  switch (p) {
    case NormMode::l1: return {col_max, col_max_value, all_exact};
    case NormMode::linf: return {row_max, row_max_value, all_exact};
    case NormMode::l2: {
      if (monomial) return {max_entry, max_entry_value, all_exact};
      const auto root = sqrt_upper(col_max * row_max);
      return {root.value, std::sqrt(col_max_value * row_max_value), false};
    }
  }
  return {};
}

}  // namespace

NormBound operator_norm_bound(const OperatorExpr& op, NormMode p) {
  return std::visit(
      Overloaded{
          [&](const DenseBlock& b) { return dense_block_norm(b, p); },
          [&](const WeightedShift& s) {
            const auto sup = s.weights.sup_abs(1, s.direction == ShiftDirection::bilateral);
            return NormBound{sup.value, sup.value.get_d(), sup.exact};
          },
          [&](const RankOne& r) {
            const auto scale = r.scale.abs_upper();
            const Norm f = dual_norm(r.functional, p);
            const Norm v = vector_norm(r.vector, p);
            Rational upper = scale.value * f.upper * v.upper;
            return NormBound{upper, r.scale.abs() * f.value * v.value, scale.exact && f.exact && v.exact};
          },
          [&](const ScalarIdentity& s) {
            const auto a = s.lambda.abs_upper();
            return NormBound{a.value, s.lambda.abs(), a.exact};
          },
          [&](const Sum& s) {
            NormBound total{0, 0.0, true};
            std::size_t nonzero = 0;
            for (const auto& term : s.terms) {
              const auto c = term.coefficient.abs_upper();
              const auto b = operator_norm_bound(term.op, p);
              if (sgn(c.value) == 0 || sgn(b.upper) == 0) continue;
              ++nonzero;
              total.upper += c.value * b.upper;
              total.value += term.coefficient.abs() * b.value;
              total.exact = c.exact && b.exact;
            }
            if (nonzero > 1) total.exact = false;
            return total;
          },
          [&](const LazySum& s) {
            if (!s.majorant) throw Error(ErrorCode::Unbounded, "lazy sum '" + s.label + "' declares no majorant");
            const auto& m = s.majorant.value();
            if (sgn(m.ratio) < 0 || m.ratio >= 1) {
              throw Error(ErrorCode::Unbounded, "majorant of '" + s.label + "' is not summable");
            }
            const auto c = s.coefficient.abs_upper();
            Rational upper = c.value * Rational(static_cast<unsigned long>(m.block)) * m.first / (1 - m.ratio);
            return NormBound{upper, upper.get_d(), false};
          },
      },
      op.node());
}

// truncation and kernels --------------------------------------------------------

TruncationView truncate(const OperatorExpr& op, std::size_t dimension) {
  if (dimension == 0) throw Error(ErrorCode::Precondition, "truncation dimension must be positive");
  std::vector<SparseVector> columns;
  columns.reserve(dimension);
  std::optional<ArithmeticMode> mode;
  for (std::size_t j = 1; j <= dimension; ++j) {
    columns.push_back(apply(op, SparseVector::unit(static_cast<Coord>(j))));
    if (!mode) mode = columns.back().mode();
  }
  TruncationView view{dimension, DenseMatrix(dimension, dimension, mode.value_or(ArithmeticMode::exact)), false};
  const auto d = static_cast<Coord>(dimension);
  for (std::size_t j = 0; j < dimension; ++j) {
    for (const auto& [index, value] : columns[j].entries()) {
      if (index < 1 || index > d) {
        view.leaked = true;
        continue;
      }
      view.matrix(static_cast<std::size_t>(index - 1), j) = value;
    }
  }
  return view;
}

std::optional<std::size_t> generalized_kernel_exponent(const OperatorExpr& op, const SparseVector& v,
                                                       std::size_t k_max) {
  if (k_max == 0) throw Error(ErrorCode::Precondition, "k_max must be at least one");
  if (v.empty()) return 0;
  SparseVector x = v;
  for (std::size_t n = 1; n <= k_max; ++n) {
    x = apply(op, x);
    if (x.empty()) return n;
  }
  return std::nullopt;
}

DensityReport gk_density_report(const OperatorExpr& op, std::span<const Coord> coordinates, std::size_t k_max) {
  DensityReport report;
  report.k_max = k_max;
  report.dense_on_horizon = true;
  for (Coord c : coordinates) {
    auto exponent = generalized_kernel_exponent(op, SparseVector::unit(c), k_max);
    report.dense_on_horizon = report.dense_on_horizon && exponent.has_value();
    report.exponents.emplace_back(c, exponent);
  }
  return report;
}

DensityReport gk_density_report(const OperatorExpr& op, std::size_t horizon, std::size_t k_max) {
  std::vector<Coord> coords(horizon);
  for (std::size_t i = 0; i < horizon; ++i) coords[i] = static_cast<Coord>(i + 1);
  return gk_density_report(op, coords, k_max);
}

std::string describe(const OperatorExpr& op) {
  return std::visit(
      Overloaded{
          [](const DenseBlock& b) {
            return "dense_block(offset=" + std::to_string(b.offset) + ", size=" + std::to_string(b.entries.rows()) +
                   ")";
          },
          [](const WeightedShift& s) {
            std::string dir = s.direction == ShiftDirection::forward ? "forward" : "bilateral";
            std::string w = s.weights.is_closure()
                                ? s.weights.label()
                                : (s.weights.tail() ? to_string(s.weights.tail()->kind) : std::string("explicit"));
            return "weighted_shift(" + dir + ", " + w + ", stride=" + std::to_string(s.stride) + ")";
          },
          [](const RankOne& r) { return "rank_one(scale=" + r.scale.str() + ")"; },
          [](const ScalarIdentity& s) { return "scalar_identity(" + s.lambda.str() + ")"; },
          [](const Sum& s) {
            std::string out = "sum[";
            for (std::size_t i = 0; i < s.terms.size(); ++i) {
              if (i) out += " + ";
              out += s.terms[i].coefficient.str() + "*" + describe(s.terms[i].op);
            }
            return out + "]";
          },
          [](const LazySum& s) { return "lazy_sum(" + s.label + ")"; },
      },
      op.node());
}

}  // namespace gshift
