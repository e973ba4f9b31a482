#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gshift/linalg.hpp"
#include "gshift/scalar.hpp"
#include "gshift/vector.hpp"
#include "gshift/weights.hpp"

namespace gshift {

class OperatorExpr;

enum class ShiftDirection { forward, bilateral };

/// Square block acting on coordinates offset .. offset+n-1, zero elsewhere.
/// entries(i, j) is the coefficient of e_{offset+i} in the image of e_{offset+j}.
struct DenseBlock {
  Coord offset = 1;
  DenseMatrix entries;
};

/// S e_n = w_j e_{n+stride} for coordinates n = phase + (j-1)*stride. Forward
/// shifts only act on positions j >= 1; bilateral ones on every integer j.
/// The default stride/phase make position and coordinate coincide.
struct WeightedShift {
  ShiftDirection direction = ShiftDirection::forward;
  WeightSequence weights;
  std::int64_t stride = 1;
  Coord phase = 1;

  /// Chain position of coordinate n, or nullopt if the shift ignores n.
  [[nodiscard]] std::optional<std::int64_t> position_of(Coord n) const;
  [[nodiscard]] Coord coordinate_of(std::int64_t position) const { return phase + (position - 1) * stride; }
};

/// x -> scale * functional(x) * vector
struct RankOne {
  Functional functional;
  SparseVector vector;
  Scalar scale = 1;
};

struct ScalarIdentity {
  Scalar lambda = 1;
};

struct SumTerm;

/// For each touched coordinate, the term indices that may act nonzero on it.
/// `always` terms act everywhere. nullopt from `lookup` means the map has no
/// entry for that coordinate.
struct LocalityMap {
  std::vector<std::size_t> always;
  std::function<std::optional<std::vector<std::size_t>>(Coord)> lookup;
};

/// Terms k of a lazy sum satisfy ||term_k|| <= first * ratio^(k / block).
struct Majorant {
  Rational first;
  Rational ratio;
  std::size_t block = 1;
};

/// Finite linear combination of operators, optionally with a locality map.
struct Sum {
  std::vector<SumTerm> terms;
  std::optional<LocalityMap> locality;
};

/// Countable sum generated on demand. Applying it requires the locality map.
struct LazySum {
  std::function<OperatorExpr(std::size_t)> term;
  LocalityMap locality;
  std::optional<Majorant> majorant;
  Scalar coefficient = 1;
  std::string label;
};

/// Immutable, cheaply copyable column-finite operator expression.
class OperatorExpr {
 public:
  using Node = std::variant<DenseBlock, WeightedShift, RankOne, ScalarIdentity, Sum, LazySum>;

  OperatorExpr() : OperatorExpr(ScalarIdentity{Scalar(0)}) {}
  OperatorExpr(DenseBlock v) : node_(std::make_shared<const Node>(std::move(v))) {}
  OperatorExpr(WeightedShift v) : node_(std::make_shared<const Node>(std::move(v))) {}
  OperatorExpr(RankOne v) : node_(std::make_shared<const Node>(std::move(v))) {}
  OperatorExpr(ScalarIdentity v) : node_(std::make_shared<const Node>(std::move(v))) {}
  OperatorExpr(Sum v) : node_(std::make_shared<const Node>(std::move(v))) {}
  OperatorExpr(LazySum v) : node_(std::make_shared<const Node>(std::move(v))) {}

  [[nodiscard]] const Node& node() const noexcept { return *node_; }
  template <class T>
  [[nodiscard]] const T* as() const noexcept {
    return std::get_if<T>(node_.get());
  }

  /// Structural equality. Lazy sums only compare equal to themselves.
  friend bool operator==(const OperatorExpr& a, const OperatorExpr& b);

 private:
  std::shared_ptr<const Node> node_;
};

struct SumTerm {
  Scalar coefficient = 1;
  OperatorExpr op;
  friend bool operator==(const SumTerm&, const SumTerm&) = default;
};

// Constructors ---------------------------------------------------------------

OperatorExpr zero_operator();
OperatorExpr dense_block(Coord offset, DenseMatrix entries);
OperatorExpr forward_shift(WeightSequence weights);
OperatorExpr bilateral_shift(WeightSequence weights);
OperatorExpr rank_one(Functional f, SparseVector v, Scalar scale = 1);
OperatorExpr scalar_identity(Scalar lambda);
OperatorExpr sum(std::vector<SumTerm> terms);
/// a - b
OperatorExpr difference(const OperatorExpr& a, const OperatorExpr& b);

// Operations -----------------------------------------------------------------

SparseVector apply(const OperatorExpr& op, const SparseVector& v);
SparseVector power_apply(const OperatorExpr& op, SparseVector v, std::size_t n);

struct NormBound {
  Rational upper;
  double value = 0.0;
  bool exact = false;
};

NormBound operator_norm_bound(const OperatorExpr& op, NormMode p);

struct TruncationView {
  std::size_t dimension = 0;
  DenseMatrix matrix;  // over coordinates 1..dimension
  bool leaked = false;
};

TruncationView truncate(const OperatorExpr& op, std::size_t dimension);

/// Smallest n <= k_max with op^n v = 0 exactly.
std::optional<std::size_t> generalized_kernel_exponent(const OperatorExpr& op, const SparseVector& v,
                                                       std::size_t k_max);

struct DensityReport {
  std::vector<std::pair<Coord, std::optional<std::size_t>>> exponents;
  bool dense_on_horizon = false;
  std::size_t k_max = 0;
};

DensityReport gk_density_report(const OperatorExpr& op, std::span<const Coord> coordinates, std::size_t k_max);
/// Coordinates 1..horizon.
DensityReport gk_density_report(const OperatorExpr& op, std::size_t horizon, std::size_t k_max);

/// Human-readable one-line description.
std::string describe(const OperatorExpr& op);

}  // namespace gshift
