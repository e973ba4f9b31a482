#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gshift/errors.hpp"
#include "gshift/scalar.hpp"
#include "gshift/weights.hpp"

namespace gshift {

/// Windowed geometric mean (sup_j |w_j ... w_{j+n-1}|)^{1/n} over j in
/// [first_j, first_j + j_horizon).
struct WindowEstimate {
  std::size_t window = 0;
  std::int64_t argmax_j = 0;
  Rational sup_product_abs2;  // |w_j ... w_{j+n-1}|^2 at argmax_j (float mode: rounded up)
  double mean = 0.0;
  std::optional<Rational> exact_mean;

  /// Exact test mean >= c (c >= 0).
  [[nodiscard]] bool at_least(const Rational& c) const;
  /// Exact test mean < c (c >= 0).
  [[nodiscard]] bool below(const Rational& c) const { return !at_least(c); }
};

/// Evidence sequence g_1, ..., g_max_window for the spectral radius of the
/// weighted shift. Throws HorizonTooShort when a weight is unavailable.
std::vector<WindowEstimate> spectral_radius_estimate(const WeightSequence& weights, std::size_t max_window,
                                                     std::size_t j_horizon, std::int64_t first_j = 1);

/// Per-index bound on the biorthogonal functional norms ||e*_n||.
using FunctionalNormBound = std::function<Rational(std::int64_t)>;

inline FunctionalNormBound constant_functional_bound(Rational k) {
  return [k = std::move(k)](std::int64_t) { return k; };
}

/// Raised when some threshold has no admissible index within the horizon. The
/// indices found for earlier thresholds are kept.
class NotFoundWithinHorizon : public Error {
 public:
  NotFoundWithinHorizon(std::vector<std::int64_t> found, std::size_t missing_threshold, std::int64_t horizon_end)
      : Error(ErrorCode::NotFoundWithinHorizon,
              "threshold " + std::to_string(missing_threshold + 1) + " unmet up to index " +
                  std::to_string(horizon_end)),
        found_(std::move(found)),
        missing_(missing_threshold) {}

  [[nodiscard]] const std::vector<std::int64_t>& found() const noexcept { return found_; }
  [[nodiscard]] std::size_t missing_threshold() const noexcept { return missing_; }

 private:
  std::vector<std::int64_t> found_;
  std::size_t missing_;
};

/// Greedy strictly increasing indices n_1 < n_2 < ... in [first, last] with
/// |w_{n_j}| * ||e*_{n_j}|| < thresholds[j].
std::vector<std::int64_t> weight_null_subsequence(const WeightSequence& weights, const FunctionalNormBound& norms,
                                                  std::span<const Rational> thresholds, std::int64_t first,
                                                  std::int64_t last);

/// Smallest n in [from, last] with |w_n| * ||e*_n|| < threshold.
std::optional<std::int64_t> first_index_below(const WeightSequence& weights, const FunctionalNormBound& norms,
                                              const Rational& threshold, std::int64_t from, std::int64_t last);

}  // namespace gshift
